#include "deskagent/aci/tree.hpp"

#include <algorithm>
#include <sstream>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::aci {

namespace {

struct ParsedLine {
    int depth = 0;
    RawNode node;
};

ParsedLine parse_line(const std::string& line, std::size_t line_no) {
    auto fail = [line_no](const std::string& what) -> ParseError {
        return ParseError("tree line " + std::to_string(line_no) + ": " + what);
    };

    std::size_t pos = 0;
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos % 2 != 0) throw fail("indentation must be a multiple of two spaces");

    ParsedLine out;
    out.depth = static_cast<int>(pos / 2);

    std::size_t role_end = line.find(' ', pos);
    if (role_end == std::string::npos || role_end == pos) throw fail("missing role");
    out.node.role = line.substr(pos, role_end - pos);
    pos = role_end + 1;

    if (pos >= line.size() || line[pos] != '"') throw fail("missing quoted name");
    try {
        out.node.name = parse_quoted(line, pos);
    } catch (const ParseError& e) {
        throw fail(e.what());
    }

    std::istringstream rest(line.substr(pos));
    if (!(rest >> out.node.bbox.x >> out.node.bbox.y >> out.node.bbox.w >> out.node.bbox.h)) {
        throw fail("expected four integers x y w h");
    }
    if (out.node.bbox.w < 0 || out.node.bbox.h < 0) throw fail("negative width or height");

    std::string flag;
    while (rest >> flag) out.node.states.push_back(flag);
    return out;
}

void tag_subtree(const RawNode& node, std::optional<int> parent_tag, AccessibilityTree& out) {
    const int tag = static_cast<int>(out.nodes.size());
    UiElement element;
    element.tag = tag;
    element.role = node.role;
    element.name = node.name;
    element.bbox = node.bbox;
    element.states = node.states;
    element.source = ElementSource::tree;
    out.nodes.push_back(std::move(element));
    if (parent_tag) out.parent[tag] = *parent_tag;
    for (const RawNode& child : node.children) {
        tag_subtree(child, tag, out);
    }
}

void render_subtree(const RawNode& node, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += node.role;
    out += ' ';
    out += quote(node.name);
    out += ' ' + std::to_string(node.bbox.x) + ' ' + std::to_string(node.bbox.y) + ' ' +
           std::to_string(node.bbox.w) + ' ' + std::to_string(node.bbox.h);
    for (const auto& flag : node.states) {
        out += ' ';
        out += flag;
    }
    out += '\n';
    for (const RawNode& child : node.children) render_subtree(child, depth + 1, out);
}

}  // namespace

bool AccessibilityTree::has_tag(int tag) const {
    return find(tag) != nullptr;
}

const UiElement* AccessibilityTree::find(int tag) const {
    // Tags are dense 0..n-1 for tree nodes and keep increasing for OCR nodes,
    // so the index lookup is valid whenever nodes are unmodified post-tagging.
    if (tag >= 0 && static_cast<std::size_t>(tag) < nodes.size() &&
        nodes[static_cast<std::size_t>(tag)].tag == tag) {
        return &nodes[static_cast<std::size_t>(tag)];
    }
    for (const auto& node : nodes) {
        if (node.tag == tag) return &node;
    }
    return nullptr;
}

RawTree parse_tree_text(const std::string& text) {
    RawTree tree;
    std::vector<RawNode*> stack;  // stack[d] = last node seen at depth d
    std::size_t line_no = 0;
    for (const std::string& line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ParsedLine parsed = parse_line(line, line_no);
        if (parsed.depth > static_cast<int>(stack.size())) {
            throw ParseError("tree line " + std::to_string(line_no) +
                             ": depth jumps past parent");
        }
        stack.resize(static_cast<std::size_t>(parsed.depth));
        RawNode* placed = nullptr;
        if (parsed.depth == 0) {
            tree.roots.push_back(std::move(parsed.node));
            placed = &tree.roots.back();
        } else {
            RawNode* parent = stack[static_cast<std::size_t>(parsed.depth) - 1];
            parent->children.push_back(std::move(parsed.node));
            placed = &parent->children.back();
        }
        stack.push_back(placed);
    }
    return tree;
}

std::string render_tree_text(const RawTree& tree) {
    std::string out;
    for (const RawNode& root : tree.roots) render_subtree(root, 0, out);
    return out;
}

AccessibilityTree tag_tree(const RawTree& raw) {
    AccessibilityTree out;
    for (const RawNode& root : raw.roots) {
        tag_subtree(root, std::nullopt, out);
    }
    return out;
}

AccessibilityTree tag_tree(const std::string& serialized) {
    return tag_tree(parse_tree_text(serialized));
}

AccessibilityTree augment_with_ocr(const AccessibilityTree& tree,
                                   const std::vector<OcrBlock>& blocks,
                                   double iou_threshold) {
    AccessibilityTree out = tree;
    const std::size_t existing = tree.nodes.size();
    int next_tag = 0;
    for (const auto& node : tree.nodes) next_tag = std::max(next_tag, node.tag + 1);

    for (const OcrBlock& block : blocks) {
        const std::string text = trim(block.text);
        if (text.empty()) continue;
        double max_iou = 0.0;
        for (std::size_t i = 0; i < existing; ++i) {
            max_iou = std::max(max_iou, compute_iou(block.bbox, tree.nodes[i].bbox));
        }
        if (max_iou > iou_threshold) continue;  // already represented in the tree
        UiElement element;
        element.tag = next_tag++;
        element.role = "ocr-text";
        element.name = text;
        element.bbox = block.bbox;
        element.source = ElementSource::ocr;
        out.nodes.push_back(std::move(element));
    }
    return out;
}

std::string linearize(const AccessibilityTree& tree) {
    std::string out;
    for (const UiElement& node : tree.nodes) {
        out += '[' + std::to_string(node.tag) + "] " + node.role + ' ' + quote(node.name) + " (" +
               std::to_string(node.bbox.x) + ',' + std::to_string(node.bbox.y) + ',' +
               std::to_string(node.bbox.w) + ',' + std::to_string(node.bbox.h) + ')';
        for (const auto& flag : node.states) {
            out += ' ';
            out += flag;
        }
        out += '\n';
    }
    return out;
}

Observation make_observation(AccessibilityTree tree, std::optional<std::string> screenshot) {
    Observation obs;
    obs.linearized = linearize(tree);
    obs.tree = std::move(tree);
    obs.screenshot = std::move(screenshot);
    return obs;
}

}  // namespace deskagent::aci
