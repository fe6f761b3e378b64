#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deskagent/aci/geometry.hpp"

namespace deskagent::aci {

enum class ElementSource { tree, ocr };

/// One UI element of a tagged observation. Tags are unique within one tree.
struct UiElement {
    int tag = 0;
    std::string role;
    std::string name;
    BoundingBox bbox;
    std::vector<std::string> states;
    ElementSource source = ElementSource::tree;

    bool operator==(const UiElement&) const = default;
};

/// Tagged accessibility tree: nodes in deterministic pre-order, plus a
/// child-tag -> parent-tag map. Roots and appended OCR nodes have no parent.
struct AccessibilityTree {
    std::vector<UiElement> nodes;
    std::map<int, int> parent;

    bool has_tag(int tag) const;
    const UiElement* find(int tag) const;
};

/// Untagged input node, either parsed from the line serialization or built
/// in memory by an environment adapter.
struct RawNode {
    std::string role;
    std::string name;
    BoundingBox bbox;
    std::vector<std::string> states;
    std::vector<RawNode> children;
};

struct RawTree {
    std::vector<RawNode> roots;
};

/// Textual OCR block parsed from a screenshot by an external OCR feed.
struct OcrBlock {
    std::string text;  // non-empty after trim
    BoundingBox bbox;
};

/// The ACI's model-facing observation: tagged tree (post OCR augmentation),
/// optional screenshot reference, and the prompt-side text rendering.
struct Observation {
    AccessibilityTree tree;
    std::optional<std::string> screenshot;
    std::string linearized;
};

// Line serialization of an untagged tree, one node per line:
//   <2*depth spaces><role> "<name>" <x> <y> <w> <h> [flag ...]
// Child depth must be exactly parent depth + 1. Blank lines are ignored.
RawTree parse_tree_text(const std::string& text);
std::string render_tree_text(const RawTree& tree);

/// Assigns tags 0..n-1 in pre-order. Deterministic; preserves the parent map.
AccessibilityTree tag_tree(const RawTree& raw);

/// Parses the line serialization, then tags. Throws ParseError on malformed input.
AccessibilityTree tag_tree(const std::string& serialized);

/// Appends each block whose max IOU against all pre-existing element bboxes is
/// <= iou_threshold as a parentless "ocr-text" leaf with the next unused tag.
/// Pre-existing nodes are untouched. Blocks empty after trim are dropped.
AccessibilityTree augment_with_ocr(const AccessibilityTree& tree,
                                   const std::vector<OcrBlock>& blocks,
                                   double iou_threshold);

/// One line per element: `[tag] role "name" (x,y,w,h) states...`, in node order.
std::string linearize(const AccessibilityTree& tree);

/// Builds the full observation (linearized text included).
Observation make_observation(AccessibilityTree tree,
                             std::optional<std::string> screenshot = std::nullopt);

}  // namespace deskagent::aci
