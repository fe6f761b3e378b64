#include "deskagent/sim/task.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::sim {

namespace {

constexpr int kSchemaVersion = 1;

std::string join_tree_lines(const nlohmann::json& node, const std::string& origin) {
    if (node.is_string()) return node.get<std::string>();
    if (!node.is_array()) {
        throw TaskLoadError(origin + ": tree must be a string or an array of lines");
    }
    std::string out;
    for (const auto& line : node) {
        if (!line.is_string()) throw TaskLoadError(origin + ": tree lines must be strings");
        out += line.get<std::string>();
        out += '\n';
    }
    return out;
}

Effect parse_effect(const nlohmann::json& node, const std::string& origin) {
    const std::string kind = node.value("effect", "");
    Effect effect;
    if (kind == "reveal") {
        effect.kind = EffectKind::reveal;
        effect.parent = node.value("parent", "");
        if (!node.contains("subtree")) {
            throw TaskLoadError(origin + ": reveal effect needs a subtree");
        }
        effect.subtree_text = join_tree_lines(node["subtree"], origin);
    } else if (kind == "remove") {
        effect.kind = EffectKind::remove;
        effect.target = node.value("target", "");
        if (effect.target.empty()) throw TaskLoadError(origin + ": remove effect needs a target");
    } else if (kind == "set_state") {
        effect.kind = EffectKind::set_state;
        effect.target = node.value("target", "");
        if (effect.target.empty()) {
            throw TaskLoadError(origin + ": set_state effect needs a target");
        }
        effect.add_states = node.value("add", std::vector<std::string>{});
        effect.remove_states = node.value("remove", std::vector<std::string>{});
    } else if (kind == "set_text") {
        effect.kind = EffectKind::set_text;
        effect.target = node.value("target", "");
        if (effect.target.empty()) throw TaskLoadError(origin + ": set_text effect needs a target");
        effect.text = node.value("text", "");
    } else {
        throw TaskLoadError(origin + ": unknown effect '" + kind + "'");
    }
    return effect;
}

EvalRule parse_rule(const nlohmann::json& node, const std::string& origin) {
    const std::string kind = node.value("rule", "");
    EvalRule rule;
    rule.app = node.value("app", "");
    rule.name = node.value("name", "");
    rule.value = node.value("value", "");
    if (kind == "element-exists") {
        rule.kind = RuleKind::element_exists;
    } else if (kind == "element-absent") {
        rule.kind = RuleKind::element_absent;
    } else if (kind == "attribute-equals") {
        rule.kind = RuleKind::attribute_equals;
        rule.attribute = node.value("attribute", "");
        if (rule.attribute != "text" && rule.attribute != "role") {
            throw TaskLoadError(origin + ": attribute-equals supports 'text' and 'role', got '" +
                                rule.attribute + "'");
        }
    } else if (kind == "buffer-equals") {
        rule.kind = RuleKind::buffer_equals;
        return rule;
    } else {
        throw TaskLoadError(origin + ": unknown evaluator rule '" + kind + "'");
    }
    if (rule.name.empty()) throw TaskLoadError(origin + ": rule '" + kind + "' needs a name");
    return rule;
}

void collect_names(const aci::RawNode& node, std::set<std::string>& names) {
    if (!node.name.empty()) names.insert(node.name);
    for (const auto& child : node.children) collect_names(child, names);
}

}  // namespace

EnvTask parse_task(const std::string& json_text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw TaskLoadError(origin + ": " + e.what());
    }
    if (doc.value("schema_version", 0) != kSchemaVersion) {
        throw TaskLoadError(origin + ": unsupported schema_version");
    }

    EnvTask task;
    task.id = doc.value("id", "");
    task.instruction = doc.value("instruction", "");
    task.focused_app = doc.value("focused_app", "");
    if (task.id.empty()) throw TaskLoadError(origin + ": missing id");
    if (trim(task.instruction).empty()) throw TaskLoadError(origin + ": missing instruction");
    if (!doc.contains("apps") || !doc["apps"].is_array() || doc["apps"].empty()) {
        throw TaskLoadError(origin + ": needs at least one app");
    }

    for (const auto& app_node : doc["apps"]) {
        AppSpec app;
        app.code = app_node.value("code", "");
        if (app.code.empty()) throw TaskLoadError(origin + ": app without code");
        if (!app_node.contains("tree")) {
            throw TaskLoadError(origin + ": app '" + app.code + "' has no tree");
        }
        app.tree_text = join_tree_lines(app_node["tree"], origin);
        try {
            aci::parse_tree_text(app.tree_text);
        } catch (const ParseError& e) {
            throw TaskLoadError(origin + ": app '" + app.code + "': " + e.what());
        }
        if (app_node.contains("ocr_blocks")) {
            for (const auto& block_node : app_node["ocr_blocks"]) {
                aci::OcrBlock block;
                block.text = block_node.value("text", "");
                block.bbox.x = block_node.value("x", 0);
                block.bbox.y = block_node.value("y", 0);
                block.bbox.w = block_node.value("w", 0);
                block.bbox.h = block_node.value("h", 0);
                if (trim(block.text).empty()) {
                    throw TaskLoadError(origin + ": OCR block with empty text");
                }
                if (block.bbox.w < 0 || block.bbox.h < 0) {
                    throw TaskLoadError(origin + ": OCR block with negative size");
                }
                app.ocr_blocks.push_back(std::move(block));
            }
        }
        if (app_node.contains("elements")) {
            for (const auto& [name, decl_node] : app_node["elements"].items()) {
                ElementDecl decl;
                if (decl_node.contains("on_click")) {
                    for (const auto& effect_node : decl_node["on_click"]) {
                        Effect effect = parse_effect(effect_node, origin);
                        if (effect.kind == EffectKind::reveal) {
                            try {
                                aci::parse_tree_text(effect.subtree_text);
                            } catch (const ParseError& e) {
                                throw TaskLoadError(origin + ": reveal subtree of '" + name +
                                                    "': " + e.what());
                            }
                        }
                        decl.on_click.push_back(std::move(effect));
                    }
                }
                if (decl_node.contains("text_mode")) {
                    const std::string mode = decl_node["text_mode"].get<std::string>();
                    if (mode != "append" && mode != "overwrite") {
                        throw TaskLoadError(origin + ": text_mode must be append or overwrite");
                    }
                    decl.text_mode = mode;
                }
                if (decl_node.contains("text")) {
                    decl.initial_text = decl_node["text"].get<std::string>();
                }
                app.elements.emplace(name, std::move(decl));
            }
        }
        task.apps.push_back(std::move(app));
    }

    if (task.focused_app.empty()) task.focused_app = task.apps.front().code;
    bool focused_found = false;
    for (const auto& app : task.apps) focused_found |= app.code == task.focused_app;
    if (!focused_found) {
        throw TaskLoadError(origin + ": focused_app '" + task.focused_app + "' is not an app");
    }

    if (doc.contains("evaluator")) {
        for (const auto& rule_node : doc["evaluator"]) {
            task.evaluator.push_back(parse_rule(rule_node, origin));
        }
    }
    return task;
}

EnvTask load_task(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TaskLoadError("cannot open task file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_task(buffer.str(), path.string());
}

std::vector<std::string> lint_task(const EnvTask& task) {
    std::vector<std::string> problems;
    std::map<std::string, std::set<std::string>> names_by_app;
    std::set<std::string> all_names;

    for (const auto& app : task.apps) {
        std::set<std::string>& names = names_by_app[app.code];
        const aci::RawTree initial = aci::parse_tree_text(app.tree_text);
        for (const auto& root : initial.roots) collect_names(root, names);
        for (const auto& [_, decl] : app.elements) {
            for (const auto& effect : decl.on_click) {
                if (effect.kind == EffectKind::reveal) {
                    const aci::RawTree revealed = aci::parse_tree_text(effect.subtree_text);
                    for (const auto& root : revealed.roots) collect_names(root, names);
                }
            }
        }
        all_names.insert(names.begin(), names.end());
    }

    for (const auto& app : task.apps) {
        const auto& names = names_by_app[app.code];
        auto check = [&](const std::string& name, const std::string& what) {
            if (!name.empty() && !names.count(name)) {
                problems.push_back("app '" + app.code + "': " + what + " '" + name +
                                   "' never appears in any tree");
            }
        };
        for (const auto& [name, decl] : app.elements) {
            check(name, "declared element");
            for (const auto& effect : decl.on_click) {
                check(effect.target, "effect target");
                check(effect.parent, "reveal anchor");
            }
        }
    }

    for (const auto& rule : task.evaluator) {
        if (rule.kind == RuleKind::buffer_equals) continue;
        // element-absent names legitimately vanish, but they must start somewhere
        const std::set<std::string>* names = &all_names;
        if (!rule.app.empty()) {
            auto it = names_by_app.find(rule.app);
            if (it == names_by_app.end()) {
                problems.push_back("evaluator rule names unknown app '" + rule.app + "'");
                continue;
            }
            names = &it->second;
        }
        if (!rule.name.empty() && !names->count(rule.name)) {
            problems.push_back("evaluator element '" + rule.name +
                               "' never appears in any tree");
        }
    }
    return problems;
}

}  // namespace deskagent::sim
