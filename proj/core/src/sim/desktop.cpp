#include "deskagent/sim/desktop.hpp"

#include <algorithm>
#include <functional>

#include "deskagent/common/errors.hpp"

namespace deskagent::sim {

struct SimDesktop::Node {
    int uid = 0;
    std::string role;
    std::string name;
    aci::BoundingBox bbox;
    std::vector<std::string> states;
    std::string text;  // field content, evaluated by attribute-equals
    std::vector<Node> children;
};

struct SimDesktop::App {
    std::string code;
    std::vector<Node> roots;
    const AppSpec* spec = nullptr;
};

namespace {

using Node = SimDesktop::Node;

void for_each_node(std::vector<Node>& roots, const std::function<void(Node&, int)>& fn,
                   int depth = 0) {
    for (Node& node : roots) {
        fn(node, depth);
        for_each_node(node.children, fn, depth + 1);
    }
}

void for_each_node_const(const std::vector<Node>& roots,
                         const std::function<void(const Node&, int)>& fn, int depth = 0) {
    for (const Node& node : roots) {
        fn(node, depth);
        for_each_node_const(node.children, fn, depth + 1);
    }
}

Node* find_by_name(std::vector<Node>& roots, const std::string& name) {
    for (Node& node : roots) {
        if (node.name == name) return &node;
        if (Node* hit = find_by_name(node.children, name)) return hit;
    }
    return nullptr;
}

const Node* find_by_name_const(const std::vector<Node>& roots, const std::string& name) {
    for (const Node& node : roots) {
        if (node.name == name) return &node;
        if (const Node* hit = find_by_name_const(node.children, name)) return hit;
    }
    return nullptr;
}

bool remove_by_name(std::vector<Node>& roots, const std::string& name) {
    for (auto it = roots.begin(); it != roots.end(); ++it) {
        if (it->name == name) {
            roots.erase(it);
            return true;
        }
        if (remove_by_name(it->children, name)) return true;
    }
    return false;
}

bool contains_point(const aci::BoundingBox& box, int x, int y) {
    return x >= box.x && x < box.x + box.w && y >= box.y && y < box.y + box.h;
}

}  // namespace

SimDesktop::SimDesktop(EnvTask task, double iou_threshold)
    : task_(std::move(task)), iou_threshold_(iou_threshold) {
    rebuild();
}

SimDesktop::~SimDesktop() = default;

void SimDesktop::rebuild() {
    apps_.clear();
    next_uid_ = 0;
    buffer_.clear();
    clock_ms_ = 0;
    focus_uid_.reset();
    pointer_x_ = 0;
    pointer_y_ = 0;
    focused_app_ = task_.focused_app;

    for (const AppSpec& spec : task_.apps) {
        auto app = std::make_unique<App>();
        app->code = spec.code;
        app->spec = &spec;

        const aci::RawTree raw = aci::parse_tree_text(spec.tree_text);
        std::function<Node(const aci::RawNode&)> build = [&](const aci::RawNode& raw_node) {
            Node node;
            node.uid = next_uid_++;
            node.role = raw_node.role;
            node.name = raw_node.name;
            node.bbox = raw_node.bbox;
            node.states = raw_node.states;
            auto decl = spec.elements.find(raw_node.name);
            if (decl != spec.elements.end() && decl->second.initial_text) {
                node.text = *decl->second.initial_text;
            }
            for (const aci::RawNode& child : raw_node.children) {
                node.children.push_back(build(child));
            }
            return node;
        };
        for (const aci::RawNode& root : raw.roots) app->roots.push_back(build(root));
        apps_.push_back(std::move(app));
    }
}

SimDesktop::App* SimDesktop::find_app(const std::string& code) {
    for (auto& app : apps_) {
        if (app->code == code) return app.get();
    }
    return nullptr;
}

const SimDesktop::App* SimDesktop::find_app(const std::string& code) const {
    for (const auto& app : apps_) {
        if (app->code == code) return app.get();
    }
    return nullptr;
}

aci::Observation SimDesktop::reset() {
    rebuild();
    return observe();
}

aci::Observation SimDesktop::observe() {
    App* app = find_app(focused_app_);
    if (!app) throw EnvError("focused app vanished: " + focused_app_);

    aci::RawTree raw;
    std::function<aci::RawNode(const Node&)> project = [&](const Node& node) {
        aci::RawNode out;
        out.role = node.role;
        out.name = node.name;
        out.bbox = node.bbox;
        out.states = node.states;
        if (focus_uid_ && node.uid == *focus_uid_) out.states.push_back("focused");
        for (const Node& child : node.children) out.children.push_back(project(child));
        return out;
    };
    for (const Node& root : app->roots) raw.roots.push_back(project(root));

    aci::AccessibilityTree tree = aci::tag_tree(raw);
    tree = aci::augment_with_ocr(tree, app->spec->ocr_blocks, iou_threshold_);
    return aci::make_observation(std::move(tree));
}

StepResult SimDesktop::step(const aci::EventScript& script) {
    for (const aci::Event& event : script.events) {
        apply_event(event);
    }
    return {true, observe()};
}

void SimDesktop::apply_event(const aci::Event& event) {
    switch (event.type) {
        case aci::EventType::pointer_move:
            pointer_x_ = event.x;
            pointer_y_ = event.y;
            break;
        case aci::EventType::button_release:
            dispatch_click(event.arg);
            break;
        case aci::EventType::button_press:
        case aci::EventType::key_press:
        case aci::EventType::key_release:
            break;  // no declared semantics; succeed as no-ops
        case aci::EventType::text_emit: {
            if (!focus_uid_) break;
            App* app = find_app(focused_app_);
            if (!app) break;
            Node* target = nullptr;
            for_each_node(app->roots, [&](Node& node, int) {
                if (node.uid == *focus_uid_) target = &node;
            });
            if (!target) break;
            auto decl = app->spec->elements.find(target->name);
            const bool editable = target->role == "text-field" ||
                                  (decl != app->spec->elements.end() &&
                                   decl->second.text_mode.has_value());
            if (!editable) break;
            std::string mode = "append";
            if (decl != app->spec->elements.end() && decl->second.text_mode) {
                mode = *decl->second.text_mode;
            }
            if (mode == "overwrite") {
                target->text = event.arg;
            } else {
                target->text += event.arg;
            }
            break;
        }
        case aci::EventType::app_activate:
            if (find_app(event.arg)) {
                focused_app_ = event.arg;
                focus_uid_.reset();
            }
            break;
        case aci::EventType::sleep:
            clock_ms_ += event.ms;
            break;
        case aci::EventType::buffer_store:
            if (!buffer_.empty()) buffer_ += '\n';
            buffer_ += event.arg;
            break;
    }
}

void SimDesktop::dispatch_click(const std::string& button) {
    App* app = find_app(focused_app_);
    if (!app) return;

    // Deepest element containing the pointer wins; among equal depths the
    // later one in pre-order (drawn on top) wins.
    Node* hit = nullptr;
    int hit_depth = -1;
    for_each_node(app->roots, [&](Node& node, int depth) {
        if (contains_point(node.bbox, pointer_x_, pointer_y_) && depth >= hit_depth) {
            hit = &node;
            hit_depth = depth;
        }
    });
    if (!hit) {
        focus_uid_.reset();
        return;
    }
    focus_uid_ = hit->uid;
    if (button != "left") return;

    auto decl = app->spec->elements.find(hit->name);
    if (decl == app->spec->elements.end()) return;
    // Copy: effects may mutate the tree under the clicked node.
    const std::vector<Effect> effects = decl->second.on_click;
    for (const Effect& effect : effects) {
        apply_effect(*app, effect);
    }
}

void SimDesktop::apply_effect(App& app, const Effect& effect) {
    switch (effect.kind) {
        case EffectKind::reveal: {
            const aci::RawTree raw = aci::parse_tree_text(effect.subtree_text);
            std::function<Node(const aci::RawNode&)> build = [&](const aci::RawNode& raw_node) {
                Node node;
                node.uid = next_uid_++;
                node.role = raw_node.role;
                node.name = raw_node.name;
                node.bbox = raw_node.bbox;
                node.states = raw_node.states;
                auto decl = app.spec->elements.find(raw_node.name);
                if (decl != app.spec->elements.end() && decl->second.initial_text) {
                    node.text = *decl->second.initial_text;
                }
                for (const aci::RawNode& child : raw_node.children) {
                    node.children.push_back(build(child));
                }
                return node;
            };
            std::vector<Node>* anchor = &app.roots;
            if (!effect.parent.empty()) {
                Node* parent = find_by_name(app.roots, effect.parent);
                if (!parent) return;  // anchor gone; reveal fizzles
                anchor = &parent->children;
            }
            for (const aci::RawNode& root : raw.roots) anchor->push_back(build(root));
            break;
        }
        case EffectKind::remove: {
            if (focus_uid_) {
                // Drop focus if the focused node is inside the removed subtree.
                const Node* doomed = find_by_name_const(app.roots, effect.target);
                if (doomed) {
                    bool focus_inside = false;
                    for_each_node_const({*doomed}, [&](const Node& node, int) {
                        if (node.uid == *focus_uid_) focus_inside = true;
                    });
                    if (focus_inside) focus_uid_.reset();
                }
            }
            remove_by_name(app.roots, effect.target);
            break;
        }
        case EffectKind::set_state: {
            Node* target = find_by_name(app.roots, effect.target);
            if (!target) return;
            for (const std::string& state : effect.remove_states) {
                target->states.erase(
                    std::remove(target->states.begin(), target->states.end(), state),
                    target->states.end());
            }
            for (const std::string& state : effect.add_states) {
                if (std::find(target->states.begin(), target->states.end(), state) ==
                    target->states.end()) {
                    target->states.push_back(state);
                }
            }
            break;
        }
        case EffectKind::set_text: {
            Node* target = find_by_name(app.roots, effect.target);
            if (target) target->text = effect.text;
            break;
        }
    }
}

bool SimDesktop::evaluate() const {
    for (const EvalRule& rule : task_.evaluator) {
        bool pass = false;
        switch (rule.kind) {
            case RuleKind::buffer_equals:
                pass = buffer_ == rule.value;
                break;
            case RuleKind::element_exists:
            case RuleKind::element_absent: {
                bool exists = false;
                for (const auto& app : apps_) {
                    if (!rule.app.empty() && app->code != rule.app) continue;
                    exists |= find_by_name_const(app->roots, rule.name) != nullptr;
                }
                pass = (rule.kind == RuleKind::element_exists) ? exists : !exists;
                break;
            }
            case RuleKind::attribute_equals: {
                for (const auto& app : apps_) {
                    if (!rule.app.empty() && app->code != rule.app) continue;
                    const Node* node = find_by_name_const(app->roots, rule.name);
                    if (!node) continue;
                    const std::string& actual =
                        rule.attribute == "text" ? node->text : node->role;
                    if (actual == rule.value) {
                        pass = true;
                        break;
                    }
                }
                break;
            }
        }
        if (!pass) return false;
    }
    return true;
}

bool SimDesktop::element_exists(const std::string& app_code, const std::string& name) const {
    const App* app = find_app(app_code);
    return app && find_by_name_const(app->roots, name) != nullptr;
}

std::optional<std::string> SimDesktop::element_text(const std::string& app_code,
                                                    const std::string& name) const {
    const App* app = find_app(app_code);
    if (!app) return std::nullopt;
    const Node* node = find_by_name_const(app->roots, name);
    if (!node) return std::nullopt;
    return node->text;
}

}  // namespace deskagent::sim
