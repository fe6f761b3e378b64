#include "deskagent/aci/action.hpp"

#include <cmath>
#include <sstream>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::aci {

namespace {

const char* kButtonTypes[] = {"left", "right", "middle"};

bool valid_button(const std::string& b) {
    for (const char* known : kButtonTypes) {
        if (b == known) return true;
    }
    return false;
}

std::string render_key_list(const std::vector<std::string>& keys) {
    std::string out = "[";
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i) out += ", ";
        out += '\'' + keys[i] + '\'';
    }
    out += ']';
    return out;
}

void check_element(const Observation& o, const std::optional<int>& id, const char* arg_name,
                   std::vector<std::string>& violations) {
    if (id && !o.tree.has_tag(*id)) {
        violations.push_back(std::string(arg_name) + " refers to unknown tag " +
                             std::to_string(*id));
    }
}

BoundingBox bbox_of(const Observation& o, int tag) {
    const UiElement* element = o.tree.find(tag);
    if (!element) throw CompileError("unknown tag " + std::to_string(tag));
    return element->bbox;
}

void emit_click_events(EventScript& script, const BoundingBox& box, int num_clicks,
                       const std::string& button, const std::vector<std::string>& hold_keys) {
    script.events.push_back(Event::pointer_move(box.center_x(), box.center_y()));
    for (const auto& key : hold_keys) script.events.push_back(Event::key_press(key));
    for (int i = 0; i < num_clicks; ++i) {
        script.events.push_back(Event::button_press(button));
        script.events.push_back(Event::button_release(button));
    }
    for (auto it = hold_keys.rbegin(); it != hold_keys.rend(); ++it) {
        script.events.push_back(Event::key_release(*it));
    }
}

}  // namespace

std::string_view action_kind_name(ActionKind kind) {
    switch (kind) {
        case ActionKind::click: return "click";
        case ActionKind::type: return "type";
        case ActionKind::scroll: return "scroll";
        case ActionKind::hotkey: return "hotkey";
        case ActionKind::hold_and_press: return "hold_and_press";
        case ActionKind::drag_and_drop: return "drag_and_drop";
        case ActionKind::save_to_buffer: return "save_to_buffer";
        case ActionKind::switch_applications: return "switch_applications";
        case ActionKind::wait: return "wait";
        case ActionKind::done: return "done";
        case ActionKind::fail: return "fail";
    }
    return "unknown";
}

std::optional<ActionKind> action_kind_from_name(std::string_view name) {
    static const std::pair<std::string_view, ActionKind> table[] = {
        {"click", ActionKind::click},
        {"type", ActionKind::type},
        {"scroll", ActionKind::scroll},
        {"hotkey", ActionKind::hotkey},
        {"hold_and_press", ActionKind::hold_and_press},
        {"drag_and_drop", ActionKind::drag_and_drop},
        {"save_to_buffer", ActionKind::save_to_buffer},
        {"switch_applications", ActionKind::switch_applications},
        {"wait", ActionKind::wait},
        {"done", ActionKind::done},
        {"fail", ActionKind::fail},
    };
    for (const auto& [n, k] : table) {
        if (n == name) return k;
    }
    return std::nullopt;
}

Action Action::click(int element_id, int num_clicks, std::string button,
                     std::vector<std::string> hold_keys) {
    Action a;
    a.kind = ActionKind::click;
    a.element_id = element_id;
    a.num_clicks = num_clicks;
    a.button_type = std::move(button);
    a.hold_keys = std::move(hold_keys);
    return a;
}

Action Action::type_text(std::string text, std::optional<int> element_id, bool overwrite,
                         bool enter) {
    Action a;
    a.kind = ActionKind::type;
    a.text = std::move(text);
    a.element_id = element_id;
    a.overwrite = overwrite;
    a.press_enter = enter;
    return a;
}

Action Action::scroll(std::optional<int> element_id, int clicks) {
    Action a;
    a.kind = ActionKind::scroll;
    a.element_id = element_id;
    a.scroll_clicks = clicks;
    return a;
}

Action Action::hotkey(std::vector<std::string> keys) {
    Action a;
    a.kind = ActionKind::hotkey;
    a.keys = std::move(keys);
    return a;
}

Action Action::hold_and_press(std::vector<std::string> hold, std::vector<std::string> press) {
    Action a;
    a.kind = ActionKind::hold_and_press;
    a.hold_keys = std::move(hold);
    a.press_keys = std::move(press);
    return a;
}

Action Action::drag_and_drop(int from_id, int on_id, std::vector<std::string> hold_keys) {
    Action a;
    a.kind = ActionKind::drag_and_drop;
    a.drag_from_id = from_id;
    a.drop_on_id = on_id;
    a.hold_keys = std::move(hold_keys);
    return a;
}

Action Action::save_to_buffer(std::string text) {
    Action a;
    a.kind = ActionKind::save_to_buffer;
    a.text = std::move(text);
    return a;
}

Action Action::switch_applications(std::string app_code) {
    Action a;
    a.kind = ActionKind::switch_applications;
    a.app_code = std::move(app_code);
    return a;
}

Action Action::wait(double seconds) {
    Action a;
    a.kind = ActionKind::wait;
    a.wait_seconds = seconds;
    return a;
}

Action Action::done() {
    Action a;
    a.kind = ActionKind::done;
    return a;
}

Action Action::fail() {
    Action a;
    a.kind = ActionKind::fail;
    return a;
}

std::string render_action(const Action& a) {
    std::ostringstream out;
    out << "agent." << action_kind_name(a.kind) << '(';
    switch (a.kind) {
        case ActionKind::click:
            out << (a.element_id ? std::to_string(*a.element_id) : "None") << ", " << a.num_clicks
                << ", \"" << a.button_type << '"';
            if (!a.hold_keys.empty()) out << ", hold_keys=" << render_key_list(a.hold_keys);
            break;
        case ActionKind::type:
            out << "text=" << quote(a.text);
            if (a.element_id) out << ", element_id=" << *a.element_id;
            if (a.overwrite) out << ", overwrite=True";
            if (a.press_enter) out << ", enter=True";
            break;
        case ActionKind::scroll:
            if (a.element_id) out << *a.element_id << ", ";
            out << "clicks=" << a.scroll_clicks;
            break;
        case ActionKind::hotkey:
            out << render_key_list(a.keys);
            break;
        case ActionKind::hold_and_press:
            out << render_key_list(a.hold_keys) << ", " << render_key_list(a.press_keys);
            break;
        case ActionKind::drag_and_drop:
            out << (a.drag_from_id ? std::to_string(*a.drag_from_id) : "None") << ", "
                << (a.drop_on_id ? std::to_string(*a.drop_on_id) : "None");
            if (!a.hold_keys.empty()) out << ", hold_keys=" << render_key_list(a.hold_keys);
            break;
        case ActionKind::save_to_buffer:
            out << "text=" << quote(a.text);
            break;
        case ActionKind::switch_applications:
            out << '\'' << a.app_code << '\'';
            break;
        case ActionKind::wait: {
            std::ostringstream secs;
            secs << a.wait_seconds;
            out << secs.str();
            break;
        }
        case ActionKind::done:
        case ActionKind::fail:
            break;
    }
    out << ')';
    return out.str();
}

Event Event::pointer_move(int x, int y) { return {EventType::pointer_move, x, y, "", 0}; }
Event Event::button_press(std::string b) { return {EventType::button_press, 0, 0, std::move(b), 0}; }
Event Event::button_release(std::string b) {
    return {EventType::button_release, 0, 0, std::move(b), 0};
}
Event Event::key_press(std::string k) { return {EventType::key_press, 0, 0, std::move(k), 0}; }
Event Event::key_release(std::string k) { return {EventType::key_release, 0, 0, std::move(k), 0}; }
Event Event::text_emit(std::string t) { return {EventType::text_emit, 0, 0, std::move(t), 0}; }
Event Event::app_activate(std::string c) { return {EventType::app_activate, 0, 0, std::move(c), 0}; }
Event Event::sleep(std::int64_t ms) { return {EventType::sleep, 0, 0, "", ms}; }
Event Event::buffer_store(std::string t) { return {EventType::buffer_store, 0, 0, std::move(t), 0}; }

std::string render_event_script(const EventScript& script) {
    std::string out;
    for (const Event& e : script.events) {
        switch (e.type) {
            case EventType::pointer_move:
                out += "pointer-move " + std::to_string(e.x) + ' ' + std::to_string(e.y);
                break;
            case EventType::button_press: out += "button-press " + e.arg; break;
            case EventType::button_release: out += "button-release " + e.arg; break;
            case EventType::key_press: out += "key-press " + e.arg; break;
            case EventType::key_release: out += "key-release " + e.arg; break;
            case EventType::text_emit: out += "text-emit " + quote(e.arg); break;
            case EventType::app_activate: out += "app-activate " + quote(e.arg); break;
            case EventType::sleep: out += "sleep " + std::to_string(e.ms); break;
            case EventType::buffer_store: out += "buffer-store " + quote(e.arg); break;
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> validate_action(const Action& a, const Observation& o) {
    std::vector<std::string> violations;
    switch (a.kind) {
        case ActionKind::click:
            if (!a.element_id) {
                violations.push_back("click requires element_id");
            } else {
                check_element(o, a.element_id, "element_id", violations);
            }
            if (a.num_clicks < 1) violations.push_back("num_clicks must be >= 1");
            if (!valid_button(a.button_type)) {
                violations.push_back("button_type must be one of left, right, middle");
            }
            break;
        case ActionKind::type:
            check_element(o, a.element_id, "element_id", violations);
            break;
        case ActionKind::scroll:
            check_element(o, a.element_id, "element_id", violations);
            break;
        case ActionKind::hotkey:
            if (a.keys.empty()) violations.push_back("hotkey requires a non-empty key list");
            break;
        case ActionKind::hold_and_press:
            if (a.hold_keys.empty() && a.press_keys.empty()) {
                violations.push_back("hold_and_press requires at least one key");
            }
            break;
        case ActionKind::drag_and_drop:
            if (!a.drag_from_id || !a.drop_on_id) {
                violations.push_back("drag_and_drop requires drag_from_id and drop_on_id");
            }
            check_element(o, a.drag_from_id, "drag_from_id", violations);
            check_element(o, a.drop_on_id, "drop_on_id", violations);
            break;
        case ActionKind::save_to_buffer:
            break;
        case ActionKind::switch_applications:
            if (trim(a.app_code).empty()) {
                violations.push_back("switch_applications requires an app_code");
            }
            break;
        case ActionKind::wait:
            if (!(a.wait_seconds > 0)) violations.push_back("wait time must be positive");
            break;
        case ActionKind::done:
        case ActionKind::fail:
            break;
    }
    return violations;
}

EventScript compile_action(const Action& a, const Observation& o) {
    const auto violations = validate_action(a, o);
    if (!violations.empty()) {
        std::string msg = "cannot compile invalid action " + render_action(a) + ":";
        for (const auto& v : violations) msg += ' ' + v + ';';
        throw CompileError(msg);
    }

    EventScript script;
    switch (a.kind) {
        case ActionKind::click:
            emit_click_events(script, bbox_of(o, *a.element_id), a.num_clicks, a.button_type,
                              a.hold_keys);
            break;
        case ActionKind::type:
            if (a.element_id) {
                emit_click_events(script, bbox_of(o, *a.element_id), 1, "left", {});
            }
            if (a.overwrite) {
                script.events.push_back(Event::key_press("ctrl"));
                script.events.push_back(Event::key_press("a"));
                script.events.push_back(Event::key_release("a"));
                script.events.push_back(Event::key_release("ctrl"));
                script.events.push_back(Event::key_press("delete"));
                script.events.push_back(Event::key_release("delete"));
            }
            script.events.push_back(Event::text_emit(a.text));
            if (a.press_enter) {
                script.events.push_back(Event::key_press("enter"));
                script.events.push_back(Event::key_release("enter"));
            }
            break;
        case ActionKind::scroll: {
            if (a.element_id) {
                const BoundingBox box = bbox_of(o, *a.element_id);
                script.events.push_back(Event::pointer_move(box.center_x(), box.center_y()));
            }
            const std::string wheel = a.scroll_clicks >= 0 ? "wheel-up" : "wheel-down";
            const int n = std::abs(a.scroll_clicks);
            for (int i = 0; i < n; ++i) {
                script.events.push_back(Event::button_press(wheel));
                script.events.push_back(Event::button_release(wheel));
            }
            break;
        }
        case ActionKind::hotkey:
            for (const auto& key : a.keys) script.events.push_back(Event::key_press(key));
            for (auto it = a.keys.rbegin(); it != a.keys.rend(); ++it) {
                script.events.push_back(Event::key_release(*it));
            }
            break;
        case ActionKind::hold_and_press:
            for (const auto& key : a.hold_keys) script.events.push_back(Event::key_press(key));
            for (const auto& key : a.press_keys) {
                script.events.push_back(Event::key_press(key));
                script.events.push_back(Event::key_release(key));
            }
            for (auto it = a.hold_keys.rbegin(); it != a.hold_keys.rend(); ++it) {
                script.events.push_back(Event::key_release(*it));
            }
            break;
        case ActionKind::drag_and_drop: {
            const BoundingBox from = bbox_of(o, *a.drag_from_id);
            const BoundingBox to = bbox_of(o, *a.drop_on_id);
            for (const auto& key : a.hold_keys) script.events.push_back(Event::key_press(key));
            script.events.push_back(Event::pointer_move(from.center_x(), from.center_y()));
            script.events.push_back(Event::button_press("left"));
            script.events.push_back(Event::pointer_move(to.center_x(), to.center_y()));
            script.events.push_back(Event::button_release("left"));
            for (auto it = a.hold_keys.rbegin(); it != a.hold_keys.rend(); ++it) {
                script.events.push_back(Event::key_release(*it));
            }
            break;
        }
        case ActionKind::save_to_buffer:
            script.events.push_back(Event::buffer_store(a.text));
            break;
        case ActionKind::switch_applications:
            script.events.push_back(Event::app_activate(a.app_code));
            break;
        case ActionKind::wait:
            script.events.push_back(
                Event::sleep(static_cast<std::int64_t>(std::llround(a.wait_seconds * 1000.0))));
            break;
        case ActionKind::done:
        case ActionKind::fail:
            break;  // control-flow sentinels, no events
    }
    return script;
}

}  // namespace deskagent::aci
