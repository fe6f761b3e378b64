#include "deskagent/aci/action_literal.hpp"

#include <cctype>
#include <map>
#include <variant>

#include "deskagent/common/errors.hpp"

namespace deskagent::aci {

namespace {

struct None {};
using Value = std::variant<None, std::int64_t, double, std::string, bool, std::vector<std::string>>;

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    void expect(char c) {
        if (!at(c)) throw ParseError(std::string("expected '") + c + "' in action literal");
        ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string parse_ident(Cursor& cur) {
    cur.skip_ws();
    std::size_t start = cur.pos;
    while (cur.pos < cur.text.size() && ident_char(cur.text[cur.pos])) ++cur.pos;
    if (cur.pos == start) throw ParseError("expected identifier in action literal");
    return cur.text.substr(start, cur.pos - start);
}

std::string parse_string(Cursor& cur) {
    const char open = cur.text[cur.pos];
    ++cur.pos;
    std::string out;
    while (cur.pos < cur.text.size()) {
        char c = cur.text[cur.pos];
        if (c == open) {
            ++cur.pos;
            return out;
        }
        if (c == '\\' && cur.pos + 1 < cur.text.size()) {
            char next = cur.text[cur.pos + 1];
            switch (next) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case '\\': out.push_back('\\'); break;
                case '\'': out.push_back('\''); break;
                case '"': out.push_back('"'); break;
                default: out.push_back(next);
            }
            cur.pos += 2;
            continue;
        }
        out.push_back(c);
        ++cur.pos;
    }
    throw ParseError("unterminated string in action literal");
}

Value parse_value(Cursor& cur);

std::vector<std::string> parse_string_list(Cursor& cur) {
    cur.expect('[');
    std::vector<std::string> out;
    if (cur.at(']')) {
        ++cur.pos;
        return out;
    }
    while (true) {
        Value v = parse_value(cur);
        if (auto* s = std::get_if<std::string>(&v)) {
            out.push_back(*s);
        } else {
            throw ParseError("lists in action literals may contain only strings");
        }
        if (cur.at(',')) {
            ++cur.pos;
            continue;
        }
        cur.expect(']');
        return out;
    }
}

Value parse_value(Cursor& cur) {
    cur.skip_ws();
    if (cur.pos >= cur.text.size()) throw ParseError("unexpected end of action literal");
    char c = cur.text[cur.pos];
    if (c == '\'' || c == '"') return parse_string(cur);
    if (c == '[') return parse_string_list(cur);
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = cur.pos;
        if (c == '-') ++cur.pos;
        bool is_float = false;
        while (cur.pos < cur.text.size() &&
               (std::isdigit(static_cast<unsigned char>(cur.text[cur.pos])) ||
                cur.text[cur.pos] == '.')) {
            if (cur.text[cur.pos] == '.') is_float = true;
            ++cur.pos;
        }
        const std::string token = cur.text.substr(start, cur.pos - start);
        try {
            if (is_float) return std::stod(token);
            return static_cast<std::int64_t>(std::stoll(token));
        } catch (const std::exception&) {
            throw ParseError("bad numeric literal '" + token + "'");
        }
    }
    std::string ident = parse_ident(cur);
    if (ident == "True" || ident == "true") return true;
    if (ident == "False" || ident == "false") return false;
    if (ident == "None" || ident == "none") return None{};
    return ident;  // bare word, e.g. an unquoted button name
}

struct ParsedCall {
    std::string name;
    std::vector<Value> positional;
    std::map<std::string, Value> kwargs;
};

ParsedCall parse_call(const std::string& text) {
    const std::size_t anchor = text.find("agent.");
    if (anchor == std::string::npos) {
        throw ParseError("grounded action must use the agent.<primitive>(...) form");
    }
    Cursor cur{text, anchor + 6};
    ParsedCall call;
    call.name = parse_ident(cur);
    cur.expect('(');
    if (cur.at(')')) {
        ++cur.pos;
        return call;
    }
    while (true) {
        cur.skip_ws();
        // keyword arg when an identifier is directly followed by '='
        std::size_t mark = cur.pos;
        bool is_kwarg = false;
        std::string key;
        if (cur.pos < cur.text.size() &&
            (std::isalpha(static_cast<unsigned char>(cur.text[cur.pos])) ||
             cur.text[cur.pos] == '_')) {
            key = parse_ident(cur);
            cur.skip_ws();
            if (cur.pos < cur.text.size() && cur.text[cur.pos] == '=') {
                ++cur.pos;
                is_kwarg = true;
            } else {
                cur.pos = mark;
            }
        }
        Value v = parse_value(cur);
        if (is_kwarg) {
            call.kwargs[key] = std::move(v);
        } else {
            if (!call.kwargs.empty()) {
                throw ParseError("positional argument after keyword argument");
            }
            call.positional.push_back(std::move(v));
        }
        if (cur.at(',')) {
            ++cur.pos;
            continue;
        }
        cur.expect(')');
        return call;
    }
}

std::int64_t as_int(const Value& v, const char* what) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw ParseError(std::string(what) + " must be an integer");
}

std::string as_string(const Value& v, const char* what) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    throw ParseError(std::string(what) + " must be a string");
}

std::vector<std::string> as_list(const Value& v, const char* what) {
    if (auto* l = std::get_if<std::vector<std::string>>(&v)) return *l;
    throw ParseError(std::string(what) + " must be a list of strings");
}

bool as_bool(const Value& v, const char* what) {
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw ParseError(std::string(what) + " must be True or False");
}

double as_number(const Value& v, const char* what) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ParseError(std::string(what) + " must be a number");
}

bool is_none(const Value& v) { return std::holds_alternative<None>(v); }

const Value* find_kwarg(const ParsedCall& call, const std::string& key) {
    auto it = call.kwargs.find(key);
    return it == call.kwargs.end() ? nullptr : &it->second;
}

Action map_click(const ParsedCall& call) {
    Action a = Action::click(0);
    a.element_id.reset();
    const char* names[] = {"element_id", "num_clicks", "button_type", "hold_keys"};
    for (std::size_t i = 0; i < call.positional.size(); ++i) {
        if (i >= 4) throw ParseError("click takes at most 4 arguments");
        const Value& v = call.positional[i];
        switch (i) {
            case 0: a.element_id = static_cast<int>(as_int(v, names[0])); break;
            case 1: a.num_clicks = static_cast<int>(as_int(v, names[1])); break;
            case 2: a.button_type = as_string(v, names[2]); break;
            case 3: a.hold_keys = as_list(v, names[3]); break;
        }
    }
    if (auto* v = find_kwarg(call, "element_id")) a.element_id = static_cast<int>(as_int(*v, "element_id"));
    if (auto* v = find_kwarg(call, "num_clicks")) a.num_clicks = static_cast<int>(as_int(*v, "num_clicks"));
    if (auto* v = find_kwarg(call, "button_type")) a.button_type = as_string(*v, "button_type");
    if (auto* v = find_kwarg(call, "hold_keys")) a.hold_keys = as_list(*v, "hold_keys");
    if (!a.element_id) throw ParseError("click requires element_id");
    return a;
}

Action map_type(const ParsedCall& call) {
    Action a = Action::type_text("");
    bool have_text = false;
    // The positional order of text and element_id is not fixed in the wild;
    // integers bind to element_id and strings to text.
    for (const Value& v : call.positional) {
        if (is_none(v)) continue;
        if (std::holds_alternative<std::int64_t>(v)) {
            a.element_id = static_cast<int>(as_int(v, "element_id"));
        } else if (std::holds_alternative<std::string>(v)) {
            if (have_text) throw ParseError("type got two text arguments");
            a.text = as_string(v, "text");
            have_text = true;
        } else if (std::holds_alternative<bool>(v)) {
            throw ParseError("type flags must be passed by keyword");
        } else {
            throw ParseError("unsupported positional argument for type");
        }
    }
    if (auto* v = find_kwarg(call, "text")) {
        a.text = as_string(*v, "text");
        have_text = true;
    }
    if (auto* v = find_kwarg(call, "element_id")) {
        if (!is_none(*v)) a.element_id = static_cast<int>(as_int(*v, "element_id"));
    }
    if (auto* v = find_kwarg(call, "overwrite")) a.overwrite = as_bool(*v, "overwrite");
    if (auto* v = find_kwarg(call, "enter")) a.press_enter = as_bool(*v, "enter");
    if (!have_text) throw ParseError("type requires text");
    return a;
}

Action map_scroll(const ParsedCall& call) {
    std::optional<int> element_id;
    std::optional<int> clicks;
    if (call.positional.size() == 1) {
        clicks = static_cast<int>(as_int(call.positional[0], "clicks"));
    } else if (call.positional.size() == 2) {
        element_id = static_cast<int>(as_int(call.positional[0], "element_id"));
        clicks = static_cast<int>(as_int(call.positional[1], "clicks"));
    } else if (call.positional.size() > 2) {
        throw ParseError("scroll takes at most 2 arguments");
    }
    if (auto* v = find_kwarg(call, "element_id")) {
        if (!is_none(*v)) element_id = static_cast<int>(as_int(*v, "element_id"));
    }
    if (auto* v = find_kwarg(call, "clicks")) clicks = static_cast<int>(as_int(*v, "clicks"));
    if (!clicks) throw ParseError("scroll requires clicks");
    return Action::scroll(element_id, *clicks);
}

Action map_hotkey(const ParsedCall& call) {
    std::vector<std::string> keys;
    if (call.positional.size() == 1) {
        keys = as_list(call.positional[0], "keys");
    } else if (!call.positional.empty()) {
        throw ParseError("hotkey takes one list argument");
    }
    if (auto* v = find_kwarg(call, "keys")) keys = as_list(*v, "keys");
    return Action::hotkey(std::move(keys));
}

Action map_hold_and_press(const ParsedCall& call) {
    std::vector<std::string> hold;
    std::vector<std::string> press;
    if (call.positional.size() >= 1) hold = as_list(call.positional[0], "hold_keys");
    if (call.positional.size() >= 2) press = as_list(call.positional[1], "press_keys");
    if (call.positional.size() > 2) throw ParseError("hold_and_press takes two list arguments");
    if (auto* v = find_kwarg(call, "hold_keys")) hold = as_list(*v, "hold_keys");
    if (auto* v = find_kwarg(call, "press_keys")) press = as_list(*v, "press_keys");
    return Action::hold_and_press(std::move(hold), std::move(press));
}

Action map_drag_and_drop(const ParsedCall& call) {
    std::optional<int> from;
    std::optional<int> on;
    std::vector<std::string> hold;
    if (call.positional.size() >= 1) from = static_cast<int>(as_int(call.positional[0], "drag_from_id"));
    if (call.positional.size() >= 2) on = static_cast<int>(as_int(call.positional[1], "drop_on_id"));
    if (call.positional.size() >= 3) hold = as_list(call.positional[2], "hold_keys");
    if (call.positional.size() > 3) throw ParseError("drag_and_drop takes at most 3 arguments");
    if (auto* v = find_kwarg(call, "drag_from_id")) from = static_cast<int>(as_int(*v, "drag_from_id"));
    if (auto* v = find_kwarg(call, "drop_on_id")) on = static_cast<int>(as_int(*v, "drop_on_id"));
    if (auto* v = find_kwarg(call, "hold_keys")) hold = as_list(*v, "hold_keys");
    if (!from || !on) throw ParseError("drag_and_drop requires drag_from_id and drop_on_id");
    return Action::drag_and_drop(*from, *on, std::move(hold));
}

}  // namespace

Action parse_action_literal(const std::string& text) {
    ParsedCall call = parse_call(text);
    auto kind = action_kind_from_name(call.name);
    if (!kind) throw ParseError("unknown primitive agent." + call.name);

    switch (*kind) {
        case ActionKind::click: return map_click(call);
        case ActionKind::type: return map_type(call);
        case ActionKind::scroll: return map_scroll(call);
        case ActionKind::hotkey: return map_hotkey(call);
        case ActionKind::hold_and_press: return map_hold_and_press(call);
        case ActionKind::drag_and_drop: return map_drag_and_drop(call);
        case ActionKind::save_to_buffer: {
            std::string text_arg;
            bool have = false;
            if (call.positional.size() == 1) {
                text_arg = as_string(call.positional[0], "text");
                have = true;
            }
            if (auto* v = find_kwarg(call, "text")) {
                text_arg = as_string(*v, "text");
                have = true;
            }
            if (!have) throw ParseError("save_to_buffer requires text");
            return Action::save_to_buffer(std::move(text_arg));
        }
        case ActionKind::switch_applications: {
            std::string code;
            if (call.positional.size() == 1) code = as_string(call.positional[0], "app_code");
            if (auto* v = find_kwarg(call, "app_code")) code = as_string(*v, "app_code");
            if (code.empty()) throw ParseError("switch_applications requires app_code");
            return Action::switch_applications(std::move(code));
        }
        case ActionKind::wait: {
            std::optional<double> seconds;
            if (call.positional.size() == 1) seconds = as_number(call.positional[0], "time");
            if (auto* v = find_kwarg(call, "time")) seconds = as_number(*v, "time");
            if (!seconds) throw ParseError("wait requires time");
            return Action::wait(*seconds);
        }
        case ActionKind::done:
            return Action::done();  // stray arguments tolerated
        case ActionKind::fail:
            return Action::fail();
    }
    throw ParseError("unreachable");
}

}  // namespace deskagent::aci
