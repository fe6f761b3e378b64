#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deskagent/aci/tree.hpp"

namespace deskagent::aci {

/// The bounded primitive vocabulary, plus the DONE/FAIL control sentinels.
enum class ActionKind {
    click,
    type,
    scroll,
    hotkey,
    hold_and_press,
    drag_and_drop,
    save_to_buffer,
    switch_applications,
    wait,
    done,
    fail,
};

std::string_view action_kind_name(ActionKind kind);
std::optional<ActionKind> action_kind_from_name(std::string_view name);

/// One primitive with its typed arguments. Only the fields belonging to
/// `kind` are meaningful; factory helpers below set them.
struct Action {
    ActionKind kind = ActionKind::done;

    std::optional<int> element_id;  // click, type (optional), scroll (optional)
    int num_clicks = 1;
    std::string button_type = "left";  // left | right | middle
    std::vector<std::string> hold_keys;

    std::string text;            // type, save_to_buffer
    bool overwrite = false;      // type
    bool press_enter = false;    // type

    int scroll_clicks = 0;       // scroll; positive = up, negative = down

    std::vector<std::string> keys;        // hotkey
    std::vector<std::string> press_keys;  // hold_and_press

    std::optional<int> drag_from_id;  // drag_and_drop
    std::optional<int> drop_on_id;

    std::string app_code;   // switch_applications
    double wait_seconds = 0;  // wait

    static Action click(int element_id, int num_clicks = 1, std::string button = "left",
                        std::vector<std::string> hold_keys = {});
    static Action type_text(std::string text, std::optional<int> element_id = std::nullopt,
                            bool overwrite = false, bool enter = false);
    static Action scroll(std::optional<int> element_id, int clicks);
    static Action hotkey(std::vector<std::string> keys);
    static Action hold_and_press(std::vector<std::string> hold, std::vector<std::string> press);
    static Action drag_and_drop(int from_id, int on_id, std::vector<std::string> hold_keys = {});
    static Action save_to_buffer(std::string text);
    static Action switch_applications(std::string app_code);
    static Action wait(double seconds);
    static Action done();
    static Action fail();
};

/// Renders the action as its `agent.<primitive>(...)` literal.
std::string render_action(const Action& action);

enum class EventType {
    pointer_move,
    button_press,
    button_release,
    key_press,
    key_release,
    text_emit,
    app_activate,
    sleep,
    buffer_store,
};

/// One low-level input event of a compiled script.
struct Event {
    EventType type;
    int x = 0;
    int y = 0;
    std::string arg;       // button, key, text, or app code
    std::int64_t ms = 0;   // sleep duration

    static Event pointer_move(int x, int y);
    static Event button_press(std::string button);
    static Event button_release(std::string button);
    static Event key_press(std::string key);
    static Event key_release(std::string key);
    static Event text_emit(std::string text);
    static Event app_activate(std::string code);
    static Event sleep(std::int64_t ms);
    static Event buffer_store(std::string text);
};

/// Ordered event list; press events are balanced by matching releases.
struct EventScript {
    std::vector<Event> events;

    bool empty() const { return events.empty(); }
};

/// Line-per-event textual form, bit-exact for golden tests.
std::string render_event_script(const EventScript& script);

/// Checks `a` against the observation it was generated for. An empty result
/// means the action is valid; otherwise each entry names one violation.
std::vector<std::string> validate_action(const Action& a, const Observation& o);

/// Compiles one validated action into its deterministic event script.
/// DONE and FAIL compile to empty scripts. Throws CompileError if
/// validate_action(a, o) reports violations.
EventScript compile_action(const Action& a, const Observation& o);

}  // namespace deskagent::aci
