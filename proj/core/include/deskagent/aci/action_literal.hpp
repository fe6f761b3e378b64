#pragma once

#include <string>

#include "deskagent/aci/action.hpp"

namespace deskagent::aci {

// Parses a grounded-action literal of the form `agent.<primitive>(args...)`.
// Arguments follow Python call syntax: positional and keyword args, single- or
// double-quoted strings, integers, floats, True/False/None, and flat lists of
// strings. Bare identifiers (e.g. an unquoted button name) are read as strings.
// Text before the `agent.` prefix and after the closing parenthesis is ignored,
// so the literal can be embedded in a response line.
//
// Argument layouts per primitive:
//   click(element_id, num_clicks=1, button_type="left", hold_keys=[])
//   type(text / element_id in either positional order, overwrite=..., enter=...)
//   scroll(element_id, clicks); a single integer is read as clicks at the focus
//   hotkey([keys...])
//   hold_and_press([hold...], [press...])
//   drag_and_drop(drag_from_id, drop_on_id, hold_keys=[])
//   save_to_buffer(text)
//   switch_applications(app_code)
//   wait(time)
//   done() / fail(): surplus arguments are tolerated and dropped
//
// Throws ParseError on anything else.
Action parse_action_literal(const std::string& text);

}  // namespace deskagent::aci
