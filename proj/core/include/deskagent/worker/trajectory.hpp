#pragma once

#include <string>
#include <vector>

#include "deskagent/aci/action.hpp"
#include "deskagent/planner/types.hpp"

namespace deskagent::worker {

/// The Worker's templated chain-of-thought: four required sections plus the
/// grounded action parsed from the GROUNDED ACTION line.
struct StructuredResponse {
    std::string status_check;
    std::string observation_analysis;
    std::string semantic_action;
    std::string grounded_literal;  // verbatim agent.<primitive>(...) text
    aci::Action grounded_action;
};

enum class EnvResult { applied, rejected };

struct TrajectoryStep {
    int step_index = 0;
    std::string observation_digest;
    StructuredResponse response;
    aci::EventScript event_script;  // empty for rejected steps and sentinels
    EnvResult env_result = EnvResult::applied;
    std::vector<std::string> violations;  // set when env_result == rejected
};

enum class Terminal { done, fail, step_limit };

std::string_view terminal_name(Terminal terminal);

/// One subtask episode: the step record plus how it ended.
struct Trajectory {
    planner::Subtask subtask;
    std::vector<TrajectoryStep> steps;
    Terminal terminal = Terminal::step_limit;
};

/// Advice from the trajectory reflector; empty before the first interval.
struct Reflection {
    std::string text;
};

// Response grammar, the Worker's required output format:
//
//   STATUS CHECK: <text>
//   OBSERVATION ANALYSIS: <text>
//   SEMANTIC ACTION: <text>
//   GROUNDED ACTION: agent.<primitive>(...)
//
// Sections arrive in this order; bodies may span lines until the next header.
std::string render_response(const StructuredResponse& response);

/// Throws ResponseParseError when a section is missing or the grounded
/// literal does not parse.
StructuredResponse parse_response(const std::string& text);

}  // namespace deskagent::worker
