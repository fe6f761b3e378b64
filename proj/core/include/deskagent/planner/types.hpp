#pragma once

#include <string>
#include <vector>

namespace deskagent::planner {

/// A user task as handed to the run loop.
struct TaskSpec {
    std::string id;
    std::string instruction;  // non-empty
    int max_steps = 50;       // total applied env steps for the run
};

/// Observation-aware "How to do X" question derived from the task.
struct Query {
    std::string text;
};

/// Knowledge retrieved from the external search engine; empty when the
/// search backend is disabled or degraded.
struct WebKnowledge {
    std::string text;
    std::string source;
};

/// Single guideline fused from narrative experience and web knowledge.
struct FusedKnowledge {
    std::string text;
};

struct Subtask {
    std::string title;    // non-empty
    std::string context;  // additional information for the worker
    int index = 0;        // position in the queue, contiguous from 0

    bool operator==(const Subtask&) const = default;
};

/// Ordered subtask queue; order is the execution (dependency) order.
struct SubtaskPlan {
    std::vector<Subtask> subtasks;
    std::string provenance;  // the fused-knowledge text the plan was built from

    bool operator==(const SubtaskPlan&) const = default;
};

// Plan grammar, the Manager's required output format:
//
//   1. TITLE: <one line>
//      CONTEXT: <text until the next numbered item>
//   2. TITLE: ...
//      CONTEXT: ...
//
// Items are renumbered 0-based on parse; both TITLE and CONTEXT are required
// on every item and at least one item must be present.
std::string render_plan(const SubtaskPlan& plan);

/// Throws PlanParseError when the text does not match the grammar.
SubtaskPlan parse_plan(const std::string& text);

}  // namespace deskagent::planner
