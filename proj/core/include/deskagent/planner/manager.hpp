#pragma once

#include <optional>

#include "deskagent/aci/tree.hpp"
#include "deskagent/common/trace.hpp"
#include "deskagent/llm/gateway.hpp"
#include "deskagent/memory/store.hpp"
#include "deskagent/planner/search.hpp"
#include "deskagent/planner/types.hpp"

namespace deskagent::planner {

struct ManagerConfig {
    bool web_enabled = true;
    int narrative_k = 1;
    // Narrative hits below this cosine similarity are ignored; negative disables
    // the floor.
    double similarity_floor = -1.0;
};

/// The plan generator: observation-aware query formulation, web + narrative
/// retrieval, knowledge fusion, subtask planning, and replanning after a
/// Worker FAIL. Pass a null narrative store to disable narrative retrieval.
class Manager {
public:
    Manager(llm::Gateway& gateway, memory::MemoryStore* narrative, SearchClient* search,
            ManagerConfig cfg = {}, TraceLog* trace = nullptr);

    /// One model call combining the instruction and the linearized observation.
    Query formulate_query(const TaskSpec& task, const aci::Observation& o0);

    /// One search-client call; transport failures degrade to empty knowledge
    /// with a warning trace event, never an error.
    WebKnowledge retrieve_web(const Query& q);

    struct NarrativeHit {
        std::string summary;
        memory::Outcome outcome = memory::Outcome::success;
        std::int64_t record_id = 0;
        double similarity = 0.0;
    };
    std::optional<NarrativeHit> retrieve_narrative(const Query& q);

    /// One model call fusing both sources; empty inputs fuse to empty without
    /// a model call.
    FusedKnowledge fuse(const std::optional<NarrativeHit>& narrative, const WebKnowledge& web);

    /// One model call; the reply must match the plan grammar (one re-ask).
    SubtaskPlan plan_subtasks(const TaskSpec& task, const aci::Observation& o0,
                              const FusedKnowledge& knowledge);

    /// Reruns the full pipeline against the current observation, with the
    /// failure note injected into the planning prompt.
    SubtaskPlan replan(const TaskSpec& task, const aci::Observation& current,
                       const std::string& remaining_goal, const std::string& failure_note);

private:
    SubtaskPlan plan_internal(const TaskSpec& task, const aci::Observation& obs,
                              const FusedKnowledge& knowledge, const std::string& remaining_goal,
                              const std::string& failure_note);

    llm::Gateway& gateway_;
    memory::MemoryStore* narrative_;
    SearchClient* search_;
    ManagerConfig cfg_;
    TraceLog* trace_;
};

}  // namespace deskagent::planner
