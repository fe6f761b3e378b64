#pragma once

#include "deskagent/common/trace.hpp"
#include "deskagent/llm/gateway.hpp"
#include "deskagent/memory/store.hpp"
#include "deskagent/planner/types.hpp"
#include "deskagent/sim/desktop.hpp"
#include "deskagent/worker/trajectory.hpp"

namespace deskagent::worker {

struct WorkerConfig {
    int episodic_k = 1;
    double similarity_floor = -1.0;  // negative disables the floor
    int reflection_interval = 3;     // reflect before step i when i % interval == 0, i > 0
    int history_window = 5;          // structured responses quoted verbatim in prompts
};

/// Executes one subtask as an episode: retrieve similar subtask experience,
/// generate one structured action per step, reflect on the trajectory at the
/// configured cadence, and terminate with DONE, FAIL, or the step limit.
/// Pass a null episodic store to disable episodic retrieval.
class Worker {
public:
    Worker(llm::Gateway& gateway, memory::MemoryStore* episodic, WorkerConfig cfg = {},
           TraceLog* trace = nullptr);

    /// Top-1 episodic experience for (query, subtask, context); empty when the
    /// store is empty, disabled, or below the similarity floor.
    std::string retrieve_episodic_experience(const planner::Query& q, const planner::Subtask& s);

    /// One model call over the partial trajectory. Failures are non-fatal:
    /// the episode continues with an empty reflection and a warning event.
    Reflection reflect(const planner::TaskSpec& task, const Trajectory& partial);

    struct StepContext {
        std::string experience;
        Reflection reflection;
        std::vector<std::string> pending_violations;  // from a rejected previous step
        std::string buffer;                           // run buffer contents, may be empty
    };

    /// One model call; the reply must match the four-section grammar (one
    /// re-ask) and ground to a parsed action.
    StructuredResponse generate_step(const planner::TaskSpec& task, const planner::Subtask& s,
                                     const aci::Observation& o,
                                     const std::vector<TrajectoryStep>& history,
                                     const StepContext& ctx);

    /// The episode loop. Each iteration generates exactly one action; valid
    /// actions compile and apply as exactly one environment step, invalid
    /// groundings record a rejected step and feed the violations back into the
    /// next prompt. `total_steps_remaining`, when given, is decremented per
    /// applied step and stops the episode at zero with terminal step_limit.
    Trajectory run_episode(const planner::TaskSpec& task, const planner::Query& q,
                           const planner::Subtask& s, sim::Environment& env, int max_steps,
                           int* total_steps_remaining = nullptr);

private:
    llm::Gateway& gateway_;
    memory::MemoryStore* episodic_;
    WorkerConfig cfg_;
    TraceLog* trace_;
};

}  // namespace deskagent::worker
