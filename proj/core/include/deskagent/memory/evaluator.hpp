#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deskagent/llm/gateway.hpp"
#include "deskagent/memory/store.hpp"
#include "deskagent/worker/trajectory.hpp"

namespace deskagent::memory {

/// Turns finished episodes and tasks into textual-reward summaries for the
/// episodic and narrative stores.
class SelfEvaluator {
public:
    explicit SelfEvaluator(llm::Gateway& gateway) : gateway_(gateway) {}

    /// Summarizes the strategy of a DONE episode, grounded actions included.
    /// One model call; the prompt lists every step of the trajectory.
    std::string summarize_episode(const worker::Trajectory& trajectory);

    struct TaskSummary {
        std::string text;
        Outcome outcome = Outcome::failure;
    };

    /// Summarizes the whole task with grounded actions removed (prompt-
    /// enforced). Outcome is success iff every episode ended DONE and the
    /// environment evaluator (when present) passed.
    TaskSummary summarize_task(const std::string& instruction,
                               const std::vector<worker::Trajectory>& episodes,
                               std::optional<bool> env_success);

private:
    llm::Gateway& gateway_;
};

}  // namespace deskagent::memory
