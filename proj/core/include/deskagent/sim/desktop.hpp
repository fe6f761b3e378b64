#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deskagent/aci/action.hpp"
#include "deskagent/aci/tree.hpp"
#include "deskagent/sim/task.hpp"

namespace deskagent::sim {

struct StepResult {
    bool applied = true;
    aci::Observation observation;  // reflects all mutations of the applied script
};

/// Environment seam shared by the simulator and any future real-OS adapter:
/// reset to the task's initial state, observe, apply one event script, and
/// evaluate the task predicate over the final state.
class Environment {
public:
    virtual ~Environment() = default;
    virtual aci::Observation reset() = 0;
    virtual aci::Observation observe() = 0;
    virtual StepResult step(const aci::EventScript& script) = 0;
    virtual bool evaluate() const = 0;
    virtual const std::string& buffer() const = 0;
    virtual const EnvTask& task() const = 0;
};

/// Deterministic simulated desktop: applications are mutable trees with
/// data-declared responses to clicks and typed text. Unknown-effect events are
/// no-ops that still succeed; `wait` advances a logical clock only.
class SimDesktop final : public Environment {
public:
    explicit SimDesktop(EnvTask task, double iou_threshold = 0.5);
    ~SimDesktop() override;

    aci::Observation reset() override;
    aci::Observation observe() override;
    StepResult step(const aci::EventScript& script) override;
    bool evaluate() const override;
    const std::string& buffer() const override { return buffer_; }
    const EnvTask& task() const override { return task_; }

    std::int64_t logical_clock_ms() const { return clock_ms_; }
    const std::string& focused_app() const { return focused_app_; }

    // State probes for tests and the evaluator.
    bool element_exists(const std::string& app, const std::string& name) const;
    std::optional<std::string> element_text(const std::string& app,
                                            const std::string& name) const;

private:
    struct Node;
    struct App;

    void rebuild();
    App* find_app(const std::string& code);
    const App* find_app(const std::string& code) const;
    void apply_event(const aci::Event& event);
    void dispatch_click(const std::string& button);
    void apply_effect(App& app, const Effect& effect);

    EnvTask task_;
    double iou_threshold_;

    std::vector<std::unique_ptr<App>> apps_;
    std::string focused_app_;
    std::optional<int> focus_uid_;
    int pointer_x_ = 0;
    int pointer_y_ = 0;
    std::string buffer_;
    std::int64_t clock_ms_ = 0;
    int next_uid_ = 0;
};

}  // namespace deskagent::sim
