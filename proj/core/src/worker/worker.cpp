#include "deskagent/worker/worker.hpp"

#include "deskagent/common/errors.hpp"
#include "deskagent/common/hash.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::worker {

namespace {

constexpr const char* kWorkerSystem =
    "You are a worker executing one subtask of a desktop task through a bounded action "
    "interface. Interface elements are listed with integer tags; refer to elements by tag.\n"
    "Available primitives: click(element_id, num_clicks, button_type, hold_keys), "
    "type(text, element_id, overwrite, enter), scroll(element_id, clicks), hotkey(keys), "
    "hold_and_press(hold_keys, press_keys), drag_and_drop(drag_from_id, drop_on_id, hold_keys), "
    "save_to_buffer(text), switch_applications(app_code), wait(time), done(), fail().\n"
    "Reply exactly in this four-section form with one grounded action:\n"
    "STATUS CHECK: <did the previous action work?>\n"
    "OBSERVATION ANALYSIS: <what the current interface shows>\n"
    "SEMANTIC ACTION: <the next step in plain words>\n"
    "GROUNDED ACTION: agent.<primitive>(...)\n"
    "Use agent.done() when the subtask is complete and agent.fail() when it cannot be "
    "completed.";

constexpr const char* kReflectorSystem =
    "You observe a worker's episode as it executes a subtask. Provide short reflective advice: "
    "point out repetitive or ineffective actions and suggest alternative strategies.";

std::string render_history(const std::vector<TrajectoryStep>& history, int window) {
    if (history.empty()) return "(first step)\n";
    std::string out;
    const std::size_t verbatim_from =
        history.size() > static_cast<std::size_t>(window) ? history.size() - window : 0;
    for (std::size_t i = 0; i < verbatim_from; ++i) {
        out += "- step " + std::to_string(history[i].step_index) + ": " +
               history[i].response.semantic_action + " -> " +
               history[i].response.grounded_literal +
               (history[i].env_result == EnvResult::applied ? " (applied)" : " (rejected)") + '\n';
    }
    for (std::size_t i = verbatim_from; i < history.size(); ++i) {
        out += "step " + std::to_string(history[i].step_index) +
               (history[i].env_result == EnvResult::applied ? " (applied):\n" : " (rejected):\n");
        out += render_response(history[i].response);
    }
    return out;
}

}  // namespace

Worker::Worker(llm::Gateway& gateway, memory::MemoryStore* episodic, WorkerConfig cfg,
               TraceLog* trace)
    : gateway_(gateway), episodic_(episodic), cfg_(cfg), trace_(trace) {}

std::string Worker::retrieve_episodic_experience(const planner::Query& q,
                                                 const planner::Subtask& s) {
    if (episodic_ == nullptr) return "";
    const std::string key = memory::make_episodic_key(q.text, s.title, s.context);
    const auto hits = episodic_->retrieve(key, cfg_.episodic_k);
    std::string experience;
    std::optional<std::int64_t> top_id;
    double top_similarity = 0.0;
    if (!hits.empty() &&
        (cfg_.similarity_floor < 0.0 || hits.front().similarity >= cfg_.similarity_floor)) {
        experience = hits.front().record.payload;
        top_id = hits.front().record.id;
        top_similarity = hits.front().similarity;
    }
    if (trace_) {
        nlohmann::ordered_json payload{{"store", "episodic"},
                                       {"query_fingerprint", fingerprint(key)},
                                       {"k", cfg_.episodic_k},
                                       {"hits", experience.empty() ? 0 : 1}};
        if (top_id) {
            payload["top_id"] = *top_id;
            payload["top_similarity"] = top_similarity;
        }
        trace_->emit(TraceKind::retrieval, std::move(payload));
    }
    return experience;
}

Reflection Worker::reflect(const planner::TaskSpec& task, const Trajectory& partial) {
    std::string prompt = "TASK: " + task.instruction + "\nSUBTASK: " + partial.subtask.title +
                         "\nEPISODE SO FAR:\n";
    for (const TrajectoryStep& step : partial.steps) {
        prompt += "step " + std::to_string(step.step_index) + ": " +
                  step.response.semantic_action + " -> " + step.response.grounded_literal +
                  (step.env_result == EnvResult::applied ? " (applied)" : " (rejected)") + '\n';
    }
    prompt += "Give brief advice for the next steps.";
    try {
        const std::string reply = gateway_.complete(
            {llm::ChatMessage::system(kReflectorSystem), llm::ChatMessage::user(std::move(prompt))},
            "reflection");
        return {trim(reply)};
    } catch (const ModelError& e) {
        if (trace_) {
            trace_->emit(TraceKind::warning,
                         {{"message", "reflection failed; continuing without advice"},
                          {"error", e.what()}});
        }
        return {""};
    }
}

StructuredResponse Worker::generate_step(const planner::TaskSpec& task, const planner::Subtask& s,
                                         const aci::Observation& o,
                                         const std::vector<TrajectoryStep>& history,
                                         const StepContext& ctx) {
    std::string prompt = "TASK: " + task.instruction + "\nSUBTASK: " + s.title +
                         "\nCONTEXT: " + s.context + "\n\nSIMILAR SUBTASK EXPERIENCE:\n" +
                         (ctx.experience.empty() ? "(none)" : ctx.experience) +
                         "\n\nREFLECTION:\n" +
                         (ctx.reflection.text.empty() ? "(none)" : ctx.reflection.text) +
                         "\n\nHISTORY:\n" + render_history(history, cfg_.history_window);
    if (!ctx.buffer.empty()) {
        prompt += "\nSAVED BUFFER:\n" + ctx.buffer + '\n';
    }
    if (!ctx.pending_violations.empty()) {
        prompt += "\nYOUR PREVIOUS ACTION WAS REJECTED:\n";
        for (const auto& violation : ctx.pending_violations) {
            prompt += "- " + violation + '\n';
        }
        prompt += "Choose a valid action this time.\n";
    }
    prompt += "\nCURRENT OBSERVATION:\n" + o.linearized;

    std::vector<llm::ChatMessage> messages{llm::ChatMessage::system(kWorkerSystem),
                                           llm::ChatMessage::user(std::move(prompt))};
    std::string reply = gateway_.complete(messages, "step_generation");
    for (int attempt = 0;; ++attempt) {
        try {
            return parse_response(reply);
        } catch (const ResponseParseError& e) {
            if (attempt >= 1) throw;
            messages.push_back(llm::ChatMessage::assistant(reply));
            messages.push_back(llm::ChatMessage::user(
                std::string("Your reply did not match the required four-section form (") +
                e.what() +
                "). Reply again with STATUS CHECK, OBSERVATION ANALYSIS, SEMANTIC ACTION and "
                "GROUNDED ACTION sections."));
            reply = gateway_.complete(messages, "step_generation");
        }
    }
}

Trajectory Worker::run_episode(const planner::TaskSpec& task, const planner::Query& q,
                               const planner::Subtask& s, sim::Environment& env, int max_steps,
                               int* total_steps_remaining) {
    if (max_steps < 1) throw std::invalid_argument("episode budget must be >= 1");

    Trajectory trajectory;
    trajectory.subtask = s;
    trajectory.terminal = Terminal::step_limit;

    StepContext ctx;
    ctx.experience = retrieve_episodic_experience(q, s);

    aci::Observation obs = env.observe();
    for (int step_index = 0; step_index < max_steps; ++step_index) {
        if (total_steps_remaining && *total_steps_remaining <= 0) break;
        if (step_index > 0 && cfg_.reflection_interval > 0 &&
            step_index % cfg_.reflection_interval == 0) {
            ctx.reflection = reflect(task, trajectory);
        }
        ctx.buffer = env.buffer();

        TrajectoryStep step;
        step.step_index = step_index;
        step.observation_digest = fingerprint(obs.linearized);
        step.response = generate_step(task, s, obs, trajectory.steps, ctx);

        const aci::Action& action = step.response.grounded_action;
        const auto violations = aci::validate_action(action, obs);
        if (!violations.empty()) {
            step.env_result = EnvResult::rejected;
            step.violations = violations;
            ctx.pending_violations = violations;
            if (trace_) {
                trace_->emit(TraceKind::action,
                             {{"subtask_index", s.index},
                              {"step_index", step_index},
                              {"action", std::string(aci::action_kind_name(action.kind))},
                              {"grounded", step.response.grounded_literal},
                              {"env_result", "rejected"},
                              {"violations", violations}});
            }
            trajectory.steps.push_back(std::move(step));
            continue;  // rejected groundings do not consume an environment step
        }
        ctx.pending_violations.clear();

        step.event_script = aci::compile_action(action, obs);
        sim::StepResult result = env.step(step.event_script);
        if (total_steps_remaining) --*total_steps_remaining;
        step.env_result = EnvResult::applied;
        if (trace_) {
            trace_->emit(TraceKind::action,
                         {{"subtask_index", s.index},
                          {"step_index", step_index},
                          {"action", std::string(aci::action_kind_name(action.kind))},
                          {"grounded", step.response.grounded_literal},
                          {"env_result", "applied"}});
            trace_->emit(TraceKind::env_step,
                         {{"events", step.event_script.events.size()},
                          {"observation", fingerprint(result.observation.linearized)}});
        }

        const aci::ActionKind kind = action.kind;
        trajectory.steps.push_back(std::move(step));
        obs = std::move(result.observation);

        if (kind == aci::ActionKind::done) {
            trajectory.terminal = Terminal::done;
            return trajectory;
        }
        if (kind == aci::ActionKind::fail) {
            trajectory.terminal = Terminal::fail;
            return trajectory;
        }
    }
    return trajectory;  // step_limit
}

}  // namespace deskagent::worker
