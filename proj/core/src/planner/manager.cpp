#include "deskagent/planner/manager.hpp"

#include "deskagent/common/errors.hpp"
#include "deskagent/common/hash.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::planner {

namespace {

constexpr const char* kManagerSystem =
    "You are the manager of a desktop automation agent. You study the user task and the "
    "current interface, gather knowledge, and plan subtasks for workers.";

constexpr const char* kPlanFormat =
    "Reply with a numbered plan and nothing else, one item per subtask, exactly in this form:\n"
    "1. TITLE: <short imperative title>\n"
    "   CONTEXT: <details the worker needs to complete the subtask>";

}  // namespace

Manager::Manager(llm::Gateway& gateway, memory::MemoryStore* narrative, SearchClient* search,
                 ManagerConfig cfg, TraceLog* trace)
    : gateway_(gateway), narrative_(narrative), search_(search), cfg_(cfg), trace_(trace) {}

Query Manager::formulate_query(const TaskSpec& task, const aci::Observation& o0) {
    std::string prompt = "TASK: " + task.instruction + "\n\nINITIAL OBSERVATION:\n" +
                         o0.linearized +
                         "\nWrite one question in a \"How to do X\" format that captures what "
                         "must be learned to complete this task. Reply with the question only.";
    const std::string reply = gateway_.complete(
        {llm::ChatMessage::system(kManagerSystem), llm::ChatMessage::user(std::move(prompt))},
        "query_formulation");
    Query query{trim(reply)};
    if (query.text.empty()) throw ModelError("query formulation returned empty text");
    return query;
}

WebKnowledge Manager::retrieve_web(const Query& q) {
    if (!cfg_.web_enabled || search_ == nullptr) return {"", "off"};
    WebKnowledge knowledge;
    try {
        knowledge = search_->search(q.text);
    } catch (const std::exception& e) {
        if (trace_) {
            trace_->emit(TraceKind::warning,
                         {{"message", "web search degraded to empty knowledge"},
                          {"error", e.what()}});
        }
        knowledge = {"", search_->id()};
    }
    if (trace_) {
        trace_->emit(TraceKind::retrieval, {{"store", "web"},
                                            {"query_fingerprint", fingerprint(q.text)},
                                            {"source", knowledge.source},
                                            {"chars", knowledge.text.size()}});
    }
    return knowledge;
}

std::optional<Manager::NarrativeHit> Manager::retrieve_narrative(const Query& q) {
    if (narrative_ == nullptr) return std::nullopt;
    const auto hits = narrative_->retrieve(q.text, cfg_.narrative_k);
    std::optional<NarrativeHit> best;
    if (!hits.empty() &&
        (cfg_.similarity_floor < 0.0 || hits.front().similarity >= cfg_.similarity_floor)) {
        const auto& top = hits.front();
        best = NarrativeHit{top.record.payload,
                            top.record.outcome.value_or(memory::Outcome::success), top.record.id,
                            top.similarity};
    }
    if (trace_) {
        nlohmann::ordered_json payload{{"store", "narrative"},
                                       {"query_fingerprint", fingerprint(q.text)},
                                       {"k", cfg_.narrative_k},
                                       {"hits", best ? 1 : 0}};
        if (best) {
            payload["top_id"] = best->record_id;
            payload["top_similarity"] = best->similarity;
        }
        trace_->emit(TraceKind::retrieval, std::move(payload));
    }
    return best;
}

FusedKnowledge Manager::fuse(const std::optional<NarrativeHit>& narrative,
                             const WebKnowledge& web) {
    const bool have_narrative = narrative && !trim(narrative->summary).empty();
    const bool have_web = !trim(web.text).empty();
    if (!have_narrative && !have_web) return {""};

    std::string prompt = "PAST TASK EXPERIENCE";
    if (have_narrative) {
        prompt += " (outcome: " + std::string(memory::outcome_name(narrative->outcome)) + "):\n" +
                  narrative->summary + '\n';
    } else {
        prompt += ":\n(none)\n";
    }
    prompt += "\nWEB KNOWLEDGE:\n";
    prompt += have_web ? web.text : "(none)";
    prompt +=
        "\n\nFuse these sources into a single guideline for planning the task. Reply with the "
        "guideline only.";

    const std::string reply = gateway_.complete(
        {llm::ChatMessage::system(kManagerSystem), llm::ChatMessage::user(std::move(prompt))},
        "fusion");
    return {trim(reply)};
}

SubtaskPlan Manager::plan_subtasks(const TaskSpec& task, const aci::Observation& o0,
                                   const FusedKnowledge& knowledge) {
    return plan_internal(task, o0, knowledge, "", "");
}

SubtaskPlan Manager::replan(const TaskSpec& task, const aci::Observation& current,
                            const std::string& remaining_goal, const std::string& failure_note) {
    Query query = formulate_query(task, current);
    auto narrative = retrieve_narrative(query);
    WebKnowledge web = retrieve_web(query);
    FusedKnowledge fused = fuse(narrative, web);
    return plan_internal(task, current, fused, remaining_goal, failure_note);
}

SubtaskPlan Manager::plan_internal(const TaskSpec& task, const aci::Observation& obs,
                                   const FusedKnowledge& knowledge,
                                   const std::string& remaining_goal,
                                   const std::string& failure_note) {
    std::string prompt = "TASK: " + task.instruction + "\n\nGUIDELINE:\n" +
                         (trim(knowledge.text).empty() ? "(none)" : knowledge.text) +
                         "\n\nCURRENT OBSERVATION:\n" + obs.linearized;
    if (!failure_note.empty()) {
        prompt += "\nREPLANNING AFTER A FAILED SUBTASK.\n";
        if (!remaining_goal.empty()) prompt += "REMAINING GOAL: " + remaining_goal + '\n';
        prompt += "FAILURE NOTE:\n" + failure_note +
                  "\nPlan the remaining work against the current observation; do not repeat "
                  "subtasks that already completed.\n";
    }
    prompt += "\nBreak the task into subtasks for sequential execution.";

    std::vector<llm::ChatMessage> messages{
        llm::ChatMessage::system(std::string(kManagerSystem) + "\n" + kPlanFormat),
        llm::ChatMessage::user(prompt)};

    std::string reply = gateway_.complete(messages, "planning");
    for (int attempt = 0;; ++attempt) {
        try {
            SubtaskPlan plan = parse_plan(reply);
            plan.provenance = knowledge.text;
            return plan;
        } catch (const PlanParseError& e) {
            if (attempt >= 1) throw;
            messages.push_back(llm::ChatMessage::assistant(reply));
            messages.push_back(llm::ChatMessage::user(
                std::string("Your reply did not match the required format (") + e.what() +
                "). " + kPlanFormat));
            reply = gateway_.complete(messages, "planning");
        }
    }
}

}  // namespace deskagent::planner
