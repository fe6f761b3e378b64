#include "deskagent/llm/gateway.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/hash.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::llm {

std::string_view role_name(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

std::string joined_prompt(const std::vector<ChatMessage>& messages) {
    std::string out;
    for (const auto& m : messages) {
        out += role_name(m.role);
        out += ": ";
        out += m.text;
        out += '\n';
    }
    return out;
}

ScriptedChatBackend::ScriptedChatBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {
    remaining_.reserve(rules_.size());
    for (const Rule& rule : rules_) remaining_.push_back(rule.uses);
}

std::shared_ptr<ScriptedChatBackend> ScriptedChatBackend::from_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file: " + path.string());
    std::vector<Rule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("script line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!parsed.contains("match") || !parsed.contains("reply")) {
            throw ConfigError("script line " + std::to_string(line_no) +
                              ": rule needs match and reply");
        }
        Rule rule;
        rule.match = parsed["match"].get<std::string>();
        rule.reply = parsed["reply"].get<std::string>();
        rule.uses = parsed.value("uses", 1);
        rules.push_back(std::move(rule));
    }
    return std::make_shared<ScriptedChatBackend>(std::move(rules));
}

CompletionResult ScriptedChatBackend::complete(const std::vector<ChatMessage>& messages) {
    const std::string prompt = joined_prompt(messages);
    const std::string fp = fingerprint(prompt);
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const Rule& rule = rules_[i];
        const bool unlimited = rule.uses == 0;
        if (!unlimited && remaining_[i] <= 0) continue;
        if (contains(prompt, rule.match) || rule.match == fp) {
            if (!unlimited) --remaining_[i];
            return {rule.reply, std::nullopt, std::nullopt};
        }
    }
    throw ScriptExhausted("scripted backend has no rule matching prompt " + fp);
}

std::size_t ScriptedChatBackend::rules_remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t n = 0;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].uses == 0 || remaining_[i] > 0) ++n;
    }
    return n;
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, const ModelConfig& cfg, TraceLog* trace,
                 bool full_trace)
    : backend_(std::move(backend)), cfg_(cfg), trace_(trace), full_trace_(full_trace) {}

std::string Gateway::complete(const std::vector<ChatMessage>& messages,
                              const std::string& purpose) {
    if (messages.empty()) throw ModelError("complete() requires at least one message");
    const std::string prompt = joined_prompt(messages);
    const std::string fp = fingerprint(prompt);

    int attempt = 0;
    for (;;) {
        const auto start = std::chrono::steady_clock::now();
        try {
            CompletionResult result = backend_->complete(messages);
            if (trim(result.text).empty()) throw ModelError("empty model reply");
            const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
            if (trace_) {
                nlohmann::ordered_json payload;
                payload["purpose"] = purpose;
                payload["fingerprint"] = fp;
                payload["prompt_chars"] = prompt.size();
                payload["reply_fingerprint"] = fingerprint(result.text);
                payload["reply_chars"] = result.text.size();
                payload["backend"] = backend_->id();
                payload["retries"] = attempt;
                if (result.prompt_tokens) payload["prompt_tokens"] = *result.prompt_tokens;
                if (result.completion_tokens) {
                    payload["completion_tokens"] = *result.completion_tokens;
                }
                payload["latency_ms"] = latency;
                if (full_trace_) {
                    payload["prompt"] = prompt;
                    payload["reply"] = result.text;
                }
                trace_->emit(TraceKind::model_call, std::move(payload));
            }
            return result.text;
        } catch (const ScriptExhausted&) {
            throw;  // deterministic: retrying cannot help
        } catch (const ModelError& e) {
            if (attempt >= cfg_.max_retries) throw;
            if (trace_) {
                trace_->emit(TraceKind::warning,
                             nlohmann::ordered_json{{"message", "model call retry"},
                                                    {"attempt", attempt + 1},
                                                    {"fingerprint", fp},
                                                    {"error", e.what()}});
            }
            const auto delay = cfg_.backoff_ms * (1 << attempt);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            ++attempt;
        }
    }
}

}  // namespace deskagent::llm
