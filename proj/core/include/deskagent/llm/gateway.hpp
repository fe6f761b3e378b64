#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "deskagent/common/trace.hpp"

namespace deskagent::llm {

enum class Role { system, user, assistant };

std::string_view role_name(Role role);

/// One chat turn. `images` holds data URIs or file references; they are sent
/// as multimodal attachments when the backend supports them.
struct ChatMessage {
    Role role = Role::user;
    std::string text;
    std::vector<std::string> images;

    static ChatMessage system(std::string text) { return {Role::system, std::move(text), {}}; }
    static ChatMessage user(std::string text) { return {Role::user, std::move(text), {}}; }
    static ChatMessage assistant(std::string text) { return {Role::assistant, std::move(text), {}}; }
};

struct ModelConfig {
    std::string endpoint;    // e.g. http://127.0.0.1:8000
    std::string model_name = "default";
    std::string api_key;
    double temperature = 0.0;
    int max_tokens = 2048;
    double timeout_s = 60.0;
    int max_retries = 2;     // retries after the first attempt
    int backoff_ms = 250;    // base of the exponential backoff
};

/// Role-prefixed concatenation of all message texts; the canonical form used
/// for prompt fingerprints and scripted-rule matching.
std::string joined_prompt(const std::vector<ChatMessage>& messages);

struct CompletionResult {
    std::string text;
    std::optional<std::int64_t> prompt_tokens;
    std::optional<std::int64_t> completion_tokens;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual CompletionResult complete(const std::vector<ChatMessage>& messages) = 0;
    virtual std::string id() const = 0;
};

/// Deterministic offline backend. Rules are scanned in file order; the first
/// unconsumed rule whose `match` is a substring of the joined prompt (or equals
/// its fingerprint) is consumed and its reply returned. A rule may declare
/// "uses": N to serve N calls (0 = unlimited). No match -> ScriptExhausted.
class ScriptedChatBackend final : public ChatBackend {
public:
    struct Rule {
        std::string match;
        std::string reply;
        int uses = 1;  // 0 = unlimited
    };

    explicit ScriptedChatBackend(std::vector<Rule> rules);
    static std::shared_ptr<ScriptedChatBackend> from_file(const std::filesystem::path& path);

    CompletionResult complete(const std::vector<ChatMessage>& messages) override;
    std::string id() const override { return "scripted"; }

    std::size_t rules_remaining() const;

private:
    mutable std::mutex mutex_;
    std::vector<Rule> rules_;
    std::vector<int> remaining_;
};

/// OpenAI-compatible chat-completions client over HTTP.
class HttpChatBackend final : public ChatBackend {
public:
    explicit HttpChatBackend(ModelConfig cfg);

    CompletionResult complete(const std::vector<ChatMessage>& messages) override;
    std::string id() const override { return "http:" + cfg_.model_name; }

private:
    ModelConfig cfg_;
};

/// Uniform entry point for chat completions: applies the retry policy and
/// records one model-call trace event per successful call. `purpose` labels
/// the call site (query_formulation, planning, step_generation, ...).
class Gateway {
public:
    Gateway(std::shared_ptr<ChatBackend> backend, const ModelConfig& cfg,
            TraceLog* trace = nullptr, bool full_trace = false);

    std::string complete(const std::vector<ChatMessage>& messages, const std::string& purpose);

    ChatBackend& backend() { return *backend_; }
    void set_trace(TraceLog* trace) { trace_ = trace; }

private:
    std::shared_ptr<ChatBackend> backend_;
    ModelConfig cfg_;
    TraceLog* trace_;
    bool full_trace_;
};

}  // namespace deskagent::llm
