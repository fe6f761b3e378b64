#include <cmath>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "deskagent/common/errors.hpp"
#include "deskagent/llm/gateway.hpp"
#include "deskagent/llm/http_embedder.hpp"

namespace deskagent::llm {

namespace {

struct SplitUrl {
    std::string base;    // scheme://host[:port]
    std::string prefix;  // path prefix, may be empty
};

SplitUrl split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must include a scheme: " + endpoint);
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {endpoint.substr(0, path_start), prefix};
}

httplib::Client make_client(const ModelConfig& cfg, const SplitUrl& url) {
    httplib::Client client(url.base);
    const auto timeout_s = static_cast<time_t>(std::llround(cfg.timeout_s));
    client.set_connection_timeout(timeout_s, 0);
    client.set_read_timeout(timeout_s, 0);
    client.set_write_timeout(timeout_s, 0);
    if (!cfg.api_key.empty()) {
        client.set_default_headers({{"Authorization", "Bearer " + cfg.api_key}});
    }
    return client;
}

nlohmann::json message_content(const ChatMessage& m) {
    if (m.images.empty()) return m.text;
    nlohmann::json parts = nlohmann::json::array();
    parts.push_back({{"type", "text"}, {"text", m.text}});
    for (const auto& image : m.images) {
        parts.push_back({{"type", "image_url"}, {"image_url", {{"url", image}}}});
    }
    return parts;
}

nlohmann::json post_json(const ModelConfig& cfg, const std::string& path,
                         const nlohmann::json& body) {
    const SplitUrl url = split_endpoint(cfg.endpoint);
    httplib::Client client = make_client(cfg, url);
    auto res = client.Post(url.prefix + path, body.dump(), "application/json");
    if (!res) {
        throw ModelError("transport failure talking to " + cfg.endpoint + ": " +
                         httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw ModelError("HTTP status " + std::to_string(res->status) + " from " + path);
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("bad JSON in model response: ") + e.what());
    }
}

}  // namespace

HttpChatBackend::HttpChatBackend(ModelConfig cfg) : cfg_(std::move(cfg)) {
    split_endpoint(cfg_.endpoint);  // validate eagerly
}

CompletionResult HttpChatBackend::complete(const std::vector<ChatMessage>& messages) {
    nlohmann::json body;
    body["model"] = cfg_.model_name;
    body["temperature"] = cfg_.temperature;
    body["max_tokens"] = cfg_.max_tokens;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : messages) {
        body["messages"].push_back(
            {{"role", std::string(role_name(m.role))}, {"content", message_content(m)}});
    }

    const nlohmann::json reply = post_json(cfg_, "/v1/chat/completions", body);
    if (!reply.contains("choices") || reply["choices"].empty()) {
        throw ModelError("model response has no choices");
    }
    CompletionResult result;
    const auto& message = reply["choices"][0].value("message", nlohmann::json::object());
    result.text = message.value("content", "");
    if (reply.contains("usage")) {
        const auto& usage = reply["usage"];
        if (usage.contains("prompt_tokens")) {
            result.prompt_tokens = usage["prompt_tokens"].get<std::int64_t>();
        }
        if (usage.contains("completion_tokens")) {
            result.completion_tokens = usage["completion_tokens"].get<std::int64_t>();
        }
    }
    return result;
}

HttpEmbedder::HttpEmbedder(ModelConfig cfg, int dimension)
    : cfg_(std::move(cfg)), dimension_(dimension) {
    split_endpoint(cfg_.endpoint);
}

std::vector<double> HttpEmbedder::embed(const std::string& text) {
    if (text.empty()) throw BackendError("embed() requires non-empty text");
    nlohmann::json body;
    body["model"] = cfg_.model_name;
    body["input"] = nlohmann::json::array({text});
    nlohmann::json reply;
    try {
        reply = post_json(cfg_, "/v1/embeddings", body);
    } catch (const ModelError& e) {
        throw BackendError(e.what());
    }
    if (!reply.contains("data") || reply["data"].empty() ||
        !reply["data"][0].contains("embedding")) {
        throw BackendError("embeddings response has no data[0].embedding");
    }
    auto values = reply["data"][0]["embedding"].get<std::vector<double>>();
    if (dimension_ == 0) dimension_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != dimension_) {
        throw BackendError("embedding dimension changed mid-run");
    }
    return values;
}

}  // namespace deskagent::llm
