#pragma once

#include "deskagent/llm/gateway.hpp"
#include "deskagent/memory/embedder.hpp"

namespace deskagent::llm {

/// OpenAI-compatible /v1/embeddings client. Pass dimension 0 to adopt the
/// backend's dimension on first use.
class HttpEmbedder final : public memory::Embedder {
public:
    explicit HttpEmbedder(ModelConfig cfg, int dimension = 0);

    std::vector<double> embed(const std::string& text) override;
    int dimension() const override { return dimension_; }
    std::string id() const override { return "http:" + cfg_.model_name; }

private:
    ModelConfig cfg_;
    int dimension_;
};

}  // namespace deskagent::llm
