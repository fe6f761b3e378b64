#pragma once

#include <span>
#include <string>
#include <vector>

namespace deskagent::memory {

/// Text-embedding backend. Deterministic for a fixed backend; fixed dimension.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
    virtual int dimension() const = 0;
    virtual std::string id() const = 0;
};

/// Deterministic offline embedder: token-hash bag of words, L2-normalized.
/// Tokens are lowercase maximal alphanumeric runs; a text with no such run
/// hashes as a single whole-string token so self-similarity is always 1.
class HashEmbedder final : public Embedder {
public:
    explicit HashEmbedder(int dimension = 256);

    std::vector<double> embed(const std::string& text) override;
    int dimension() const override { return dimension_; }
    std::string id() const override;

private:
    int dimension_;
};

/// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace deskagent::memory
