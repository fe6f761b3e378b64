#include "deskagent/memory/embedder.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "deskagent/common/hash.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::memory {

HashEmbedder::HashEmbedder(int dimension) : dimension_(dimension) {
    if (dimension_ <= 0) throw std::invalid_argument("embedder dimension must be positive");
}

std::vector<double> HashEmbedder::embed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("embed() requires non-empty text");
    std::vector<double> v(static_cast<std::size_t>(dimension_), 0.0);

    std::size_t tokens = 0;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        const auto idx = fnv1a64(token) % static_cast<std::uint64_t>(dimension_);
        v[static_cast<std::size_t>(idx)] += 1.0;
        ++tokens;
        token.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            flush();
        }
    }
    flush();
    if (tokens == 0) {
        const auto idx = fnv1a64(text) % static_cast<std::uint64_t>(dimension_);
        v[static_cast<std::size_t>(idx)] = 1.0;
    }

    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

std::string HashEmbedder::id() const {
    return "hash-bow-" + std::to_string(dimension_);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) return 0.0;
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace deskagent::memory
