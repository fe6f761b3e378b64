#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace deskagent {

// FNV-1a, used everywhere a stable cross-platform hash is needed
// (prompt fingerprints, token hashing, stub-search file keys).
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// 16-char lowercase hex rendering of a 64-bit hash.
std::string hex64(std::uint64_t value);

/// Fingerprint of a prompt or observation: fnv1a64 over whitespace-normalized
/// text, rendered as 16 hex chars.
std::string fingerprint(std::string_view text);

}  // namespace deskagent
