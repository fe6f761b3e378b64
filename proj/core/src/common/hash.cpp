#include "deskagent/common/hash.hpp"

#include "deskagent/common/text.hpp"

namespace deskagent {

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string fingerprint(std::string_view text) {
    return hex64(fnv1a64(normalize_whitespace(text)));
}

}  // namespace deskagent
