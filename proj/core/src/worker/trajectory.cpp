#include "deskagent/worker/trajectory.hpp"

#include <array>

#include "deskagent/aci/action_literal.hpp"
#include "deskagent/common/errors.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::worker {

namespace {

constexpr std::array<std::string_view, 4> kHeaders = {
    "STATUS CHECK:",
    "OBSERVATION ANALYSIS:",
    "SEMANTIC ACTION:",
    "GROUNDED ACTION:",
};

}  // namespace

std::string_view terminal_name(Terminal terminal) {
    switch (terminal) {
        case Terminal::done: return "done";
        case Terminal::fail: return "fail";
        case Terminal::step_limit: return "step_limit";
    }
    return "unknown";
}

std::string render_response(const StructuredResponse& r) {
    std::string out;
    out += "STATUS CHECK: " + r.status_check + '\n';
    out += "OBSERVATION ANALYSIS: " + r.observation_analysis + '\n';
    out += "SEMANTIC ACTION: " + r.semantic_action + '\n';
    out += "GROUNDED ACTION: " + r.grounded_literal + '\n';
    return out;
}

StructuredResponse parse_response(const std::string& text) {
    std::array<std::string, 4> sections;
    int current = -1;
    for (const std::string& line : split_lines(text)) {
        const std::string trimmed = trim(line);
        bool matched = false;
        for (std::size_t i = 0; i < kHeaders.size(); ++i) {
            if (starts_with(trimmed, kHeaders[i])) {
                if (static_cast<int>(i) <= current) {
                    throw ResponseParseError("section " + std::string(kHeaders[i]) +
                                             " out of order");
                }
                current = static_cast<int>(i);
                sections[i] = trim(trimmed.substr(kHeaders[i].size()));
                matched = true;
                break;
            }
        }
        if (matched || trimmed.empty()) continue;
        if (current < 0) continue;  // preamble chatter before the first section
        std::string& body = sections[static_cast<std::size_t>(current)];
        if (!body.empty()) body += '\n';
        body += trimmed;
    }

    for (std::size_t i = 0; i < kHeaders.size(); ++i) {
        if (sections[i].empty()) {
            throw ResponseParseError("missing section " + std::string(kHeaders[i]));
        }
    }

    StructuredResponse response;
    response.status_check = sections[0];
    response.observation_analysis = sections[1];
    response.semantic_action = sections[2];
    response.grounded_literal = sections[3];
    try {
        response.grounded_action = aci::parse_action_literal(sections[3]);
    } catch (const ParseError& e) {
        throw ResponseParseError("bad grounded action '" + sections[3] + "': " + e.what());
    }
    return response;
}

}  // namespace deskagent::worker
