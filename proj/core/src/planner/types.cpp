#include "deskagent/planner/types.hpp"

#include <cctype>
#include <optional>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::planner {

namespace {

// Matches `<digits>. TITLE: <rest>` and returns the rest.
std::optional<std::string> match_item_start(const std::string& line) {
    std::size_t pos = 0;
    while (pos < line.size() && line[pos] == ' ') ++pos;
    std::size_t digits = pos;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) {
        ++digits;
    }
    if (digits == pos) return std::nullopt;
    if (digits >= line.size() || (line[digits] != '.' && line[digits] != ')')) {
        return std::nullopt;
    }
    std::string rest = trim(line.substr(digits + 1));
    if (!starts_with(rest, "TITLE:")) return std::nullopt;
    return trim(rest.substr(6));
}

}  // namespace

std::string render_plan(const SubtaskPlan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.subtasks.size(); ++i) {
        const Subtask& s = plan.subtasks[i];
        out += std::to_string(i + 1) + ". TITLE: " + s.title + '\n';
        out += "   CONTEXT: " + s.context + '\n';
    }
    return out;
}

SubtaskPlan parse_plan(const std::string& text) {
    SubtaskPlan plan;
    std::optional<Subtask> current;
    bool in_context = false;

    auto finish = [&] {
        if (!current) return;
        if (!in_context) {
            throw PlanParseError("plan item '" + current->title + "' is missing CONTEXT");
        }
        current->context = trim(current->context);
        if (current->context.empty()) {
            throw PlanParseError("plan item '" + current->title + "' has empty CONTEXT");
        }
        current->index = static_cast<int>(plan.subtasks.size());
        plan.subtasks.push_back(*current);
        current.reset();
        in_context = false;
    };

    for (const std::string& line : split_lines(text)) {
        if (auto title = match_item_start(line)) {
            finish();
            if (title->empty()) throw PlanParseError("plan item has empty TITLE");
            current = Subtask{*title, "", 0};
            continue;
        }
        const std::string trimmed = trim(line);
        if (!current) {
            if (trimmed.empty()) continue;
            throw PlanParseError("text before the first plan item: '" + trimmed + "'");
        }
        if (!in_context) {
            if (trimmed.empty()) continue;
            if (!starts_with(trimmed, "CONTEXT:")) {
                throw PlanParseError("expected CONTEXT: after TITLE '" + current->title + "'");
            }
            current->context = trim(trimmed.substr(8));
            in_context = true;
        } else {
            if (!current->context.empty() && !trimmed.empty()) current->context += '\n';
            if (!trimmed.empty()) current->context += trimmed;
        }
    }
    finish();
    if (plan.subtasks.empty()) throw PlanParseError("plan has no subtasks");
    return plan;
}

}  // namespace deskagent::planner
