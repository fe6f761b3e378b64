#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deskagent/aci/tree.hpp"

namespace deskagent::sim {

// Declarative mutation applied when the sim dispatches a click.
enum class EffectKind { reveal, remove, set_state, set_text };

struct Effect {
    EffectKind kind = EffectKind::reveal;
    std::string parent;        // reveal: anchor element name; empty appends a new root
    std::string subtree_text;  // reveal: line-serialized subtree
    std::string target;        // remove / set_state / set_text
    std::vector<std::string> add_states;
    std::vector<std::string> remove_states;
    std::string text;          // set_text
};

/// Per-element behavior, looked up by element name at interaction time so it
/// also binds to elements revealed later.
struct ElementDecl {
    std::vector<Effect> on_click;
    std::optional<std::string> text_mode;     // "append" | "overwrite"
    std::optional<std::string> initial_text;  // starting field content
};

struct AppSpec {
    std::string code;
    std::string tree_text;  // line serialization of the initial tree
    std::vector<aci::OcrBlock> ocr_blocks;
    std::map<std::string, ElementDecl> elements;
};

enum class RuleKind { element_exists, element_absent, attribute_equals, buffer_equals };

/// One declarative success predicate over the final sim state.
struct EvalRule {
    RuleKind kind = RuleKind::element_exists;
    std::string app;        // empty matches any app
    std::string name;       // element name
    std::string attribute;  // attribute-equals: "text" or "role"
    std::string value;
};

/// A simulated desktop task: instruction, initial state, and evaluator.
struct EnvTask {
    std::string id;
    std::string instruction;
    std::string focused_app;
    std::vector<AppSpec> apps;
    std::vector<EvalRule> evaluator;  // conjunction; empty list passes vacuously
};

/// Loads and structurally validates a task file. Throws TaskLoadError.
EnvTask load_task(const std::filesystem::path& path);

/// Parses a task from its JSON text. Throws TaskLoadError.
EnvTask parse_task(const std::string& json_text, const std::string& origin = "<memory>");

/// Deeper consistency checks for `validate-task`: every declared element,
/// effect target, reveal anchor and evaluator name must appear in the initial
/// trees or in some reveal subtree. Returns one message per problem.
std::vector<std::string> lint_task(const EnvTask& task);

}  // namespace deskagent::sim
