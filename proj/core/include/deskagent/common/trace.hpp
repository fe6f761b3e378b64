#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace deskagent {

/// Trace event kinds. One JSON line per event; totally ordered per run via `seq`.
enum class TraceKind {
    model_call,
    retrieval,
    action,
    env_step,
    replan,
    save,
    warning,
};

std::string_view trace_kind_name(TraceKind kind);

/// Append-only JSON-lines run log. Events are kept in memory (for test probes)
/// and mirrored to a file when one is attached. Timestamps live in the "ts"
/// field only, so determinism checks can strip them.
class TraceLog {
public:
    TraceLog() = default;
    explicit TraceLog(std::string run_id) : run_id_(std::move(run_id)) {}

    void set_run_id(std::string run_id) { run_id_ = std::move(run_id); }
    const std::string& run_id() const { return run_id_; }

    /// Attaches a file sink (truncates) and writes the header line.
    void open_file(const std::filesystem::path& path, const nlohmann::ordered_json& config);

    /// Header for in-memory-only logs; open_file writes it on its own.
    void write_header(const nlohmann::ordered_json& config);

    void emit(TraceKind kind, nlohmann::ordered_json payload);
    void warn(const std::string& message);

    const std::vector<nlohmann::ordered_json>& events() const { return events_; }
    std::size_t count(TraceKind kind) const;
    std::vector<nlohmann::ordered_json> events_of(TraceKind kind) const;

    const std::filesystem::path& file_path() const { return file_path_; }

private:
    void write_line(const nlohmann::ordered_json& line);

    std::string run_id_;
    std::uint64_t next_seq_ = 0;
    std::vector<nlohmann::ordered_json> events_;
    std::filesystem::path file_path_;
    std::ofstream file_;
};

}  // namespace deskagent
