#include "deskagent/common/trace.hpp"

#include <chrono>

#include "deskagent/common/errors.hpp"

namespace deskagent {

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

std::string_view trace_kind_name(TraceKind kind) {
    switch (kind) {
        case TraceKind::model_call: return "model-call";
        case TraceKind::retrieval: return "retrieval";
        case TraceKind::action: return "action";
        case TraceKind::env_step: return "env-step";
        case TraceKind::replan: return "replan";
        case TraceKind::save: return "save";
        case TraceKind::warning: return "warning";
    }
    return "unknown";
}

void TraceLog::open_file(const std::filesystem::path& path, const nlohmann::ordered_json& config) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    file_.open(path, std::ios::trunc);
    if (!file_) {
        throw Error("cannot open trace file: " + path.string());
    }
    file_path_ = path;
    write_header(config);
}

void TraceLog::write_header(const nlohmann::ordered_json& config) {
    nlohmann::ordered_json header;
    header["trace"] = "deskagent";
    header["version"] = 1;
    header["run_id"] = run_id_;
    header["ts"] = now_ms();
    header["config"] = config;
    write_line(header);
}

void TraceLog::emit(TraceKind kind, nlohmann::ordered_json payload) {
    nlohmann::ordered_json line;
    line["seq"] = next_seq_++;
    line["run_id"] = run_id_;
    line["ts"] = now_ms();
    line["kind"] = trace_kind_name(kind);
    for (auto& [key, value] : payload.items()) {
        line[key] = std::move(value);
    }
    events_.push_back(line);
    write_line(line);
}

void TraceLog::warn(const std::string& message) {
    emit(TraceKind::warning, nlohmann::ordered_json{{"message", message}});
}

std::size_t TraceLog::count(TraceKind kind) const {
    std::size_t n = 0;
    const auto name = trace_kind_name(kind);
    for (const auto& e : events_) {
        if (e.value("kind", "") == name) ++n;
    }
    return n;
}

std::vector<nlohmann::ordered_json> TraceLog::events_of(TraceKind kind) const {
    std::vector<nlohmann::ordered_json> out;
    const auto name = trace_kind_name(kind);
    for (const auto& e : events_) {
        if (e.value("kind", "") == name) out.push_back(e);
    }
    return out;
}

void TraceLog::write_line(const nlohmann::ordered_json& line) {
    if (file_.is_open()) {
        file_ << line.dump() << '\n';
        file_.flush();
    }
}

}  // namespace deskagent
