#include "deskagent/memory/store.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/text.hpp"

namespace deskagent::memory {

namespace {

constexpr int kSchemaVersion = 1;

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string flatten_newlines(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

}  // namespace

std::string_view store_kind_name(StoreKind kind) {
    return kind == StoreKind::narrative ? "narrative" : "episodic";
}

std::string_view outcome_name(Outcome outcome) {
    return outcome == Outcome::success ? "success" : "failure";
}

std::string make_episodic_key(const std::string& query, const std::string& subtask,
                              const std::string& context) {
    return flatten_newlines(query) + '\n' + flatten_newlines(subtask) + '\n' + context;
}

EpisodicKeyParts split_episodic_key(const std::string& key) {
    const auto first = key.find('\n');
    if (first == std::string::npos) throw ParseError("episodic key has no subtask segment");
    const auto second = key.find('\n', first + 1);
    if (second == std::string::npos) throw ParseError("episodic key has no context segment");
    return {key.substr(0, first), key.substr(first + 1, second - first - 1),
            key.substr(second + 1)};
}

MemoryStore::MemoryStore(StoreKind kind, std::shared_ptr<Embedder> embedder,
                         std::optional<std::filesystem::path> file)
    : kind_(kind), embedder_(std::move(embedder)), file_path_(std::move(file)) {
    if (!embedder_) throw ConfigError("memory store requires an embedder");
    if (file_path_) load_or_create();
}

void MemoryStore::load_or_create() {
    const auto& path = *file_path_;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        if (!in) throw PersistError("cannot read memory store: " + path.string());
        std::string line;
        if (!std::getline(in, line)) throw PersistError("empty store file: " + path.string());
        nlohmann::json header;
        try {
            header = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw PersistError("bad store header in " + path.string() + ": " + e.what());
        }
        if (header.value("store", "") != std::string(store_kind_name(kind_))) {
            throw PersistError("store kind mismatch in " + path.string());
        }
        if (header.value("version", 0) != kSchemaVersion) {
            throw PersistError("unsupported store schema version in " + path.string());
        }
        if (header.value("embedder", "") != embedder_->id()) {
            throw PersistError("store " + path.string() + " was built with embedder '" +
                               header.value("embedder", "") + "', not '" + embedder_->id() + "'");
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            nlohmann::json parsed;
            try {
                parsed = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw PersistError("bad record at " + path.string() + ":" +
                                   std::to_string(line_no) + ": " + e.what());
            }
            MemoryRecord record;
            record.id = parsed.at("id").get<std::int64_t>();
            record.key = parsed.at("key").get<std::string>();
            record.embedding = parsed.at("embedding").get<std::vector<double>>();
            record.payload = parsed.at("payload").get<std::string>();
            record.created_at = parsed.at("created_at").get<std::int64_t>();
            if (parsed.contains("outcome")) {
                record.outcome = parsed["outcome"] == "success" ? Outcome::success
                                                                : Outcome::failure;
            }
            next_id_ = std::max(next_id_, record.id + 1);
            records_.push_back(std::move(record));
        }
    } else {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw PersistError("cannot create memory store: " + path.string());
        nlohmann::ordered_json header;
        header["store"] = store_kind_name(kind_);
        header["version"] = kSchemaVersion;
        header["dimension"] = embedder_->dimension();
        header["embedder"] = embedder_->id();
        out << header.dump() << '\n';
    }
    appender_.open(path, std::ios::app);
    if (!appender_) throw PersistError("cannot append to memory store: " + path.string());
}

void MemoryStore::append_line(const std::string& line) {
    if (!file_path_) return;
    appender_ << line << '\n';
    appender_.flush();
    if (!appender_) throw PersistError("write failed on " + file_path_->string());
}

std::int64_t MemoryStore::save(const std::string& key, const std::string& payload,
                               std::optional<Outcome> outcome) {
    if (trim(key).empty()) throw PersistError("record key must be non-empty");
    if (trim(payload).empty()) throw PersistError("record payload must be non-empty");

    MemoryRecord record;
    record.key = key;
    record.embedding = embedder_->embed(key);
    record.payload = payload;
    record.outcome = outcome;
    record.created_at = now_ms();

    std::unique_lock lock(mutex_);
    record.id = next_id_++;

    nlohmann::ordered_json line;
    line["id"] = record.id;
    line["key"] = record.key;
    line["embedding"] = record.embedding;
    line["payload"] = record.payload;
    if (record.outcome) line["outcome"] = outcome_name(*record.outcome);
    line["created_at"] = record.created_at;
    append_line(line.dump());

    records_.push_back(record);
    return record.id;
}

std::vector<RetrievalHit> MemoryStore::retrieve(const std::string& query_text, int k) const {
    if (k < 1) throw std::invalid_argument("retrieve() requires k >= 1");
    std::shared_lock lock(mutex_);
    if (records_.empty()) return {};

    const std::vector<double> query = embedder_->embed(query_text);
    std::vector<std::size_t> order(records_.size());
    std::vector<double> scores(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        order[i] = i;
        scores[i] = cosine_similarity(query, records_[i].embedding);
    }
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        if (records_[a].created_at != records_[b].created_at) {
            return records_[a].created_at < records_[b].created_at;
        }
        return records_[a].id < records_[b].id;
    };
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end(), better);

    std::vector<RetrievalHit> hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        hits.push_back({records_[order[i]], scores[order[i]]});
    }
    return hits;
}

std::size_t MemoryStore::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

MemoryRecord MemoryStore::record_at(std::size_t index) const {
    std::shared_lock lock(mutex_);
    return records_.at(index);
}

std::int64_t save_narrative(MemoryStore& store, const std::string& query,
                            const std::string& summary, Outcome outcome) {
    if (store.kind() != StoreKind::narrative) throw PersistError("not a narrative store");
    return store.save(query, summary, outcome);
}

std::int64_t save_episodic(MemoryStore& store, const std::string& query,
                           const std::string& subtask, const std::string& context,
                           const std::string& plan) {
    if (store.kind() != StoreKind::episodic) throw PersistError("not an episodic store");
    return store.save(make_episodic_key(query, subtask, context), plan);
}

}  // namespace deskagent::memory
