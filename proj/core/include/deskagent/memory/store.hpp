#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "deskagent/memory/embedder.hpp"

namespace deskagent::memory {

enum class StoreKind { narrative, episodic };
enum class Outcome { success, failure };

std::string_view store_kind_name(StoreKind kind);
std::string_view outcome_name(Outcome outcome);

/// One stored experience. For narrative stores the payload is the abstractive
/// full-task summary; for episodic stores it is the grounded subtask plan.
struct MemoryRecord {
    std::int64_t id = 0;
    std::string key;
    std::vector<double> embedding;
    std::string payload;
    std::optional<Outcome> outcome;  // narrative records only
    std::int64_t created_at = 0;     // epoch milliseconds
};

struct RetrievalHit {
    MemoryRecord record;
    double similarity = 0.0;
};

/// Episodic keys concatenate query, subtask and context with single newlines.
/// Newlines inside the query or subtask are flattened to spaces so the key
/// always splits back into exactly three segments (context may be multi-line).
std::string make_episodic_key(const std::string& query, const std::string& subtask,
                              const std::string& context);

struct EpisodicKeyParts {
    std::string query;
    std::string subtask;
    std::string context;
};
EpisodicKeyParts split_episodic_key(const std::string& key);

/// Append-only experience store with exact cosine retrieval.
///
/// With a file attached, records persist as JSON lines under a header line
/// carrying the schema version, store kind, and embedder identity; reopening
/// the same file restores the store. Reads are concurrent; writes serialize.
class MemoryStore {
public:
    MemoryStore(StoreKind kind, std::shared_ptr<Embedder> embedder,
                std::optional<std::filesystem::path> file = std::nullopt);

    MemoryStore(const MemoryStore&) = delete;
    MemoryStore& operator=(const MemoryStore&) = delete;

    /// Appends a record keyed by `key`. Throws PersistError on IO failure.
    std::int64_t save(const std::string& key, const std::string& payload,
                      std::optional<Outcome> outcome = std::nullopt);

    /// Top-k by cosine similarity; ties broken by older created_at, then id.
    /// An empty store yields an empty result.
    std::vector<RetrievalHit> retrieve(const std::string& query_text, int k) const;

    std::size_t size() const;
    MemoryRecord record_at(std::size_t index) const;
    StoreKind kind() const { return kind_; }
    const std::optional<std::filesystem::path>& file() const { return file_path_; }
    Embedder& embedder() { return *embedder_; }

private:
    void load_or_create();
    void append_line(const std::string& line);

    StoreKind kind_;
    std::shared_ptr<Embedder> embedder_;
    std::optional<std::filesystem::path> file_path_;
    std::ofstream appender_;

    mutable std::shared_mutex mutex_;
    std::vector<MemoryRecord> records_;
    std::int64_t next_id_ = 1;
};

/// Stores a full-task summary keyed by the observation-aware query.
/// Both success and failure outcomes are stored.
std::int64_t save_narrative(MemoryStore& store, const std::string& query,
                            const std::string& summary, Outcome outcome);

/// Stores a successful subtask plan keyed by (query, subtask, context).
/// Callers assert the subtask ended with DONE.
std::int64_t save_episodic(MemoryStore& store, const std::string& query,
                           const std::string& subtask, const std::string& context,
                           const std::string& plan);

}  // namespace deskagent::memory
