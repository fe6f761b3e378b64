#pragma once

#include <filesystem>
#include <string>

#include "deskagent/llm/gateway.hpp"
#include "deskagent/planner/types.hpp"

namespace deskagent::planner {

/// External knowledge source consulted with the observation-aware query.
class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual WebKnowledge search(const std::string& query) = 0;
    virtual std::string id() const = 0;
};

/// Always answers with empty knowledge.
class DisabledSearchClient final : public SearchClient {
public:
    WebKnowledge search(const std::string&) override { return {"", "disabled"}; }
    std::string id() const override { return "disabled"; }
};

/// Reads canned answers from a directory: the answer for a query lives in
/// `<fingerprint(query)>.txt`. A missing file yields empty knowledge.
class StubSearchClient final : public SearchClient {
public:
    explicit StubSearchClient(std::filesystem::path dir) : dir_(std::move(dir)) {}

    WebKnowledge search(const std::string& query) override;
    std::string id() const override { return "stub"; }

    /// Writes the canned answer file for a query; used to seed fixtures.
    std::filesystem::path put(const std::string& query, const std::string& answer) const;

private:
    std::filesystem::path dir_;
};

/// POSTs {"query": ...} to the configured endpoint and reads {"answer": ...}.
class HttpSearchClient final : public SearchClient {
public:
    explicit HttpSearchClient(std::string endpoint, double timeout_s = 30.0)
        : endpoint_(std::move(endpoint)), timeout_s_(timeout_s) {}

    WebKnowledge search(const std::string& query) override;
    std::string id() const override { return "http"; }

private:
    std::string endpoint_;
    double timeout_s_;
};

}  // namespace deskagent::planner
