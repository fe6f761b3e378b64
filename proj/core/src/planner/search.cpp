#include "deskagent/planner/search.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "deskagent/common/errors.hpp"
#include "deskagent/common/hash.hpp"

namespace deskagent::planner {

WebKnowledge StubSearchClient::search(const std::string& query) {
    const auto path = dir_ / (fingerprint(query) + ".txt");
    std::ifstream in(path);
    if (!in) return {"", "stub"};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return {buffer.str(), "stub"};
}

std::filesystem::path StubSearchClient::put(const std::string& query,
                                            const std::string& answer) const {
    std::filesystem::create_directories(dir_);
    const auto path = dir_ / (fingerprint(query) + ".txt");
    std::ofstream out(path);
    out << answer;
    return path;
}

WebKnowledge HttpSearchClient::search(const std::string& query) {
    const auto scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) {
        throw BackendError("search endpoint must include a scheme: " + endpoint_);
    }
    const auto path_start = endpoint_.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    httplib::Client client(base);
    const auto timeout = static_cast<time_t>(std::llround(timeout_s_));
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);

    nlohmann::json body;
    body["query"] = query;
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) {
        throw BackendError("search transport failure: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw BackendError("search returned HTTP " + std::to_string(res->status));
    }
    try {
        const auto parsed = nlohmann::json::parse(res->body);
        return {parsed.value("answer", ""), "http"};
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("bad search response: ") + e.what());
    }
}

}  // namespace deskagent::planner
