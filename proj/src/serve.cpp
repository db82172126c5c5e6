#include "dsrec/serve.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>
#include <json.hpp>

#include "dsrec/version.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

bool parse_count(const std::string& raw, std::size_t& out) {
    if (raw.empty() || raw.size() > 9) return false;
    for (char c : raw) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    out = std::stoul(raw);
    return true;
}

}  // namespace

RecommendationService::RecommendationService() { configure_routes(); }

RecommendationService::RecommendationService(Run run) : run_(std::move(run)) {
    configure_routes();
}

RecommendationService::~RecommendationService() {
    if (server_) server_->stop();
}

RecommendationService::Response RecommendationService::handle_recommendation(
    const std::string& publication_id, const std::optional<std::string>& count_param) const {
    if (!run_) {
        return {503, json{{"error", "recommendation store not loaded"}}.dump()};
    }
    std::size_t count = kMaxServeResults;
    if (count_param) {
        if (!parse_count(*count_param, count)) {
            return {400, json{{"error", "count must be a non-negative integer"}}.dump()};
        }
    }
    count = std::min(count, kMaxServeResults);
    auto it = run_->rankings.find(publication_id);
    json results = json::array();
    const bool known = it != run_->rankings.end();
    if (known) {
        const RankedList& ranking = it->second;
        const std::size_t n = std::min(count, ranking.size());
        for (std::size_t i = 0; i < n; ++i) {
            results.push_back(
                {{"id", ranking[i].id}, {"rank", i + 1}, {"score", ranking[i].score}});
        }
    }
    return {200, json{{"known", known}, {"results", results}}.dump()};
}

RecommendationService::Response RecommendationService::handle_health() const {
    return {200, json{{"status", "ok"},
                      {"service", "dsrec"},
                      {"version", kVersion},
                      {"ready", run_.has_value()},
                      {"queries", run_ ? run_->rankings.size() : 0}}
                     .dump()};
}

void RecommendationService::configure_routes() {
    server_ = std::make_unique<httplib::Server>();
    server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        const Response out = handle_health();
        res.status = out.status;
        res.set_content(out.body, "application/json");
    });
    server_->Get(R"(/recommendation/([^/]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     std::optional<std::string> count;
                     if (req.has_param("count")) count = req.get_param_value("count");
                     const Response out = handle_recommendation(req.matches[1], count);
                     res.status = out.status;
                     res.set_content(out.body, "application/json");
                 });
}

int RecommendationService::bind_any_port(const std::string& host) {
    return server_->bind_to_any_port(host);
}

bool RecommendationService::listen_after_bind() { return server_->listen_after_bind(); }

bool RecommendationService::listen(const std::string& host, int port) {
    return server_->listen(host, port);
}

void RecommendationService::stop() { server_->stop(); }

}  // namespace dsrec
