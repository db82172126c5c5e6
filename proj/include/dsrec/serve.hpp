#pragma once

#include <memory>
#include <optional>
#include <string>

#include "dsrec/ranking.hpp"

namespace httplib {
class Server;
}

namespace dsrec {

/// A served page shows at most six recommendations.
constexpr std::size_t kMaxServeResults = 6;

/// Read-only endpoint over a precomputed run.
///
///   GET /recommendation/{publication_id}?count=n
///     -> {"known": bool, "results": [{"id","rank","score"}...]}
///        count defaults to 6 and is capped at 6; malformed -> 400;
///        no run loaded -> 503.
///   GET /health -> service/version info and readiness.
class RecommendationService {
  public:
    RecommendationService();                 // not ready: /recommendation answers 503
    explicit RecommendationService(Run run);
    ~RecommendationService();

    struct Response {
        int status = 200;
        std::string body;  // application/json
    };

    Response handle_recommendation(const std::string& publication_id,
                                   const std::optional<std::string>& count_param) const;
    Response handle_health() const;

    /// Binds to an ephemeral port and returns it (test harness entry point).
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    /// Blocking serve loop.
    bool listen(const std::string& host, int port);
    void stop();

  private:
    std::optional<Run> run_;
    std::unique_ptr<httplib::Server> server_;

    void configure_routes();
};

}  // namespace dsrec
