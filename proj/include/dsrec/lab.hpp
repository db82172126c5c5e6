#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsrec/ranking.hpp"
#include "dsrec/rng.hpp"

namespace dsrec {

enum class Team { A, B };

struct InterleavedEntry {
    std::string doc_id;
    Team team = Team::A;  // the team whose pick placed the document
    bool shared = false;  // present in both source rankings

    bool operator==(const InterleavedEntry&) const = default;
};

using InterleavedRanking = std::vector<InterleavedEntry>;

/// Team-draft interleaving. Rounds of paired picks: a fair coin decides which
/// team picks first, each pick takes the team's highest-ranked id not yet on
/// the page. Stops at page_size or when a team runs out, which keeps the two
/// contribution counts within one of each other.
InterleavedRanking team_draft_interleave(const std::vector<std::string>& ranking_a,
                                         const std::vector<std::string>& ranking_b,
                                         std::size_t page_size, Rng& rng);

/// Same mechanics with an injected coin (true = team A picks first).
InterleavedRanking team_draft_interleave(const std::vector<std::string>& ranking_a,
                                         const std::vector<std::string>& ranking_b,
                                         std::size_t page_size,
                                         const std::function<bool()>& coin_says_a_first);

/// Position-biased click probabilities, one per page slot.
struct ClickModel {
    std::vector<double> probabilities;

    /// Distributes an overall click-through rate over positions proportionally
    /// to observed per-position click counts: p(pos) ~ count(pos), scaled so
    /// the expected clicks per rendered page equal target_ctr * page size.
    static ClickModel fit(const std::vector<std::uint64_t>& position_clicks, double target_ctr);

    void validate() const;  // all probabilities in [0,1]
    std::size_t page_size() const { return probabilities.size(); }
};

/// Per-position click counts observed in one lab round; the default model is
/// fitted to these.
const std::vector<std::uint64_t>& default_position_clicks();
constexpr double kDefaultTargetCtr = 0.0145;
constexpr std::size_t kDefaultPageSize = 6;

ClickModel default_click_model();

enum class Credit { WinA, WinB, Tie, NoClicks };

std::string credit_name(Credit credit);

struct SessionClick {
    std::size_t position = 1;  // 1-based slot in the interleaved ranking
    std::string doc_id;
    Team team = Team::A;
    bool shared = false;
};

struct SessionOutcome {
    std::string session_id;
    std::vector<SessionClick> clicks;
    Credit credit = Credit::NoClicks;
};

/// More clicks on A's results wins for A, ditto for B; equal nonzero click
/// counts tie; no clicks yield no credit. A click on a document both systems
/// ranked counts for both teams, so a system interleaved against itself can
/// only tie. Team and shared flags are taken from the interleaved entries;
/// a click referencing an id outside the ranking throws.
Credit credit_session(const InterleavedRanking& interleaved,
                      const std::vector<SessionClick>& clicks);

/// Each position is clicked independently with its model probability.
SessionOutcome simulate_session(std::string session_id, const InterleavedRanking& interleaved,
                                const ClickModel& model, Rng& rng);

struct SystemStats {
    std::string tag;
    std::uint64_t wins = 0, losses = 0, ties = 0;
    std::optional<double> outcome;  // wins / (wins + losses); empty when undefined
    std::uint64_t sessions = 0;
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;
    std::optional<double> ctr;  // clicks / impressions; empty when undefined
};

struct LabReport {
    SystemStats a, b;
    std::uint64_t no_click_sessions = 0;
};

std::optional<double> outcome_ratio(std::uint64_t wins, std::uint64_t losses);
std::optional<double> click_through_rate(std::uint64_t clicks, std::uint64_t impressions);

nlohmann::json to_json(const LabReport& report);
/// Fixed-width table, one row per system.
std::string format_lab_table(const LabReport& report);

/// Tallies win/loss/tie per system over all sessions; zero-click sessions
/// count toward sessions and impressions only. Impressions are counted as
/// result rows rendered: impressions_per_session per session.
LabReport aggregate(const std::vector<SessionOutcome>& outcomes,
                    std::uint64_t impressions_per_session, std::string tag_a = "run_a",
                    std::string tag_b = "run_b");

/// Click counts per interleaved position (1-based), length page_size.
std::vector<std::uint64_t> position_click_histogram(const std::vector<SessionOutcome>& outcomes,
                                                    std::size_t page_size);

struct LabConfig {
    std::size_t page_size = kDefaultPageSize;
    std::uint64_t seed = 1;
    std::uint64_t sessions = 1000;
    double target_ctr = kDefaultTargetCtr;
    std::vector<std::uint64_t> position_clicks = default_position_clicks();
};

struct SimulationResult {
    LabReport report;
    std::vector<SessionOutcome> outcomes;
    std::vector<std::uint64_t> histogram;
};

/// Deterministic lab simulation of two runs: sessions cycle through the
/// union of query ids, each session interleaves the two rankings and draws
/// clicks from the fitted model. One child random stream per session.
SimulationResult simulate_lab(const Run& run_a, const Run& run_b, const LabConfig& config);

}  // namespace dsrec
