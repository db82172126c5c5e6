#include "dsrec/lab.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dsrec {

namespace {

using nlohmann::json;

// Advances `next` past ids already picked and returns the next fresh id, or
// nullptr when the ranking is exhausted.
const std::string* next_pick(const std::vector<std::string>& ranking, std::size_t& next,
                             const std::unordered_set<std::string>& taken) {
    while (next < ranking.size()) {
        const std::string& id = ranking[next];
        ++next;
        if (taken.count(id) == 0) return &id;
    }
    return nullptr;
}

}  // namespace

InterleavedRanking team_draft_interleave(const std::vector<std::string>& ranking_a,
                                         const std::vector<std::string>& ranking_b,
                                         std::size_t page_size,
                                         const std::function<bool()>& coin_says_a_first) {
    InterleavedRanking page;
    std::unordered_set<std::string> taken;
    const std::unordered_set<std::string> in_a(ranking_a.begin(), ranking_a.end());
    const std::unordered_set<std::string> in_b(ranking_b.begin(), ranking_b.end());
    std::size_t next_a = 0, next_b = 0;
    const auto pick = [&](Team team) -> bool {
        const auto& ranking = team == Team::A ? ranking_a : ranking_b;
        auto& cursor = team == Team::A ? next_a : next_b;
        const std::string* id = next_pick(ranking, cursor, taken);
        if (id == nullptr) return false;
        taken.insert(*id);
        page.push_back({*id, team, in_a.count(*id) > 0 && in_b.count(*id) > 0});
        return true;
    };
    while (page.size() < page_size) {
        const Team first = coin_says_a_first() ? Team::A : Team::B;
        const Team second = first == Team::A ? Team::B : Team::A;
        if (!pick(first)) break;
        if (page.size() >= page_size) break;
        if (!pick(second)) break;
    }
    return page;
}

InterleavedRanking team_draft_interleave(const std::vector<std::string>& ranking_a,
                                         const std::vector<std::string>& ranking_b,
                                         std::size_t page_size, Rng& rng) {
    return team_draft_interleave(ranking_a, ranking_b, page_size,
                                 [&rng]() { return rng.next_bool(); });
}

ClickModel ClickModel::fit(const std::vector<std::uint64_t>& position_clicks, double target_ctr) {
    if (position_clicks.empty()) throw std::invalid_argument("click model needs >= 1 position");
    if (target_ctr < 0.0 || target_ctr > 1.0) {
        throw std::invalid_argument("target click-through rate outside [0,1]");
    }
    std::uint64_t total = 0;
    for (auto count : position_clicks) total += count;
    ClickModel model;
    model.probabilities.reserve(position_clicks.size());
    const double scale =
        total == 0 ? 0.0 : target_ctr * static_cast<double>(position_clicks.size());
    for (auto count : position_clicks) {
        model.probabilities.push_back(total == 0 ? 0.0
                                                 : scale * static_cast<double>(count) /
                                                       static_cast<double>(total));
    }
    model.validate();
    return model;
}

void ClickModel::validate() const {
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("click probability outside [0,1]");
        }
    }
}

const std::vector<std::uint64_t>& default_position_clicks() {
    static const std::vector<std::uint64_t> counts = {21, 8, 6, 5, 2, 5};
    return counts;
}

ClickModel default_click_model() {
    return ClickModel::fit(default_position_clicks(), kDefaultTargetCtr);
}

std::string credit_name(Credit credit) {
    switch (credit) {
        case Credit::WinA: return "win_a";
        case Credit::WinB: return "win_b";
        case Credit::Tie: return "tie";
        case Credit::NoClicks: return "no_clicks";
    }
    return "no_clicks";
}

Credit credit_session(const InterleavedRanking& interleaved,
                      const std::vector<SessionClick>& clicks) {
    std::unordered_map<std::string, const InterleavedEntry*> shown;
    for (const auto& entry : interleaved) shown.emplace(entry.doc_id, &entry);
    std::uint64_t clicks_a = 0, clicks_b = 0;
    for (const auto& click : clicks) {
        auto it = shown.find(click.doc_id);
        if (it == shown.end()) {
            throw std::invalid_argument("clicked id not in interleaved ranking: " + click.doc_id);
        }
        const InterleavedEntry& entry = *it->second;
        if (entry.shared || entry.team == Team::A) ++clicks_a;
        if (entry.shared || entry.team == Team::B) ++clicks_b;
    }
    if (clicks_a == 0 && clicks_b == 0) return Credit::NoClicks;
    if (clicks_a > clicks_b) return Credit::WinA;
    if (clicks_b > clicks_a) return Credit::WinB;
    return Credit::Tie;
}

SessionOutcome simulate_session(std::string session_id, const InterleavedRanking& interleaved,
                                const ClickModel& model, Rng& rng) {
    if (model.page_size() < interleaved.size()) {
        throw std::invalid_argument("click model shorter than interleaved ranking");
    }
    SessionOutcome outcome;
    outcome.session_id = std::move(session_id);
    for (std::size_t i = 0; i < interleaved.size(); ++i) {
        if (rng.next_double() < model.probabilities[i]) {
            outcome.clicks.push_back(
                {i + 1, interleaved[i].doc_id, interleaved[i].team, interleaved[i].shared});
        }
    }
    outcome.credit = credit_session(interleaved, outcome.clicks);
    return outcome;
}

std::optional<double> outcome_ratio(std::uint64_t wins, std::uint64_t losses) {
    if (wins + losses == 0) return std::nullopt;
    return static_cast<double>(wins) / static_cast<double>(wins + losses);
}

std::optional<double> click_through_rate(std::uint64_t clicks, std::uint64_t impressions) {
    if (impressions == 0) return std::nullopt;
    return static_cast<double>(clicks) / static_cast<double>(impressions);
}

LabReport aggregate(const std::vector<SessionOutcome>& outcomes,
                    std::uint64_t impressions_per_session, std::string tag_a, std::string tag_b) {
    LabReport report;
    report.a.tag = std::move(tag_a);
    report.b.tag = std::move(tag_b);
    for (const auto& outcome : outcomes) {
        switch (outcome.credit) {
            case Credit::WinA:
                ++report.a.wins;
                ++report.b.losses;
                break;
            case Credit::WinB:
                ++report.b.wins;
                ++report.a.losses;
                break;
            case Credit::Tie:
                ++report.a.ties;
                ++report.b.ties;
                break;
            case Credit::NoClicks:
                ++report.no_click_sessions;
                break;
        }
        for (const auto& click : outcome.clicks) {
            if (click.shared || click.team == Team::A) ++report.a.clicks;
            if (click.shared || click.team == Team::B) ++report.b.clicks;
        }
    }
    const std::uint64_t sessions = outcomes.size();
    const std::uint64_t impressions = sessions * impressions_per_session;
    report.a.sessions = report.b.sessions = sessions;
    report.a.impressions = report.b.impressions = impressions;
    report.a.outcome = outcome_ratio(report.a.wins, report.a.losses);
    report.b.outcome = outcome_ratio(report.b.wins, report.b.losses);
    report.a.ctr = click_through_rate(report.a.clicks, impressions);
    report.b.ctr = click_through_rate(report.b.clicks, impressions);
    return report;
}

namespace {

json to_json(const SystemStats& stats) {
    return json{{"system", stats.tag},
                {"win", stats.wins},
                {"loss", stats.losses},
                {"tie", stats.ties},
                {"outcome", stats.outcome ? json(*stats.outcome) : json(nullptr)},
                {"sessions", stats.sessions},
                {"impressions", stats.impressions},
                {"clicks", stats.clicks},
                {"ctr", stats.ctr ? json(*stats.ctr) : json(nullptr)}};
}

void append_row(std::string& out, const SystemStats& stats) {
    char buf[512];
    char outcome[64], ctr[64];
    if (stats.outcome) {
        std::snprintf(outcome, sizeof(outcome), "%7.2f", *stats.outcome);
    } else {
        std::snprintf(outcome, sizeof(outcome), "%7s", "n/a");
    }
    if (stats.ctr) {
        std::snprintf(ctr, sizeof(ctr), "%8.4f", *stats.ctr);
    } else {
        std::snprintf(ctr, sizeof(ctr), "%8s", "n/a");
    }
    std::snprintf(buf, sizeof(buf), "%-20s %6llu %6llu %5llu %s %9llu %12llu %7llu %s\n",
                  stats.tag.c_str(), static_cast<unsigned long long>(stats.wins),
                  static_cast<unsigned long long>(stats.losses),
                  static_cast<unsigned long long>(stats.ties), outcome,
                  static_cast<unsigned long long>(stats.sessions),
                  static_cast<unsigned long long>(stats.impressions),
                  static_cast<unsigned long long>(stats.clicks), ctr);
    out += buf;
}

}  // namespace

nlohmann::json to_json(const LabReport& report) {
    return json{{"systems", json::array({to_json(report.a), to_json(report.b)})},
                {"no_click_sessions", report.no_click_sessions}};
}

std::string format_lab_table(const LabReport& report) {
    std::string out;
    char header[256];
    std::snprintf(header, sizeof(header), "%-20s %6s %6s %5s %7s %9s %12s %7s %8s\n", "system",
                  "win", "loss", "tie", "outcome", "sessions", "impressions", "clicks", "ctr");
    out += header;
    append_row(out, report.a);
    append_row(out, report.b);
    return out;
}

std::vector<std::uint64_t> position_click_histogram(const std::vector<SessionOutcome>& outcomes,
                                                    std::size_t page_size) {
    std::vector<std::uint64_t> histogram(page_size, 0);
    for (const auto& outcome : outcomes) {
        for (const auto& click : outcome.clicks) {
            if (click.position >= 1 && click.position <= page_size) {
                ++histogram[click.position - 1];
            }
        }
    }
    return histogram;
}

SimulationResult simulate_lab(const Run& run_a, const Run& run_b, const LabConfig& config) {
    const ClickModel model = ClickModel::fit(config.position_clicks, config.target_ctr);
    if (model.page_size() < config.page_size) {
        throw std::invalid_argument("click model shorter than the page size");
    }
    std::set<std::string> qids;
    for (const auto& [qid, _] : run_a.rankings) qids.insert(qid);
    for (const auto& [qid, _] : run_b.rankings) qids.insert(qid);
    const std::vector<std::string> query_ids(qids.begin(), qids.end());

    const auto ids_of = [](const Run& run, const std::string& qid) {
        std::vector<std::string> ids;
        auto it = run.rankings.find(qid);
        if (it == run.rankings.end()) return ids;
        ids.reserve(it->second.size());
        for (const auto& entry : it->second) ids.push_back(entry.id);
        return ids;
    };

    SimulationResult result;
    result.outcomes.reserve(config.sessions);
    for (std::uint64_t session = 0; session < config.sessions; ++session) {
        Rng rng = Rng::child(config.seed, session);
        char session_id[32];
        std::snprintf(session_id, sizeof(session_id), "s%06llu",
                      static_cast<unsigned long long>(session));
        if (query_ids.empty()) {
            result.outcomes.push_back({session_id, {}, Credit::NoClicks});
            continue;
        }
        const std::string& qid = query_ids[session % query_ids.size()];
        const auto interleaved = team_draft_interleave(ids_of(run_a, qid), ids_of(run_b, qid),
                                                       config.page_size, rng);
        result.outcomes.push_back(simulate_session(session_id, interleaved, model, rng));
    }
    result.report = aggregate(result.outcomes, config.page_size, run_a.tag, run_b.tag);
    result.histogram = position_click_histogram(result.outcomes, config.page_size);
    return result;
}

}  // namespace dsrec
