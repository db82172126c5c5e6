#include "dsrec/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dsrec/errors.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

std::string shortest_decimal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

}  // namespace

double Qrels::gain(const std::string& qid, const std::string& doc_id) const {
    auto query = gains.find(qid);
    if (query == gains.end()) return 0.0;
    auto doc = query->second.find(doc_id);
    return doc == query->second.end() ? 0.0 : doc->second;
}

bool Qrels::relevant(const std::string& qid, const std::string& doc_id) const {
    return gain(qid, doc_id) > 0.0;
}

std::size_t Qrels::relevant_count(const std::string& qid) const {
    auto query = gains.find(qid);
    if (query == gains.end()) return 0;
    std::size_t count = 0;
    for (const auto& [_, gain] : query->second) {
        if (gain > 0.0) ++count;
    }
    return count;
}

std::string format_trec_qrels(const Qrels& qrels) {
    std::string out;
    for (const auto& [qid, docs] : qrels.gains) {
        for (const auto& [doc_id, gain] : docs) {
            out += qid;
            out += " 0 ";
            out += doc_id;
            out += ' ';
            out += shortest_decimal(gain);
            out += '\n';
        }
    }
    return out;
}

void write_trec_qrels(const Qrels& qrels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write qrels file: " + path);
    out << format_trec_qrels(qrels);
}

Qrels read_trec_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read qrels file: " + path);
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string qid, iteration, doc_id;
        double gain = 0.0;
        if (!(fields >> qid >> iteration >> doc_id >> gain) || !std::isfinite(gain) ||
            gain < 0.0) {
            throw DataError("bad qrels line " + std::to_string(line_no) + " in " + path);
        }
        qrels.gains[qid][doc_id] = gain;
    }
    return qrels;
}

CandidatesLoadResult load_candidates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read candidates file: " + path);
    CandidatesLoadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json parsed = json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("qid") ||
            !parsed["qid"].is_string() || !parsed.contains("candidates") ||
            !parsed["candidates"].is_array()) {
            result.rejections.push_back({line_no, "malformed candidate list"});
            continue;
        }
        CandidateList list;
        list.qid = parsed["qid"].get<std::string>();
        bool ok = true;
        for (const auto& item : parsed["candidates"]) {
            if (!item.is_object() || !item.contains("id") || !item["id"].is_string() ||
                !item.contains("score") || !item["score"].is_number()) {
                result.rejections.push_back({line_no, "malformed candidate entry"});
                ok = false;
                break;
            }
            list.candidates.push_back({item["id"].get<std::string>(), item["score"].get<double>()});
        }
        if (ok) result.lists.push_back(std::move(list));
    }
    return result;
}

PseudoQrelsResult build_pseudo_qrels(const std::vector<CandidateList>& lists) {
    PseudoQrelsResult result;
    for (const auto& list : lists) {
        for (const auto& candidate : list.candidates) {
            if (candidate.score < 0.0) {
                ++result.rejected_negative;
                continue;
            }
            auto& gains = result.qrels.gains[list.qid];
            auto [it, inserted] = gains.emplace(candidate.doc_id, candidate.score);
            if (!inserted) it->second = std::max(it->second, candidate.score);
        }
        // A query whose candidates were all rejected leaves no entry behind.
        auto query = result.qrels.gains.find(list.qid);
        if (query != result.qrels.gains.end() && query->second.empty()) {
            result.qrels.gains.erase(query);
        }
    }
    return result;
}

double precision_at_k(const RankedList& ranking, const Qrels& qrels, const std::string& qid,
                      std::size_t k) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
        if (qrels.relevant(qid, ranking[i].id)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double recall_at_k(const RankedList& ranking, const Qrels& qrels, const std::string& qid,
                   std::size_t k) {
    const std::size_t relevant = qrels.relevant_count(qid);
    if (relevant == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
        if (qrels.relevant(qid, ranking[i].id)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(relevant);
}

double average_precision(const RankedList& ranking, const Qrels& qrels, const std::string& qid) {
    const std::size_t relevant = qrels.relevant_count(qid);
    if (relevant == 0) return 0.0;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (!qrels.relevant(qid, ranking[i].id)) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(relevant);
}

double ndcg(const RankedList& ranking, const Qrels& qrels, const std::string& qid) {
    double dcg = 0.0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const double gain = qrels.gain(qid, ranking[i].id);
        if (gain > 0.0) dcg += gain / std::log2(static_cast<double>(i + 2));
    }
    auto query = qrels.gains.find(qid);
    if (query == qrels.gains.end()) return 0.0;
    std::vector<double> ideal;
    ideal.reserve(query->second.size());
    for (const auto& [_, gain] : query->second) {
        if (gain > 0.0) ideal.push_back(gain);
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        idcg += ideal[i] / std::log2(static_cast<double>(i + 2));
    }
    return idcg == 0.0 ? 0.0 : dcg / idcg;
}

RelRet rel_ret(const RankedList& ranking, const Qrels& qrels, const std::string& qid) {
    RelRet result;
    for (const auto& entry : ranking) {
        if (qrels.relevant(qid, entry.id)) ++result.count;
    }
    const std::size_t relevant = qrels.relevant_count(qid);
    result.fraction =
        relevant == 0 ? 0.0 : static_cast<double>(result.count) / static_cast<double>(relevant);
    return result;
}

nlohmann::json to_json(const QueryMetrics& metrics) {
    return json{{"map", metrics.map},           {"ndcg", metrics.ndcg},
                {"p_5", metrics.p5},            {"p_10", metrics.p10},
                {"r_10", metrics.r10},          {"rel_ret", metrics.rel_ret_count},
                {"rel_ret_frac", metrics.rel_ret_frac}};
}

nlohmann::json to_json(const MetricReport& report) {
    json per_query = json::object();
    for (const auto& [qid, metrics] : report.per_query) per_query[qid] = to_json(metrics);
    return json{{"mean", to_json(report.mean)},
                {"per_query", per_query},
                {"query_count", report.query_count},
                {"skipped_no_relevant", report.skipped_no_relevant}};
}

MetricReport evaluate_run(const Run& run, const Qrels& qrels) {
    MetricReport report;
    std::size_t overlapping = 0;
    for (const auto& [qid, ranking] : run.rankings) {
        if (!qrels.has_query(qid)) continue;  // unjudged queries are ignored
        ++overlapping;
        if (qrels.relevant_count(qid) == 0) {
            ++report.skipped_no_relevant;
            continue;
        }
        QueryMetrics metrics;
        metrics.map = average_precision(ranking, qrels, qid);
        metrics.ndcg = ndcg(ranking, qrels, qid);
        metrics.p5 = precision_at_k(ranking, qrels, qid, 5);
        metrics.p10 = precision_at_k(ranking, qrels, qid, 10);
        metrics.r10 = recall_at_k(ranking, qrels, qid, 10);
        const RelRet rr = rel_ret(ranking, qrels, qid);
        metrics.rel_ret_count = static_cast<double>(rr.count);
        metrics.rel_ret_frac = rr.fraction;
        report.mean.map += metrics.map;
        report.mean.ndcg += metrics.ndcg;
        report.mean.p5 += metrics.p5;
        report.mean.p10 += metrics.p10;
        report.mean.r10 += metrics.r10;
        report.mean.rel_ret_count += metrics.rel_ret_count;
        report.mean.rel_ret_frac += metrics.rel_ret_frac;
        report.per_query.emplace(qid, metrics);
    }
    if (overlapping == 0) throw DataError("run and qrels share no queries");
    report.query_count = report.per_query.size();
    if (report.query_count > 0) {
        const double n = static_cast<double>(report.query_count);
        report.mean.map /= n;
        report.mean.ndcg /= n;
        report.mean.p5 /= n;
        report.mean.p10 /= n;
        report.mean.r10 /= n;
        report.mean.rel_ret_count /= n;
        report.mean.rel_ret_frac /= n;
    }
    return report;
}

}  // namespace dsrec
