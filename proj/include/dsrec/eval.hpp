#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsrec/corpus.hpp"
#include "dsrec/ranking.hpp"

namespace dsrec {

/// Graded relevance judgments: (query id, dataset id) -> gain >= 0.
/// Binary metrics treat gain > 0 as relevant.
struct Qrels {
    std::map<std::string, std::map<std::string, double>> gains;  // qid -> doc -> gain

    double gain(const std::string& qid, const std::string& doc_id) const;
    bool relevant(const std::string& qid, const std::string& doc_id) const;
    std::size_t relevant_count(const std::string& qid) const;
    bool has_query(const std::string& qid) const { return gains.count(qid) > 0; }
};

/// TREC qrels format: `qid 0 docid gain`, gain as shortest round-trip decimal.
std::string format_trec_qrels(const Qrels& qrels);
void write_trec_qrels(const Qrels& qrels, const std::string& path);
Qrels read_trec_qrels(const std::string& path);

struct Candidate {
    std::string doc_id;
    double score = 0.0;  // live-system relevance score
};

/// Recommendations the live system produced for one head query.
struct CandidateList {
    std::string qid;
    std::vector<Candidate> candidates;
};

struct CandidatesLoadResult {
    std::vector<CandidateList> lists;
    std::vector<Rejection> rejections;
};

/// JSONL: {"qid": "...", "candidates": [{"id": "...", "score": 1.5}, ...]}.
CandidatesLoadResult load_candidates(const std::string& path);

struct PseudoQrelsResult {
    Qrels qrels;
    std::size_t rejected_negative = 0;  // entries with score < 0
};

/// Live scores become gains directly; duplicates resolve to the maximum and
/// queries with no candidates are omitted.
PseudoQrelsResult build_pseudo_qrels(const std::vector<CandidateList>& lists);

// Per-query metrics. Rankings shorter than k count the tail as misses.
double precision_at_k(const RankedList& ranking, const Qrels& qrels, const std::string& qid,
                      std::size_t k);
double recall_at_k(const RankedList& ranking, const Qrels& qrels, const std::string& qid,
                   std::size_t k);
double average_precision(const RankedList& ranking, const Qrels& qrels, const std::string& qid);
/// Graded DCG over the full ranking with log2(rank+1) discounts, normalized
/// by the ideal ordering; 0 when the ideal DCG is 0.
double ndcg(const RankedList& ranking, const Qrels& qrels, const std::string& qid);
/// Relevant documents retrieved anywhere in the ranking, as a count and as a
/// fraction of the relevant set.
struct RelRet {
    std::size_t count = 0;
    double fraction = 0.0;
};
RelRet rel_ret(const RankedList& ranking, const Qrels& qrels, const std::string& qid);

struct QueryMetrics {
    double map = 0.0;
    double ndcg = 0.0;
    double p5 = 0.0;
    double p10 = 0.0;
    double r10 = 0.0;
    double rel_ret_count = 0.0;
    double rel_ret_frac = 0.0;
};

struct MetricReport {
    std::map<std::string, QueryMetrics> per_query;
    QueryMetrics mean;
    std::size_t query_count = 0;        // queries contributing to the means
    std::size_t skipped_no_relevant = 0;  // judged queries with no relevant doc
};

nlohmann::json to_json(const QueryMetrics& metrics);
nlohmann::json to_json(const MetricReport& report);

/// Evaluates the queries present in both run and qrels; queries without any
/// relevant document are excluded from the means (trec-eval semantics).
/// Throws DataError when run and qrels share no queries.
MetricReport evaluate_run(const Run& run, const Qrels& qrels);

}  // namespace dsrec
