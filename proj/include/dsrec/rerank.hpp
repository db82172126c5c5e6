#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dsrec/corpus.hpp"
#include "dsrec/ranking.hpp"

namespace dsrec {

struct ClickEvent {
    std::string session;
    std::string qid;     // seed publication id
    std::string doc_id;  // clicked dataset
    std::size_t position = 1;
    std::int64_t timestamp = 0;
};

struct ClickLog {
    std::vector<ClickEvent> events;

    /// Datasets clicked for one query publication.
    std::unordered_set<std::string> clicked_for(const std::string& qid) const;
};

struct ClickLogLoadResult {
    ClickLog log;
    std::vector<Rejection> rejections;
};

/// JSONL: {"session","qid","docid","position","ts"} per line.
ClickLogLoadResult load_click_log(const std::string& path);

/// Fixed-dimension vectors keyed by publication/dataset id.
struct EmbeddingStore {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;

    bool contains(const std::string& id) const { return vectors.count(id) > 0; }
    void insert(const std::string& id, std::vector<double> vector);  // checks dimension
};

/// TSV with a `#dim<TAB>d` header, then `id<TAB>v1,v2,...,vd` per line.
EmbeddingStore load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingStore& store, const std::string& path);

struct RerankConfig {
    double click_boost = 1000.0;
    double embedding_boost = 500.0;
    std::size_t knn_k = 1;

    void validate() const;  // click feedback must dominate: click > embedding > 0
};

/// Adds click_boost to every ranked dataset clicked for this query in round
/// one, then re-sorts by (score desc, id asc). Clicks on datasets outside the
/// ranking are ignored, not injected.
RankedList click_boost(RankedList ranking, const ClickLog& log, const std::string& qid,
                       const RerankConfig& config);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// The k candidates nearest to the seed vector (ties by id); candidates
/// missing from the store are skipped. Throws if the seed is unknown.
std::vector<std::string> knn_neighbors(const EmbeddingStore& store, const std::string& seed_id,
                                       std::size_t k, const std::vector<std::string>& candidates);

/// Adds embedding_boost to the k-NN matches among the ranked datasets.
/// A seed missing from the store leaves the ranking unchanged and bumps
/// `missing_seed_warnings` when a counter is supplied.
RankedList embedding_boost(RankedList ranking, const EmbeddingStore& store,
                           const std::string& seed_id, const RerankConfig& config,
                           std::size_t* missing_seed_warnings = nullptr);

struct RerankResult {
    Run run;
    std::size_t missing_seed_warnings = 0;
};

/// click_boost then embedding_boost per query; never adds or removes docs.
RerankResult rerank_pipeline(Run run, const ClickLog& log, const EmbeddingStore& store,
                             const RerankConfig& config);

}  // namespace dsrec
