#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dsrec/corpus.hpp"
#include "dsrec/eval.hpp"
#include "dsrec/index.hpp"
#include "dsrec/lab.hpp"
#include "dsrec/query.hpp"
#include "dsrec/rerank.hpp"

namespace dsrec {

/// Everything a full pipeline invocation needs. Loadable from a JSON config
/// file; the CLI overrides individual keys with flags.
struct PipelineConfig {
    // inputs
    std::string publications_path;
    std::string datasets_path;
    std::string translations_path;  // optional
    std::string embeddings_path;    // optional
    std::string clicks_path;        // optional
    std::string candidates_path;    // pretest input

    // artifacts
    std::string out_dir = ".";
    std::string index_path;  // default <out_dir>/index.json
    std::string run_path;    // default <out_dir>/run.trec
    std::string run_tag = "dsrec";

    Bm25Params bm25;
    QueryConfig query = default_query_config();
    std::size_t top_k = 1000;
    RerankConfig rerank;
    LabConfig lab;

    std::string normalized_publications() const { return out_dir + "/publications.jsonl"; }
    std::string normalized_datasets() const { return out_dir + "/datasets.jsonl"; }
    std::string resolved_index_path() const {
        return index_path.empty() ? out_dir + "/index.json" : index_path;
    }
    std::string resolved_run_path() const {
        return run_path.empty() ? out_dir + "/run.trec" : run_path;
    }
};

PipelineConfig load_pipeline_config(const std::string& path);

struct IngestSummary {
    std::size_t publications = 0;
    std::size_t datasets = 0;
    std::vector<Rejection> publication_rejections;
    std::vector<Rejection> dataset_rejections;
    std::vector<Rejection> translation_rejections;
    TranslationReport translations;
};

nlohmann::json to_json(const IngestSummary& summary);

/// Loads raw corpus files, applies the translation table to the publications
/// when configured, and writes normalized JSONL plus an ingest report into
/// out_dir.
IngestSummary cmd_ingest(const PipelineConfig& config);

/// Reads the normalized corpus, builds the topic vocabulary, expands dataset
/// topics in place and writes the updated datasets and the expansion report.
ExpansionReport cmd_expand_topics(const PipelineConfig& config);

struct IndexSummary {
    std::size_t documents = 0;
    std::size_t fields = 0;
};

/// Builds and persists the inverted index from the normalized datasets.
IndexSummary cmd_index(const PipelineConfig& config);

struct RecommendSummary {
    std::size_t queries = 0;
    std::size_t empty_queries = 0;
    std::size_t missing_seed_warnings = 0;
    std::size_t click_log_rejections = 0;
    bool reranked = false;
};

/// Precomputes one ranking per publication and optionally applies the click
/// and embedding re-rankers, then writes the TREC run file.
RecommendSummary cmd_recommend(const PipelineConfig& config, bool rerank_enabled);

struct PretestReport {
    struct Row {
        std::string name;
        MetricReport report;
    };
    std::vector<Row> rows;

    /// Aligned comparison table: one row per run, mean metrics as columns.
    std::string table() const;
};

nlohmann::json to_json(const PretestReport& report);

/// Evaluates each run file against pseudo qrels built from the candidates
/// file (live-system scores as gains).
PretestReport cmd_pretest(const std::vector<std::pair<std::string, std::string>>& runs,
                          const std::string& candidates_path);

/// Interleaves two run files, simulates clicked sessions and writes the lab
/// report (JSON + text), the session log (JSONL) and the position histogram
/// into out_dir.
SimulationResult cmd_simulate(const PipelineConfig& config, const std::string& run_a_path,
                              const std::string& run_b_path);

/// One session per line: {"session","credit","clicks":[...]}.
std::string format_session_log(const std::vector<SessionOutcome>& outcomes);

}  // namespace dsrec
