#include "dsrec/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dsrec/errors.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

void write_json(const std::string& path, const json& value) {
    write_text(path, value.dump(2) + "\n");
}

void ensure_out_dir(const PipelineConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw DataError("cannot create output directory: " + config.out_dir);
}

json rejections_json(const std::vector<Rejection>& rejections) { return to_json(rejections); }

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read config file: " + path);
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw DataError("config file is not a JSON object: " + path);
    }
    PipelineConfig config;
    const auto str = [&](const char* key, std::string& out) {
        if (parsed.contains(key) && parsed[key].is_string()) out = parsed[key].get<std::string>();
    };
    str("publications", config.publications_path);
    str("datasets", config.datasets_path);
    str("translations", config.translations_path);
    str("embeddings", config.embeddings_path);
    str("clicks", config.clicks_path);
    str("candidates", config.candidates_path);
    str("out_dir", config.out_dir);
    str("index", config.index_path);
    str("run", config.run_path);
    str("tag", config.run_tag);
    if (parsed.contains("bm25")) {
        const auto& bm25 = parsed["bm25"];
        config.bm25.k1 = bm25.value("k1", config.bm25.k1);
        config.bm25.b = bm25.value("b", config.bm25.b);
    }
    if (parsed.contains("query")) {
        const auto& query = parsed["query"];
        if (query.contains("source_fields")) {
            config.query.source_fields = query["source_fields"].get<std::vector<std::string>>();
        }
        if (query.contains("boosts")) {
            for (const auto& [field, boost] : query["boosts"].items()) {
                config.query.boosts[field] = boost.get<double>();
            }
        }
        config.query.topic_concat = query.value("topic_concat", config.query.topic_concat);
        config.top_k = query.value("top_k", config.top_k);
    }
    if (parsed.contains("rerank")) {
        const auto& rerank = parsed["rerank"];
        config.rerank.click_boost = rerank.value("click_boost", config.rerank.click_boost);
        config.rerank.embedding_boost =
            rerank.value("embedding_boost", config.rerank.embedding_boost);
        config.rerank.knn_k = rerank.value("knn_k", config.rerank.knn_k);
    }
    if (parsed.contains("lab")) {
        const auto& lab = parsed["lab"];
        config.lab.page_size = lab.value("page_size", config.lab.page_size);
        config.lab.seed = lab.value("seed", config.lab.seed);
        config.lab.sessions = lab.value("sessions", config.lab.sessions);
        config.lab.target_ctr = lab.value("target_ctr", config.lab.target_ctr);
        if (lab.contains("position_clicks")) {
            config.lab.position_clicks = lab["position_clicks"].get<std::vector<std::uint64_t>>();
        }
    }
    return config;
}

nlohmann::json to_json(const IngestSummary& summary) {
    return json{
        {"publications",
         {{"loaded", summary.publications},
          {"rejected", summary.publication_rejections.size()},
          {"rejections", rejections_json(summary.publication_rejections)}}},
        {"datasets",
         {{"loaded", summary.datasets},
          {"rejected", summary.dataset_rejections.size()},
          {"rejections", rejections_json(summary.dataset_rejections)}}},
        {"translations",
         {{"applied", summary.translations.applied},
          {"already_present", summary.translations.already_present},
          {"skipped_unknown_id", summary.translations.skipped_unknown_id},
          {"rejected", summary.translations.rejected},
          {"rejections", rejections_json(summary.translation_rejections)}}},
    };
}

IngestSummary cmd_ingest(const PipelineConfig& config) {
    ensure_out_dir(config);
    IngestSummary summary;
    auto publications = load_publications(config.publications_path);
    auto datasets = load_datasets(config.datasets_path);
    summary.publication_rejections = std::move(publications.rejections);
    summary.dataset_rejections = std::move(datasets.rejections);
    if (!config.translations_path.empty()) {
        auto translations = load_translations(config.translations_path);
        summary.translation_rejections = std::move(translations.rejections);
        summary.translations = apply_translations(publications.records, translations.table);
    }
    summary.publications = publications.records.size();
    summary.datasets = datasets.records.size();
    save_publications(publications.records, config.normalized_publications());
    save_datasets(datasets.records, config.normalized_datasets());
    write_json(config.out_dir + "/ingest_report.json", to_json(summary));
    return summary;
}

ExpansionReport cmd_expand_topics(const PipelineConfig& config) {
    ensure_out_dir(config);
    auto publications = load_publications(config.normalized_publications());
    auto datasets = load_datasets(config.normalized_datasets());
    const TopicVocabulary vocabulary =
        build_topic_vocabulary(publications.records, datasets.records);
    ExpansionReport report = expand_topics(datasets.records, vocabulary);
    save_datasets(datasets.records, config.normalized_datasets());
    write_json(config.out_dir + "/expansion_report.json", to_json(report));
    return report;
}

IndexSummary cmd_index(const PipelineConfig& config) {
    ensure_out_dir(config);
    auto datasets = load_datasets(config.normalized_datasets());
    const InvertedIndex index =
        InvertedIndex::build(std::move(datasets.records), default_field_schema(), config.bm25);
    index.save(config.resolved_index_path());
    return {index.doc_count(), index.schema().fields.size()};
}

RecommendSummary cmd_recommend(const PipelineConfig& config, bool rerank_enabled) {
    ensure_out_dir(config);
    auto publications = load_publications(config.normalized_publications());
    const InvertedIndex index = InvertedIndex::load(config.resolved_index_path());
    PrecomputeResult precomputed =
        precompute_all(index, publications.records, config.query, config.top_k);
    RecommendSummary summary;
    summary.queries = precomputed.run.rankings.size();
    summary.empty_queries = precomputed.empty_queries;
    Run run = std::move(precomputed.run);
    if (rerank_enabled) {
        ClickLog log;
        if (!config.clicks_path.empty()) {
            auto clicks = load_click_log(config.clicks_path);
            summary.click_log_rejections = clicks.rejections.size();
            log = std::move(clicks.log);
        }
        EmbeddingStore store;
        if (!config.embeddings_path.empty()) store = load_embeddings(config.embeddings_path);
        RerankResult reranked = rerank_pipeline(std::move(run), log, store, config.rerank);
        run = std::move(reranked.run);
        summary.missing_seed_warnings = reranked.missing_seed_warnings;
        summary.reranked = true;
    }
    run.tag = config.run_tag;
    write_trec_run(run, config.resolved_run_path());
    return summary;
}

std::string PretestReport::table() const {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-24s %7s %7s %7s %7s %7s %8s\n", "run", "map", "nDCG",
                  "P@5", "P@10", "R@10", "rel_ret");
    out += buf;
    for (const auto& row : rows) {
        const QueryMetrics& mean = row.report.mean;
        std::snprintf(buf, sizeof(buf), "%-24s %7.4f %7.4f %7.4f %7.4f %7.4f %8.4f\n",
                      row.name.c_str(), mean.map, mean.ndcg, mean.p5, mean.p10, mean.r10,
                      mean.rel_ret_frac);
        out += buf;
    }
    return out;
}

nlohmann::json to_json(const PretestReport& report) {
    json runs = json::array();
    for (const auto& row : report.rows) {
        runs.push_back({{"name", row.name}, {"report", to_json(row.report)}});
    }
    return json{{"runs", runs}};
}

PretestReport cmd_pretest(const std::vector<std::pair<std::string, std::string>>& runs,
                          const std::string& candidates_path) {
    const auto candidates = load_candidates(candidates_path);
    const PseudoQrelsResult pseudo = build_pseudo_qrels(candidates.lists);
    PretestReport report;
    for (const auto& [name, path] : runs) {
        const Run run = read_trec_run(path);
        report.rows.push_back({name, evaluate_run(run, pseudo.qrels)});
    }
    return report;
}

std::string format_session_log(const std::vector<SessionOutcome>& outcomes) {
    std::string out;
    for (const auto& outcome : outcomes) {
        json clicks = json::array();
        for (const auto& click : outcome.clicks) {
            clicks.push_back({{"position", click.position},
                              {"docid", click.doc_id},
                              {"team", click.team == Team::A ? "a" : "b"},
                              {"shared", click.shared}});
        }
        out += json{{"session", outcome.session_id},
                    {"credit", credit_name(outcome.credit)},
                    {"clicks", clicks}}
                   .dump();
        out += '\n';
    }
    return out;
}

SimulationResult cmd_simulate(const PipelineConfig& config, const std::string& run_a_path,
                              const std::string& run_b_path) {
    ensure_out_dir(config);
    const Run run_a = read_trec_run(run_a_path);
    const Run run_b = read_trec_run(run_b_path);
    SimulationResult result = simulate_lab(run_a, run_b, config.lab);
    write_json(config.out_dir + "/lab_report.json", to_json(result.report));
    write_text(config.out_dir + "/lab_report.txt", format_lab_table(result.report));
    write_text(config.out_dir + "/sessions.jsonl", format_session_log(result.outcomes));
    write_json(config.out_dir + "/position_histogram.json", json(result.histogram));
    return result;
}

}  // namespace dsrec
