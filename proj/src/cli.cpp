#include "dsrec/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsrec/errors.hpp"
#include "dsrec/pipeline.hpp"
#include "dsrec/serve.hpp"
#include "dsrec/version.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

struct CliState {
    std::string config_path;
    PipelineConfig config;

    // flag storage; only applied when the flag was actually given
    std::string publications, datasets, translations, embeddings, clicks, candidates;
    std::string out_dir, index_path, run_path, tag;
    double k1 = 0, b = 0, topic_boost = 0, abstract_boost = 0, title_boost = 0;
    std::size_t top_k = 0;
    std::uint64_t seed = 0, sessions = 0;
    std::size_t page_size = 0;
    double target_ctr = 0;
};

void apply_family_boost(QueryConfig& query, const std::string& family, double boost) {
    for (auto& [field, value] : query.boosts) {
        if (field.rfind(family, 0) == 0 || (family == "topic" && field.rfind("ext_topic", 0) == 0)) {
            value = boost;
        }
    }
}

// Flags win over the config file; the config file wins over defaults.
void finalize_config(const CLI::App& cmd, CliState& state) {
    if (!state.config_path.empty()) state.config = load_pipeline_config(state.config_path);
    const auto given = [&](const std::string& flag) {
        const CLI::Option* option = cmd.get_option_no_throw(flag);
        return option != nullptr && option->count() > 0;
    };
    if (given("--publications")) state.config.publications_path = state.publications;
    if (given("--datasets")) state.config.datasets_path = state.datasets;
    if (given("--translations")) state.config.translations_path = state.translations;
    if (given("--embeddings")) state.config.embeddings_path = state.embeddings;
    if (given("--clicks")) state.config.clicks_path = state.clicks;
    if (given("--candidates")) state.config.candidates_path = state.candidates;
    if (given("--out-dir")) state.config.out_dir = state.out_dir;
    if (given("--index")) state.config.index_path = state.index_path;
    if (given("--run")) state.config.run_path = state.run_path;
    if (given("--tag")) state.config.run_tag = state.tag;
    if (given("--k1")) state.config.bm25.k1 = state.k1;
    if (given("--b")) state.config.bm25.b = state.b;
    if (given("--top-k")) state.config.top_k = state.top_k;
    if (given("--title-boost")) apply_family_boost(state.config.query, "title", state.title_boost);
    if (given("--abstract-boost")) {
        apply_family_boost(state.config.query, "abstract", state.abstract_boost);
    }
    if (given("--topic-boost")) apply_family_boost(state.config.query, "topic", state.topic_boost);
    if (given("--seed")) state.config.lab.seed = state.seed;
    if (given("--sessions")) state.config.lab.sessions = state.sessions;
    if (given("--page-size")) state.config.lab.page_size = state.page_size;
    if (given("--target-ctr")) state.config.lab.target_ctr = state.target_ctr;
}

void add_common_options(CLI::App& cmd, CliState& state) {
    cmd.add_option("--config", state.config_path, "JSON config file; flags override its keys");
    cmd.add_option("--out-dir", state.out_dir, "directory for pipeline artifacts");
    cmd.add_option("--seed", state.seed, "seed for all randomized steps");
}

int print_report_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read report file: " + path);
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_discarded()) throw DataError("report file is not JSON: " + path);
    if (parsed.contains("systems")) {
        LabReport report;
        const auto read_system = [](const json& system, SystemStats& stats) {
            stats.tag = system.value("system", "");
            stats.wins = system.value("win", 0ULL);
            stats.losses = system.value("loss", 0ULL);
            stats.ties = system.value("tie", 0ULL);
            stats.sessions = system.value("sessions", 0ULL);
            stats.impressions = system.value("impressions", 0ULL);
            stats.clicks = system.value("clicks", 0ULL);
            stats.outcome = outcome_ratio(stats.wins, stats.losses);
            stats.ctr = click_through_rate(stats.clicks, stats.impressions);
        };
        read_system(parsed["systems"].at(0), report.a);
        read_system(parsed["systems"].at(1), report.b);
        report.no_click_sessions = parsed.value("no_click_sessions", 0ULL);
        std::cout << format_lab_table(report);
        return 0;
    }
    if (parsed.contains("runs")) {
        // pretest comparison: rebuild the table from the stored means
        PretestReport report;
        for (const auto& row : parsed["runs"]) {
            PretestReport::Row entry;
            entry.name = row.value("name", "");
            const auto& mean = row.at("report").at("mean");
            entry.report.mean.map = mean.value("map", 0.0);
            entry.report.mean.ndcg = mean.value("ndcg", 0.0);
            entry.report.mean.p5 = mean.value("p_5", 0.0);
            entry.report.mean.p10 = mean.value("p_10", 0.0);
            entry.report.mean.r10 = mean.value("r_10", 0.0);
            entry.report.mean.rel_ret_count = mean.value("rel_ret", 0.0);
            entry.report.mean.rel_ret_frac = mean.value("rel_ret_frac", 0.0);
            report.rows.push_back(std::move(entry));
        }
        std::cout << report.table();
        return 0;
    }
    throw DataError("unrecognized report layout in " + path);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"research dataset recommendation pipeline"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CliState state;

    auto* ingest = app.add_subcommand("ingest", "load corpus files and write normalized JSONL");
    add_common_options(*ingest, state);
    ingest->add_option("--publications", state.publications, "publications JSONL");
    ingest->add_option("--datasets", state.datasets, "datasets JSONL");
    ingest->add_option("--translations", state.translations, "translation table JSONL");

    auto* expand = app.add_subcommand("expand-topics", "assign vocabulary topics from titles");
    add_common_options(*expand, state);

    auto* index_cmd = app.add_subcommand("index", "build the inverted dataset index");
    add_common_options(*index_cmd, state);
    index_cmd->add_option("--index", state.index_path, "index output path");
    index_cmd->add_option("--k1", state.k1, "BM25 k1");
    index_cmd->add_option("--b", state.b, "BM25 b");

    auto* recommend = app.add_subcommand("recommend", "precompute recommendations per publication");
    add_common_options(*recommend, state);
    recommend->add_option("--index", state.index_path, "index file");
    recommend->add_option("--run", state.run_path, "run output path");
    recommend->add_option("--tag", state.tag, "run tag");
    recommend->add_option("--top-k", state.top_k, "ranking depth");
    recommend->add_option("--clicks", state.clicks, "round-one click log JSONL");
    recommend->add_option("--embeddings", state.embeddings, "embedding store TSV");
    recommend->add_option("--title-boost", state.title_boost, "boost for the title fields");
    recommend->add_option("--abstract-boost", state.abstract_boost, "boost for the abstract fields");
    recommend->add_option("--topic-boost", state.topic_boost, "boost for the topic fields");
    bool no_rerank = false;
    recommend->add_flag("--no-rerank", no_rerank, "baseline only, skip both re-rankers");

    auto* pretest = app.add_subcommand("pretest", "evaluate runs against pseudo qrels");
    add_common_options(*pretest, state);
    pretest->add_option("--candidates", state.candidates, "head-query candidates JSONL");
    std::vector<std::string> pretest_runs;
    pretest->add_option("runs", pretest_runs, "run files to compare")->expected(-1);
    std::string pretest_json_out;
    pretest->add_option("--json", pretest_json_out, "also write the report as JSON");

    auto* simulate = app.add_subcommand("simulate", "interleaved lab simulation of two runs");
    add_common_options(*simulate, state);
    std::string sim_run_a, sim_run_b;
    simulate->add_option("run_a", sim_run_a, "experimental run file")->required();
    simulate->add_option("run_b", sim_run_b, "baseline run file")->required();
    simulate->add_option("--sessions", state.sessions, "number of simulated sessions");
    simulate->add_option("--page-size", state.page_size, "interleaved page size");
    simulate->add_option("--target-ctr", state.target_ctr, "overall click-through rate");

    auto* report = app.add_subcommand("report", "pretty-print a saved JSON report");
    std::string report_path;
    report->add_option("file", report_path, "lab or pretest report JSON")->required();

    auto* serve = app.add_subcommand("serve", "read-only recommendation endpoint");
    add_common_options(*serve, state);
    serve->add_option("--run", state.run_path, "precomputed run file");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "bind port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (ingest->parsed()) {
            finalize_config(*ingest, state);
            const IngestSummary summary = cmd_ingest(state.config);
            std::cout << "publications: " << summary.publications << " loaded, "
                      << summary.publication_rejections.size() << " rejected\n"
                      << "datasets: " << summary.datasets << " loaded, "
                      << summary.dataset_rejections.size() << " rejected\n"
                      << "translations applied: " << summary.translations.applied << "\n";
            return 0;
        }
        if (expand->parsed()) {
            finalize_config(*expand, state);
            const ExpansionReport result = cmd_expand_topics(state.config);
            std::cout << "assigned topics: " << result.assigned_de << " de, "
                      << result.assigned_en << " en\n";
            return 0;
        }
        if (index_cmd->parsed()) {
            finalize_config(*index_cmd, state);
            const IndexSummary summary = cmd_index(state.config);
            std::cout << "indexed " << summary.documents << " datasets across "
                      << summary.fields << " fields\n";
            return 0;
        }
        if (recommend->parsed()) {
            finalize_config(*recommend, state);
            const RecommendSummary summary = cmd_recommend(state.config, !no_rerank);
            std::cout << "queries: " << summary.queries << " (" << summary.empty_queries
                      << " empty)";
            if (summary.reranked) {
                std::cout << ", re-ranked (" << summary.missing_seed_warnings
                          << " seeds without embedding)";
            }
            if (summary.click_log_rejections > 0) {
                std::cout << ", " << summary.click_log_rejections << " click log lines rejected";
            }
            std::cout << "\n";
            return 0;
        }
        if (pretest->parsed()) {
            finalize_config(*pretest, state);
            if (pretest_runs.empty()) throw CLI::ValidationError("pretest", "no run files given");
            std::vector<std::pair<std::string, std::string>> named;
            for (const auto& path : pretest_runs) named.emplace_back(path, path);
            const PretestReport result = cmd_pretest(named, state.config.candidates_path);
            std::cout << result.table();
            if (!pretest_json_out.empty()) {
                std::ofstream out(pretest_json_out, std::ios::binary);
                if (!out) throw DataError("cannot write report: " + pretest_json_out);
                out << to_json(result).dump(2) << "\n";
            }
            return 0;
        }
        if (simulate->parsed()) {
            finalize_config(*simulate, state);
            const SimulationResult result = cmd_simulate(state.config, sim_run_a, sim_run_b);
            std::cout << format_lab_table(result.report);
            return 0;
        }
        if (report->parsed()) {
            return print_report_file(report_path);
        }
        if (serve->parsed()) {
            finalize_config(*serve, state);
            RecommendationService service{read_trec_run(state.config.resolved_run_path())};
            std::cout << "serving on " << host << ":" << port << "\n";
            if (!service.listen(host, port)) {
                std::cerr << "failed to bind " << host << ":" << port << "\n";
                return 3;
            }
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}

}  // namespace dsrec
