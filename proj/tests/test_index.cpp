#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dsrec/errors.hpp"
#include "dsrec/index.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dsrec;
using dsrec::test::TempDir;

namespace {

DatasetRecord doc(std::string id, std::string title) {
    DatasetRecord record;
    record.id = std::move(id);
    record.title = std::move(title);
    return record;
}

FieldedQuery one_clause(std::string field, double boost, std::vector<std::string> terms) {
    FieldedQuery query;
    query.seed_id = "q";
    query.clauses.push_back({std::move(field), boost, std::move(terms)});
    return query;
}

}  // namespace

TEST_CASE("build_index counts term frequencies and field lengths") {
    const auto index =
        InvertedIndex::build({doc("d1", "wahl wahl")}, default_field_schema(), Bm25Params{});
    const auto& stats = index.field_stats("title");
    REQUIRE(stats.postings.count("wahl") == 1);
    CHECK(stats.postings.at("wahl") ==
          std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 2}});
    CHECK(stats.lengths == std::vector<std::uint32_t>{2});
    CHECK(stats.doc_count == 1);
    CHECK(stats.avg_length() == 2.0);
}

TEST_CASE("empty corpus searches to an empty ranking") {
    const auto index = InvertedIndex::build({}, default_field_schema(), Bm25Params{});
    CHECK(index.search(one_clause("title", 1.0, {"wahl"}), 10).empty());
}

TEST_CASE("duplicate dataset ids are fatal at build") {
    CHECK_THROWS_AS((void)InvertedIndex::build({doc("d1", "a"), doc("d1", "b")},
                                               default_field_schema(), Bm25Params{}),
                    DataError);
}

TEST_CASE("bm25 parameter ranges are enforced") {
    CHECK_THROWS_AS(
        (void)InvertedIndex::build({doc("d1", "a")}, default_field_schema(), Bm25Params{-0.1, 0.5}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)InvertedIndex::build({doc("d1", "a")}, default_field_schema(), Bm25Params{1.2, 1.5}),
        std::invalid_argument);
    CHECK_NOTHROW(Bm25Params{0.0, 0.0}.validate());
    CHECK_NOTHROW(Bm25Params{}.validate());
}

TEST_CASE("bm25 term score matches the hand-evaluated single-document case") {
    const auto index =
        InvertedIndex::build({doc("d1", "wahl")}, default_field_schema(), Bm25Params{});
    // tf=1, len=avglen=1, N=1, df=1: idf = ln(4/3), saturation part = 1.
    const double expected = std::log(4.0 / 3.0);
    CHECK(index.term_score("title", "wahl", "d1") == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.2876820724517809).epsilon(1e-12));
}

TEST_CASE("bm25 term score is zero for absent terms") {
    const auto index =
        InvertedIndex::build({doc("d1", "wahl")}, default_field_schema(), Bm25Params{});
    CHECK(index.term_score("title", "studie", "d1") == 0.0);
}

TEST_CASE("bm25 errors on unknown field or document") {
    const auto index =
        InvertedIndex::build({doc("d1", "wahl")}, default_field_schema(), Bm25Params{});
    CHECK_THROWS_AS((void)index.term_score("body", "wahl", "d1"), std::invalid_argument);
    CHECK_THROWS_AS((void)index.term_score("title", "wahl", "d9"), std::invalid_argument);
}

TEST_CASE("bm25 score never decreases with term frequency at fixed statistics") {
    // both docs have title length 4; "wahl" occurs 2x in d1 and 3x in d2
    const auto index = InvertedIndex::build(
        {doc("d1", "wahl wahl studie daten"), doc("d2", "wahl wahl wahl daten")},
        default_field_schema(), Bm25Params{});
    CHECK(index.term_score("title", "wahl", "d2") >= index.term_score("title", "wahl", "d1"));
}

TEST_CASE("search scores the single-document corpus like the hand oracle") {
    const auto index =
        InvertedIndex::build({doc("d1", "wahl")}, default_field_schema(), Bm25Params{});
    const auto ranking = index.search(one_clause("title", 1.0, {"wahl"}), 10);
    REQUIRE(ranking.size() == 1);
    CHECK(ranking[0].id == "d1");
    CHECK(ranking[0].score == doctest::Approx(0.2876820724517809).epsilon(1e-12));
}

TEST_CASE("zero boosts produce an empty ranking") {
    const auto index = InvertedIndex::build({doc("d1", "wahl"), doc("d2", "wahl studie")},
                                            default_field_schema(), Bm25Params{});
    FieldedQuery query;
    query.clauses.push_back({"title", 0.0, {"wahl"}});
    query.clauses.push_back({"abstract", 0.0, {"studie"}});
    CHECK(index.search(query, 10).empty());
}

TEST_CASE("empty query yields an empty ranking") {
    const auto index =
        InvertedIndex::build({doc("d1", "wahl")}, default_field_schema(), Bm25Params{});
    CHECK(index.search(FieldedQuery{}, 10).empty());
}

namespace {

// Random corpus over a small vocabulary, several fields populated.
std::vector<DatasetRecord> random_corpus(Rng& rng, std::size_t n_docs) {
    const std::vector<std::string> vocab = {"alpha", "beta",  "gamma", "delta", "epsilon",
                                            "zeta",  "eta",   "theta", "iota",  "kappa"};
    std::vector<DatasetRecord> docs;
    for (std::size_t i = 0; i < n_docs; ++i) {
        DatasetRecord record;
        record.id = "d" + std::to_string(100 + i);
        const auto text = [&](std::size_t max_len) {
            std::string out;
            const std::size_t n = rng.next_below(max_len + 1);
            for (std::size_t k = 0; k < n; ++k) {
                if (!out.empty()) out += ' ';
                out += vocab[rng.next_below(vocab.size())];
            }
            return out;
        };
        if (rng.next_below(4) != 0) record.title = text(6);
        if (rng.next_below(2) == 0) record.title_de = text(5);
        if (rng.next_below(2) == 0) record.title_en = text(5);
        if (rng.next_below(2) == 0) record.abstract = text(12);
        if (rng.next_below(3) == 0) record.abstract_en = text(10);
        const std::size_t topics = rng.next_below(3);
        for (std::size_t t = 0; t < topics; ++t) {
            record.topics.push_back(vocab[rng.next_below(vocab.size())]);
        }
        if (rng.next_below(3) == 0) record.ext_topic_de.push_back(vocab[rng.next_below(10)]);
        docs.push_back(std::move(record));
    }
    return docs;
}

FieldedQuery random_query(Rng& rng) {
    const std::vector<std::string> vocab = {"alpha", "beta",  "gamma", "delta", "epsilon",
                                            "zeta",  "eta",   "theta", "iota",  "kappa",
                                            "unseen"};
    const std::vector<std::string> fields = {"title",       "title_de",    "title_en",
                                             "abstract",    "abstract_en", "topic",
                                             "topic_en",    "ext_topic_de"};
    FieldedQuery query;
    query.seed_id = "q";
    const std::size_t n_clauses = 1 + rng.next_below(4);
    for (std::size_t c = 0; c < n_clauses; ++c) {
        QueryClause clause;
        clause.field = fields[rng.next_below(fields.size())];
        clause.boost = static_cast<double>(rng.next_below(11)) / 10.0;
        const std::size_t n_terms = 1 + rng.next_below(5);
        for (std::size_t t = 0; t < n_terms; ++t) {
            clause.terms.push_back(vocab[rng.next_below(vocab.size())]);
        }
        query.clauses.push_back(std::move(clause));
    }
    return query;
}

}  // namespace

TEST_CASE("search equals the exhaustive oracle on random corpora") {
    Rng rng(4242);
    for (int round = 0; round < 30; ++round) {
        const auto docs = random_corpus(rng, 1 + rng.next_below(20));
        const auto index = InvertedIndex::build(docs, default_field_schema(), Bm25Params{});
        const auto query = random_query(rng);
        const auto got = index.search(query, 50);
        const auto expected =
            test::oracle_search(docs, default_field_schema(), Bm25Params{}, query, 50);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].id == expected[i].id);
            CHECK(got[i].score == doctest::Approx(expected[i].score).epsilon(1e-9));
        }
    }
}

TEST_CASE("scaling all boosts scales scores and keeps the order") {
    Rng rng(99);
    const auto docs = random_corpus(rng, 15);
    const auto index = InvertedIndex::build(docs, default_field_schema(), Bm25Params{});
    auto query = random_query(rng);
    for (auto& clause : query.clauses) clause.boost = 0.5;
    const auto base = index.search(query, 100);
    auto scaled_query = query;
    for (auto& clause : scaled_query.clauses) clause.boost *= 2.0;
    const auto scaled = index.search(scaled_query, 100);
    REQUIRE(base.size() == scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].id == scaled[i].id);
        CHECK(scaled[i].score == doctest::Approx(2.0 * base[i].score).epsilon(1e-12));
    }
}

TEST_CASE("adding a term to a clause never decreases any score") {
    Rng rng(123);
    const auto docs = random_corpus(rng, 20);
    const auto index = InvertedIndex::build(docs, default_field_schema(), Bm25Params{});
    FieldedQuery query = one_clause("title", 1.0, {"alpha", "beta"});
    const auto before = index.search(query, 100);
    query.clauses[0].terms.push_back("gamma");
    const auto after = index.search(query, 100);
    std::map<std::string, double> before_scores, after_scores;
    for (const auto& entry : before) before_scores[entry.id] = entry.score;
    for (const auto& entry : after) after_scores[entry.id] = entry.score;
    for (const auto& [id, score] : before_scores) {
        CHECK(after_scores.at(id) >= score - 1e-12);
    }
}

TEST_CASE("index build is independent of insertion order") {
    Rng rng(7);
    auto docs = random_corpus(rng, 25);
    const auto index_sorted = InvertedIndex::build(docs, default_field_schema(), Bm25Params{});
    std::reverse(docs.begin(), docs.end());
    const auto index_reversed = InvertedIndex::build(docs, default_field_schema(), Bm25Params{});
    const auto query = one_clause("title", 1.0, {"alpha", "gamma", "kappa"});
    const auto a = index_sorted.search(query, 100);
    const auto b = index_reversed.search(query, 100);
    CHECK(a == b);
}

TEST_CASE("index statistics match a brute-force recount") {
    Rng rng(55);
    const auto docs = random_corpus(rng, 20);
    const auto index = InvertedIndex::build(docs, default_field_schema(), Bm25Params{});
    auto sorted_docs = docs;
    std::sort(sorted_docs.begin(), sorted_docs.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& [field, lang] : default_field_schema().fields) {
        const Analyzer analyzer = Analyzer::for_language(lang);
        std::uint32_t doc_count = 0;
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < sorted_docs.size(); ++i) {
            const auto tokens = analyzer.analyze(dataset_field_text(sorted_docs[i], field));
            const auto& stats = index.field_stats(field);
            CHECK(stats.lengths[i] == tokens.size());
            if (!tokens.empty()) {
                ++doc_count;
                total += tokens.size();
            }
        }
        CHECK(index.field_stats(field).doc_count == doc_count);
        CHECK(index.field_stats(field).total_length == total);

        // postings term frequencies per document sum to the stored length
        const auto& stats = index.field_stats(field);
        std::vector<std::uint64_t> tf_sums(sorted_docs.size(), 0);
        for (const auto& [term, postings] : stats.postings) {
            for (const auto& [ordinal, tf] : postings) tf_sums[ordinal] += tf;
        }
        for (std::size_t i = 0; i < sorted_docs.size(); ++i) {
            CHECK(tf_sums[i] == stats.lengths[i]);
        }
    }
}

TEST_CASE("index persists and reloads with identical behavior") {
    Rng rng(31);
    const auto docs = random_corpus(rng, 15);
    const auto index = InvertedIndex::build(docs, default_field_schema(), Bm25Params{1.4, 0.6});
    TempDir dir;
    index.save(dir.path("index.json"));
    const auto reloaded = InvertedIndex::load(dir.path("index.json"));
    CHECK(reloaded.doc_count() == index.doc_count());
    CHECK(reloaded.params().k1 == index.params().k1);
    const auto query = one_clause("title", 0.8, {"alpha", "beta", "unseen"});
    CHECK(reloaded.search(query, 50) == index.search(query, 50));
    // deterministic bytes on re-save
    reloaded.save(dir.path("index2.json"));
    CHECK(test::read_file(dir.path("index.json")) == test::read_file(dir.path("index2.json")));
}

TEST_CASE("loading a non-index file fails cleanly") {
    TempDir dir;
    test::write_file(dir.path("bogus.json"), "{\"format\":\"other\"}");
    CHECK_THROWS_AS((void)InvertedIndex::load(dir.path("bogus.json")), DataError);
}

TEST_CASE("dataset_field_text splits topics by attributed language") {
    DatasetRecord record;
    record.id = "d1";
    record.topics = {"Politik und Gesellschaft", "Elections"};
    CHECK(dataset_field_text(record, "topic") == "Politik und Gesellschaft Elections");
    CHECK(dataset_field_text(record, "topic_de") == "Politik und Gesellschaft");
    CHECK(dataset_field_text(record, "topic_en") == "Elections");
}
