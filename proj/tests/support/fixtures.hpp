#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dsrec/corpus.hpp"
#include "dsrec/rerank.hpp"
#include "dsrec/rng.hpp"

namespace dsrec::test {

/// Scratch directory removed on destruction.
class TempDir {
  public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto unique = std::to_string(
            std::hash<std::string>{}(std::filesystem::current_path().string()) % 100000);
        path_ = std::filesystem::temp_directory_path() /
                ("dsrec_test_" + unique + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name = "") const {
        return name.empty() ? path_.string() : (path_ / name).string();
    }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Deterministic stand-in for a document embedder: id -> fixed pseudo-random
/// vector with components in [-1, 1).
inline std::vector<double> pseudo_embedding(const std::string& id, std::size_t dim,
                                            std::uint64_t seed = 7) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (char c : id) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    Rng rng(h);
    std::vector<double> vec(dim);
    for (auto& component : vec) component = rng.next_double() * 2.0 - 1.0;
    return vec;
}

struct SyntheticCorpus {
    std::vector<PublicationRecord> publications;
    std::vector<DatasetRecord> datasets;
};

inline const std::vector<std::string>& word_pool_de() {
    static const std::vector<std::string> words = {
        "wahl",       "studie",  "politik",       "familie",   "bildung",
        "einkommen",  "arbeit",  "gesellschaft",  "umfrage",   "daten",
        "jugend",     "alter",   "stadt",         "land",      "einstellungen",
        "religion",   "gesundheit", "migration",  "medien",    "vertrauen"};
    return words;
}

inline const std::vector<std::string>& word_pool_en() {
    static const std::vector<std::string> words = {
        "election", "study",  "politics", "family", "education", "income", "work",
        "society",  "survey", "data",     "youth",  "age",       "city",   "rural",
        "attitudes", "religion", "health", "migration", "media",  "trust"};
    return words;
}

inline std::string sentence(Rng& rng, const std::vector<std::string>& pool, std::size_t min_words,
                            std::size_t max_words) {
    const std::size_t n = min_words + rng.next_below(max_words - min_words + 1);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.empty()) out += ' ';
        out += pool[rng.next_below(pool.size())];
    }
    return out;
}

/// Publications and datasets drawing from overlapping multilingual word
/// pools; topics reuse pool words so topic-field boosts have bite.
inline SyntheticCorpus make_synthetic_corpus(std::size_t n_publications, std::size_t n_datasets,
                                             std::uint64_t seed) {
    SyntheticCorpus corpus;
    Rng rng(seed);
    const auto& de = word_pool_de();
    const auto& en = word_pool_en();
    for (std::size_t i = 0; i < n_publications; ++i) {
        PublicationRecord pub;
        pub.id = "p" + std::to_string(1000 + i);
        pub.title = sentence(rng, de, 3, 6);
        if (rng.next_below(3) != 0) pub.title_en = sentence(rng, en, 3, 6);
        if (rng.next_below(2) == 0) pub.abstract = sentence(rng, de, 8, 16);
        const std::size_t topic_count = rng.next_below(3);
        for (std::size_t t = 0; t < topic_count; ++t) {
            pub.topics.push_back(de[rng.next_below(de.size())]);
        }
        switch (rng.next_below(3)) {
            case 0: pub.language = "de"; break;
            case 1: pub.language = "en"; break;
            default: break;
        }
        corpus.publications.push_back(std::move(pub));
    }
    for (std::size_t j = 0; j < n_datasets; ++j) {
        DatasetRecord dataset;
        dataset.id = "d" + std::to_string(1000 + j);
        dataset.title = sentence(rng, de, 3, 7);
        if (rng.next_below(2) == 0) dataset.title_en = sentence(rng, en, 3, 7);
        if (rng.next_below(3) == 0) dataset.abstract = sentence(rng, de, 6, 14);
        const std::size_t topic_count = rng.next_below(4);
        for (std::size_t t = 0; t < topic_count; ++t) {
            const auto& pool = rng.next_bool() ? de : en;
            dataset.topics.push_back(pool[rng.next_below(pool.size())]);
        }
        if (rng.next_below(4) == 0) dataset.data_type = "survey data";
        corpus.datasets.push_back(std::move(dataset));
    }
    return corpus;
}

inline std::string to_jsonl(const std::vector<PublicationRecord>& records) {
    std::string out;
    for (const auto& record : records) out += to_json(record).dump() + "\n";
    return out;
}

inline std::string to_jsonl(const std::vector<DatasetRecord>& records) {
    std::string out;
    for (const auto& record : records) out += to_json(record).dump() + "\n";
    return out;
}

/// Embedding store covering every publication and dataset id of a corpus.
inline EmbeddingStore make_embedding_store(const SyntheticCorpus& corpus, std::size_t dim,
                                           std::uint64_t seed = 7) {
    EmbeddingStore store;
    for (const auto& pub : corpus.publications) {
        store.insert(pub.id, pseudo_embedding(pub.id, dim, seed));
    }
    for (const auto& dataset : corpus.datasets) {
        store.insert(dataset.id, pseudo_embedding(dataset.id, dim, seed));
    }
    return store;
}

}  // namespace dsrec::test
