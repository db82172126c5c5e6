#include "dsrec/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dsrec/errors.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

void sort_ranking(RankedList& ranking) {
    std::sort(ranking.begin(), ranking.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
}

}  // namespace

std::unordered_set<std::string> ClickLog::clicked_for(const std::string& qid) const {
    std::unordered_set<std::string> clicked;
    for (const auto& event : events) {
        if (event.qid == qid) clicked.insert(event.doc_id);
    }
    return clicked;
}

ClickLogLoadResult load_click_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read click log: " + path);
    ClickLogLoadResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json parsed = json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object()) {
            result.rejections.push_back({line_no, "malformed JSON object"});
            continue;
        }
        ClickEvent event;
        if (!parsed.contains("session") || !parsed["session"].is_string() ||
            !parsed.contains("qid") || !parsed["qid"].is_string() ||
            !parsed.contains("docid") || !parsed["docid"].is_string() ||
            !parsed.contains("position") || !parsed["position"].is_number_integer()) {
            result.rejections.push_back({line_no, "missing session/qid/docid/position"});
            continue;
        }
        event.session = parsed["session"].get<std::string>();
        event.qid = parsed["qid"].get<std::string>();
        event.doc_id = parsed["docid"].get<std::string>();
        const auto position = parsed["position"].get<std::int64_t>();
        if (position < 1 || event.session.empty() || event.qid.empty() || event.doc_id.empty()) {
            result.rejections.push_back({line_no, "position must be >= 1 and ids non-empty"});
            continue;
        }
        event.position = static_cast<std::size_t>(position);
        if (parsed.contains("ts") && parsed["ts"].is_number_integer()) {
            event.timestamp = parsed["ts"].get<std::int64_t>();
        }
        result.log.events.push_back(std::move(event));
    }
    return result;
}

void EmbeddingStore::insert(const std::string& id, std::vector<double> vector) {
    if (vector.empty()) throw std::invalid_argument("embedding vector must be non-empty");
    if (dim == 0) dim = vector.size();
    if (vector.size() != dim) {
        throw DataError("embedding dimension mismatch for id '" + id + "': expected " +
                        std::to_string(dim) + ", got " + std::to_string(vector.size()));
    }
    vectors[id] = std::move(vector);
}

EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read embedding store: " + path);
    EmbeddingStore store;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!have_header) {
            if (line.rfind("#dim\t", 0) != 0) {
                throw DataError("embedding store missing '#dim' header: " + path);
            }
            store.dim = std::strtoul(line.c_str() + 5, nullptr, 10);
            if (store.dim == 0) throw DataError("embedding store declares dimension 0: " + path);
            have_header = true;
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("bad embedding line " + std::to_string(line_no) + " in " + path);
        }
        std::vector<double> vector;
        vector.reserve(store.dim);
        const char* cursor = line.c_str() + tab + 1;
        const char* end = line.c_str() + line.size();
        while (cursor < end) {
            double value = 0.0;
            auto [next, ec] = std::from_chars(cursor, end, value);
            if (ec != std::errc()) {
                throw DataError("bad embedding value at line " + std::to_string(line_no) + " in " +
                                path);
            }
            vector.push_back(value);
            cursor = next < end && *next == ',' ? next + 1 : next;
            if (next == end) break;
        }
        if (vector.size() != store.dim) {
            throw DataError("embedding dimension mismatch at line " + std::to_string(line_no) +
                            " in " + path);
        }
        store.vectors[line.substr(0, tab)] = std::move(vector);
    }
    if (!have_header) throw DataError("embedding store is empty: " + path);
    return store;
}

void save_embeddings(const EmbeddingStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write embedding store: " + path);
    out << "#dim\t" << store.dim << '\n';
    std::vector<std::string> ids;
    ids.reserve(store.vectors.size());
    for (const auto& [id, _] : store.vectors) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    char buf[64];
    for (const auto& id : ids) {
        out << id << '\t';
        const auto& vector = store.vectors.at(id);
        for (std::size_t i = 0; i < vector.size(); ++i) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), vector[i]);
            out.write(buf, ptr - buf);
            if (i + 1 < vector.size()) out << ',';
        }
        out << '\n';
    }
}

void RerankConfig::validate() const {
    if (!(click_boost > embedding_boost && embedding_boost > 0.0)) {
        throw std::invalid_argument("rerank boosts must satisfy click > embedding > 0");
    }
    if (knn_k == 0) throw std::invalid_argument("knn_k must be >= 1");
}

RankedList click_boost(RankedList ranking, const ClickLog& log, const std::string& qid,
                       const RerankConfig& config) {
    const auto clicked = log.clicked_for(qid);
    if (clicked.empty()) return ranking;
    for (auto& entry : ranking) {
        if (clicked.count(entry.id) > 0) entry.score += config.click_boost;
    }
    sort_ranking(ranking);
    return ranking;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("euclidean_distance: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

std::vector<std::string> knn_neighbors(const EmbeddingStore& store, const std::string& seed_id,
                                       std::size_t k, const std::vector<std::string>& candidates) {
    auto seed_it = store.vectors.find(seed_id);
    if (seed_it == store.vectors.end()) {
        throw std::invalid_argument("knn_neighbors: seed id not in store: " + seed_id);
    }
    std::vector<std::pair<double, std::string>> distances;
    distances.reserve(candidates.size());
    for (const auto& candidate : candidates) {
        auto it = store.vectors.find(candidate);
        if (it == store.vectors.end()) continue;
        distances.emplace_back(euclidean_distance(seed_it->second, it->second), candidate);
    }
    std::sort(distances.begin(), distances.end());
    if (distances.size() > k) distances.resize(k);
    std::vector<std::string> neighbors;
    neighbors.reserve(distances.size());
    for (auto& [_, id] : distances) neighbors.push_back(std::move(id));
    return neighbors;
}

RankedList embedding_boost(RankedList ranking, const EmbeddingStore& store,
                           const std::string& seed_id, const RerankConfig& config,
                           std::size_t* missing_seed_warnings) {
    if (!store.contains(seed_id)) {
        if (missing_seed_warnings != nullptr) ++*missing_seed_warnings;
        return ranking;
    }
    std::vector<std::string> candidates;
    candidates.reserve(ranking.size());
    for (const auto& entry : ranking) candidates.push_back(entry.id);
    const auto neighbors = knn_neighbors(store, seed_id, config.knn_k, candidates);
    const std::unordered_set<std::string> matched(neighbors.begin(), neighbors.end());
    for (auto& entry : ranking) {
        if (matched.count(entry.id) > 0) entry.score += config.embedding_boost;
    }
    sort_ranking(ranking);
    return ranking;
}

RerankResult rerank_pipeline(Run run, const ClickLog& log, const EmbeddingStore& store,
                             const RerankConfig& config) {
    config.validate();
    RerankResult result;
    for (auto& [qid, ranking] : run.rankings) {
        ranking = click_boost(std::move(ranking), log, qid, config);
        ranking = embedding_boost(std::move(ranking), store, qid, config,
                                  &result.missing_seed_warnings);
    }
    result.run = std::move(run);
    return result;
}

}  // namespace dsrec
