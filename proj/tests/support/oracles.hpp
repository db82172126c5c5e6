#pragma once

// Independent definitional implementations used to cross-check the library.
// Nothing here may call into InvertedIndex scoring, the metric suite or the
// re-rankers; only the shared text analysis layer is reused so both routes
// see identical tokens.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dsrec/corpus.hpp"
#include "dsrec/index.hpp"
#include "dsrec/ranking.hpp"
#include "dsrec/rerank.hpp"

namespace dsrec::test {

/// Exhaustive BM25 scorer: recomputes every per-field statistic by scanning
/// the whole collection for every query, then scores every document against
/// every clause by the textbook formula.
inline RankedList oracle_search(const std::vector<DatasetRecord>& datasets,
                                const FieldSchema& schema, const Bm25Params& params,
                                const FieldedQuery& query, std::size_t top_k) {
    // token lists per (doc, field)
    const std::size_t n_docs = datasets.size();
    std::map<std::string, std::vector<std::vector<std::string>>> tokens_by_field;
    for (const auto& [field, lang] : schema.fields) {
        const Analyzer analyzer = Analyzer::for_language(lang);
        auto& per_doc = tokens_by_field[field];
        per_doc.reserve(n_docs);
        for (const auto& dataset : datasets) {
            per_doc.push_back(analyzer.analyze(dataset_field_text(dataset, field)));
        }
    }
    const auto count_of = [](const std::vector<std::string>& tokens, const std::string& term) {
        return static_cast<double>(std::count(tokens.begin(), tokens.end(), term));
    };
    std::vector<double> scores(n_docs, 0.0);
    for (const auto& clause : query.clauses) {
        const auto& per_doc = tokens_by_field.at(clause.field);
        double doc_count = 0.0, total_length = 0.0;
        for (const auto& tokens : per_doc) {
            if (tokens.empty()) continue;
            doc_count += 1.0;
            total_length += static_cast<double>(tokens.size());
        }
        const double avg_length = doc_count == 0.0 ? 0.0 : total_length / doc_count;
        for (std::size_t doc = 0; doc < n_docs; ++doc) {
            double clause_score = 0.0;
            for (const auto& term : clause.terms) {
                const double tf = count_of(per_doc[doc], term);
                if (tf == 0.0) continue;
                double df = 0.0;
                for (const auto& tokens : per_doc) {
                    if (count_of(tokens, term) > 0.0) df += 1.0;
                }
                const double idf = std::log(1.0 + (doc_count - df + 0.5) / (df + 0.5));
                const double length = static_cast<double>(per_doc[doc].size());
                const double denom =
                    tf + params.k1 * (1.0 - params.b + params.b * length / avg_length);
                clause_score += idf * tf * (params.k1 + 1.0) / denom;
            }
            scores[doc] += clause.boost * clause_score;
        }
    }
    RankedList ranking;
    for (std::size_t doc = 0; doc < n_docs; ++doc) {
        if (scores[doc] > 0.0) ranking.push_back({datasets[doc].id, scores[doc]});
    }
    std::sort(ranking.begin(), ranking.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (ranking.size() > top_k) ranking.resize(top_k);
    return ranking;
}

// ---- metric oracle -------------------------------------------------------

using GainMap = std::map<std::string, double>;  // doc -> gain for one query

inline std::set<std::string> oracle_relevant_set(const GainMap& gains) {
    std::set<std::string> relevant;
    for (const auto& [doc, gain] : gains) {
        if (gain > 0.0) relevant.insert(doc);
    }
    return relevant;
}

inline double oracle_precision(const std::vector<std::string>& ranked,
                               const std::set<std::string>& relevant, std::size_t k) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(ranked.size(), k); ++i) {
        hits += relevant.count(ranked[i]);
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

inline double oracle_recall(const std::vector<std::string>& ranked,
                            const std::set<std::string>& relevant, std::size_t k) {
    if (relevant.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(ranked.size(), k); ++i) {
        hits += relevant.count(ranked[i]);
    }
    return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

inline double oracle_average_precision(const std::vector<std::string>& ranked,
                                       const std::set<std::string>& relevant) {
    if (relevant.empty()) return 0.0;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.count(ranked[i]) == 0) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(relevant.size());
}

inline double oracle_ndcg(const std::vector<std::string>& ranked, const GainMap& gains) {
    double dcg = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        auto it = gains.find(ranked[i]);
        if (it != gains.end() && it->second > 0.0) {
            dcg += it->second / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    std::vector<double> ideal;
    for (const auto& [_, gain] : gains) {
        if (gain > 0.0) ideal.push_back(gain);
    }
    std::sort(ideal.rbegin(), ideal.rend());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
    }
    return idcg == 0.0 ? 0.0 : dcg / idcg;
}

inline std::size_t oracle_rel_ret(const std::vector<std::string>& ranked,
                                  const std::set<std::string>& relevant) {
    std::size_t count = 0;
    for (const auto& doc : ranked) count += relevant.count(doc);
    return count;
}

// ---- k-NN oracle ---------------------------------------------------------

inline std::vector<std::string> oracle_knn(const EmbeddingStore& store, const std::string& seed_id,
                                           std::size_t k,
                                           const std::vector<std::string>& candidates) {
    const auto& seed = store.vectors.at(seed_id);
    std::vector<std::pair<double, std::string>> all;
    for (const auto& candidate : candidates) {
        auto it = store.vectors.find(candidate);
        if (it == store.vectors.end()) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < seed.size(); ++i) {
            sum += (seed[i] - it->second[i]) * (seed[i] - it->second[i]);
        }
        all.emplace_back(std::sqrt(sum), candidate);
    }
    std::sort(all.begin(), all.end());
    std::vector<std::string> result;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) result.push_back(all[i].second);
    return result;
}

// ---- topic expansion oracle ------------------------------------------------

struct OracleAssignment {
    std::string dataset_id;
    std::string term;
    Lang lang;

    auto operator<=>(const OracleAssignment&) const = default;
};

/// String-scan route: normalizes title and term to space-joined casefolded
/// token strings and looks for " term " inside " title ".
inline std::set<OracleAssignment> oracle_expand(const std::vector<DatasetRecord>& datasets,
                                                const TopicVocabulary& vocabulary) {
    const auto normalize = [](const std::string& text) {
        std::string out = " ";
        for (const auto& token : tokenize_fold(text)) {
            out += token;
            out += ' ';
        }
        return out;
    };
    std::set<OracleAssignment> assignments;
    for (const auto& dataset : datasets) {
        for (Lang lang : {Lang::De, Lang::En}) {
            const auto& language_title = lang == Lang::De ? dataset.title_de : dataset.title_en;
            const auto& title = language_title ? language_title : dataset.title;
            if (!title) continue;
            const std::string haystack = normalize(*title);
            for (const auto& term : vocabulary.terms(lang)) {
                const std::string needle = normalize(term);
                if (needle == " ") continue;
                if (haystack.find(needle) == std::string::npos) continue;
                bool already = false;
                for (const auto& topic : dataset.topics) {
                    if (normalize(topic) == needle) {
                        already = true;
                        break;
                    }
                }
                if (!already) assignments.insert({dataset.id, term, lang});
            }
        }
    }
    return assignments;
}

}  // namespace dsrec::test
