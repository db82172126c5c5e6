#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsrec/corpus.hpp"
#include "dsrec/ranking.hpp"
#include "dsrec/text.hpp"

namespace dsrec {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    void validate() const;  // k1 >= 0, b in [0,1]
};

/// Indexed field name -> analyzer language. *_de fields analyze as German,
/// *_en as English, unsuffixed fields language-neutral.
struct FieldSchema {
    std::map<std::string, Lang> fields;

    bool contains(const std::string& field) const { return fields.count(field) > 0; }
    Lang analyzer_language(const std::string& field) const;  // throws on unknown field
};

/// The eleven dataset metadata fields served by the recommender.
FieldSchema default_field_schema();

/// Text a dataset record contributes to one indexed field. The topics list
/// feeds `topic` as a whole and `topic_de`/`topic_en` split by the stopword
/// language heuristic.
std::string dataset_field_text(const DatasetRecord& record, const std::string& field);

/// Fielded inverted index with per-field statistics and BM25 scoring.
/// Immutable after build; any number of concurrent readers is fine.
class InvertedIndex {
  public:
    struct FieldStats {
        // term -> (doc ordinal, term frequency), ordinals ascending
        std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> postings;
        std::vector<std::uint32_t> lengths;  // per doc ordinal; 0 = field absent
        std::uint64_t total_length = 0;
        std::uint32_t doc_count = 0;  // docs with at least one token in this field

        double avg_length() const {
            return doc_count == 0 ? 0.0 : static_cast<double>(total_length) / doc_count;
        }
    };

    InvertedIndex() = default;

    static InvertedIndex build(std::vector<DatasetRecord> datasets, FieldSchema schema,
                               Bm25Params params = {});

    const FieldSchema& schema() const { return schema_; }
    const Bm25Params& params() const { return params_; }
    std::size_t doc_count() const { return docs_.size(); }
    const std::vector<DatasetRecord>& docs() const { return docs_; }
    const DatasetRecord* find_doc(const std::string& id) const;
    const FieldStats& field_stats(const std::string& field) const;  // throws on unknown field

    /// BM25 contribution of one term in one field for one document:
    ///   idf(term) * tf*(k1+1) / (tf + k1*(1 - b + b*len/avglen))
    /// with idf = ln(1 + (N - df + 0.5)/(df + 0.5)) over per-field statistics.
    /// Zero when the term does not occur in the document's field.
    double term_score(const std::string& field, const std::string& term,
                      const std::string& doc_id) const;

    /// Sum over clauses of boost * sum of term scores; positive-scoring docs
    /// ordered by (score desc, id asc), truncated to top_k.
    RankedList search(const FieldedQuery& query, std::size_t top_k) const;

    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

  private:
    FieldSchema schema_;
    Bm25Params params_;
    std::vector<DatasetRecord> docs_;  // sorted by id
    std::unordered_map<std::string, std::uint32_t> ordinal_by_id_;
    std::map<std::string, FieldStats> fields_;

    double term_score_at(const FieldStats& stats, const std::string& term,
                         std::uint32_t ordinal) const;
};

}  // namespace dsrec
