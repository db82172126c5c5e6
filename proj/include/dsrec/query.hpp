#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dsrec/corpus.hpp"
#include "dsrec/index.hpp"
#include "dsrec/ranking.hpp"

namespace dsrec {

/// Controls dynamic query generation. Boosts are static factors in [0,1],
/// one per indexed dataset field.
struct QueryConfig {
    std::vector<std::string> source_fields{"title", "title_en", "topic"};
    std::map<std::string, double> boosts;  // target field -> boost
    /// Topic-family clauses draw their text from the concatenation of the
    /// publication's titles, abstracts and topics instead of the topics alone.
    bool topic_concat = true;

    void validate() const;  // throws std::invalid_argument
};

/// Title and abstract families at 1.0, topic family at 0.3.
QueryConfig default_query_config();

/// Query-side targets for one source field family.
const std::vector<std::string>& target_fields_for(const std::string& source_field);

/// Builds the fielded query for one seed publication. Absent source fields
/// are skipped; clause terms come from the target field's analyzer and are
/// deduplicated in first-occurrence order. Pure in (publication, config).
FieldedQuery build_query(const PublicationRecord& publication, const QueryConfig& config,
                         const FieldSchema& schema = default_field_schema());

struct PrecomputeResult {
    Run run;
    std::size_t empty_queries = 0;  // publications that produced no clauses
};

/// One ranked list per publication, keyed by publication id. Deterministic
/// and independent of publication order.
PrecomputeResult precompute_all(const InvertedIndex& index,
                                const std::vector<PublicationRecord>& publications,
                                const QueryConfig& config, std::size_t top_k);

}  // namespace dsrec
