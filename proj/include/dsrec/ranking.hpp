#pragma once

#include <map>
#include <string>
#include <vector>

namespace dsrec {

struct ScoredDoc {
    std::string id;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// Ordered best-first; ranks are implicit (position + 1).
using RankedList = std::vector<ScoredDoc>;

struct QueryClause {
    std::string field;
    double boost = 1.0;
    std::vector<std::string> terms;  // analyzed with the target field's analyzer

    bool operator==(const QueryClause&) const = default;
};

struct FieldedQuery {
    std::string seed_id;  // publication the query was generated from
    std::vector<QueryClause> clauses;

    bool empty() const { return clauses.empty(); }
    bool operator==(const FieldedQuery&) const = default;
};

/// A full set of rankings keyed by query (publication) id.
struct Run {
    std::string tag = "dsrec";
    std::map<std::string, RankedList> rankings;

    bool operator==(const Run&) const = default;
};

/// TREC run format, one entry per line: `qid Q0 docid rank score tag`,
/// single spaces, ranks from 1, scores with fixed 6 decimals.
std::string format_trec_run(const Run& run);
void write_trec_run(const Run& run, const std::string& path);
Run read_trec_run(const std::string& path);  // throws DataError on bad lines

}  // namespace dsrec
