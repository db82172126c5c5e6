#include "dsrec/query.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace dsrec {

namespace {

const std::vector<std::string> kTitleTargets = {"title", "title_de", "title_en"};
const std::vector<std::string> kAbstractTargets = {"abstract", "abstract_de", "abstract_en"};
const std::vector<std::string> kTopicTargets = {"topic", "topic_de", "topic_en", "ext_topic_de",
                                                "ext_topic_en"};

std::string family_of(const std::string& source_field) {
    if (source_field.rfind("title", 0) == 0) return "title";
    if (source_field.rfind("abstract", 0) == 0) return "abstract";
    if (source_field.rfind("topic", 0) == 0) return "topic";
    throw std::invalid_argument("unknown query source field: " + source_field);
}

const std::string* source_text(const PublicationRecord& publication,
                               const std::string& source_field) {
    if (source_field == "title") return publication.title ? &*publication.title : nullptr;
    if (source_field == "title_en") return publication.title_en ? &*publication.title_en : nullptr;
    if (source_field == "title_de") return publication.title_de ? &*publication.title_de : nullptr;
    if (source_field == "abstract") return publication.abstract ? &*publication.abstract : nullptr;
    if (source_field == "abstract_en")
        return publication.abstract_en ? &*publication.abstract_en : nullptr;
    if (source_field == "abstract_de")
        return publication.abstract_de ? &*publication.abstract_de : nullptr;
    return nullptr;
}

void append_text(std::string& out, const std::optional<std::string>& text) {
    if (!text || text->empty()) return;
    if (!out.empty()) out += ' ';
    out += *text;
}

// Concatenation feeding the topic-family clauses: every available title and
// abstract variant plus the assigned topics.
std::string topic_source_text(const PublicationRecord& publication, bool concat) {
    std::string out;
    if (concat) {
        append_text(out, publication.title);
        append_text(out, publication.title_en);
        append_text(out, publication.title_de);
        append_text(out, publication.abstract);
        append_text(out, publication.abstract_en);
        append_text(out, publication.abstract_de);
    }
    for (const auto& topic : publication.topics) append_text(out, topic);
    return out;
}

std::vector<std::string> dedup_keep_order(std::vector<std::string> terms) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (auto& term : terms) {
        if (seen.insert(term).second) out.push_back(std::move(term));
    }
    return out;
}

}  // namespace

void QueryConfig::validate() const {
    if (source_fields.empty()) throw std::invalid_argument("no query source fields configured");
    bool any_positive = false;
    for (const auto& [field, boost] : boosts) {
        if (boost < 0.0 || boost > 1.0) {
            throw std::invalid_argument("boost for field '" + field + "' outside [0,1]");
        }
        if (boost > 0.0) any_positive = true;
    }
    if (!any_positive) throw std::invalid_argument("all field boosts are zero");
}

QueryConfig default_query_config() {
    QueryConfig config;
    config.boosts = {
        {"title", 1.0},        {"title_de", 1.0},     {"title_en", 1.0},
        {"abstract", 1.0},     {"abstract_de", 1.0},  {"abstract_en", 1.0},
        {"topic", 0.3},        {"topic_de", 0.3},     {"topic_en", 0.3},
        {"ext_topic_de", 0.3}, {"ext_topic_en", 0.3},
    };
    return config;
}

const std::vector<std::string>& target_fields_for(const std::string& source_field) {
    const std::string family = family_of(source_field);
    if (family == "title") return kTitleTargets;
    if (family == "abstract") return kAbstractTargets;
    return kTopicTargets;
}

FieldedQuery build_query(const PublicationRecord& publication, const QueryConfig& config,
                         const FieldSchema& schema) {
    config.validate();
    FieldedQuery query;
    query.seed_id = publication.id;
    for (const auto& source_field : config.source_fields) {
        std::string text;
        if (family_of(source_field) == "topic") {
            text = topic_source_text(publication, config.topic_concat);
        } else {
            const std::string* value = source_text(publication, source_field);
            if (value == nullptr) continue;  // absent fields are skipped silently
            text = *value;
        }
        if (text.empty()) continue;
        for (const auto& target : target_fields_for(source_field)) {
            auto boost_it = config.boosts.find(target);
            const double boost = boost_it == config.boosts.end() ? 0.0 : boost_it->second;
            const Analyzer analyzer = Analyzer::for_language(schema.analyzer_language(target));
            auto terms = dedup_keep_order(analyzer.analyze(text));
            if (terms.empty()) continue;
            query.clauses.push_back({target, boost, std::move(terms)});
        }
    }
    return query;
}

PrecomputeResult precompute_all(const InvertedIndex& index,
                                const std::vector<PublicationRecord>& publications,
                                const QueryConfig& config, std::size_t top_k) {
    PrecomputeResult result;
    for (const auto& publication : publications) {
        FieldedQuery query = build_query(publication, config, index.schema());
        if (query.empty()) {
            ++result.empty_queries;
            result.run.rankings.emplace(publication.id, RankedList{});
            continue;
        }
        result.run.rankings.emplace(publication.id, index.search(query, top_k));
    }
    return result;
}

}  // namespace dsrec
