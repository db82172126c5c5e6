#include "dsrec/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dsrec/errors.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

constexpr int kIndexFormatVersion = 1;

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& part : parts) {
        if (!out.empty()) out += ' ';
        out += part;
    }
    return out;
}

std::string join_if(const std::vector<std::string>& parts, bool want_german) {
    std::string out;
    for (const auto& part : parts) {
        if (looks_german(part) != want_german) continue;
        if (!out.empty()) out += ' ';
        out += part;
    }
    return out;
}

}  // namespace

void Bm25Params::validate() const {
    if (!(k1 >= 0.0)) throw std::invalid_argument("BM25 k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("BM25 b must be in [0,1]");
}

Lang FieldSchema::analyzer_language(const std::string& field) const {
    auto it = fields.find(field);
    if (it == fields.end()) throw std::invalid_argument("unknown index field: " + field);
    return it->second;
}

FieldSchema default_field_schema() {
    FieldSchema schema;
    schema.fields = {
        {"title", Lang::Neutral},     {"title_de", Lang::De},     {"title_en", Lang::En},
        {"abstract", Lang::Neutral},  {"abstract_de", Lang::De},  {"abstract_en", Lang::En},
        {"topic", Lang::Neutral},     {"topic_de", Lang::De},     {"topic_en", Lang::En},
        {"ext_topic_de", Lang::De},   {"ext_topic_en", Lang::En},
    };
    return schema;
}

std::string dataset_field_text(const DatasetRecord& record, const std::string& field) {
    if (field == "title") return record.title.value_or("");
    if (field == "title_de") return record.title_de.value_or("");
    if (field == "title_en") return record.title_en.value_or("");
    if (field == "abstract") return record.abstract.value_or("");
    if (field == "abstract_de") return record.abstract_de.value_or("");
    if (field == "abstract_en") return record.abstract_en.value_or("");
    if (field == "topic") return join(record.topics);
    if (field == "topic_de") return join_if(record.topics, true);
    if (field == "topic_en") return join_if(record.topics, false);
    if (field == "ext_topic_de") return join(record.ext_topic_de);
    if (field == "ext_topic_en") return join(record.ext_topic_en);
    throw std::invalid_argument("unknown index field: " + field);
}

InvertedIndex InvertedIndex::build(std::vector<DatasetRecord> datasets, FieldSchema schema,
                                   Bm25Params params) {
    params.validate();
    InvertedIndex index;
    index.schema_ = std::move(schema);
    index.params_ = params;
    index.docs_ = std::move(datasets);
    // Sorting by id first makes the result independent of input order.
    std::sort(index.docs_.begin(), index.docs_.end(),
              [](const DatasetRecord& a, const DatasetRecord& b) { return a.id < b.id; });
    for (std::uint32_t ordinal = 0; ordinal < index.docs_.size(); ++ordinal) {
        if (!index.ordinal_by_id_.emplace(index.docs_[ordinal].id, ordinal).second) {
            throw DataError("duplicate dataset id in index build: " + index.docs_[ordinal].id);
        }
    }
    for (const auto& [field, lang] : index.schema_.fields) {
        auto& stats = index.fields_[field];
        stats.lengths.assign(index.docs_.size(), 0);
        const Analyzer analyzer = Analyzer::for_language(lang);
        for (std::uint32_t ordinal = 0; ordinal < index.docs_.size(); ++ordinal) {
            const auto tokens = analyzer.analyze(dataset_field_text(index.docs_[ordinal], field));
            if (tokens.empty()) continue;
            stats.lengths[ordinal] = static_cast<std::uint32_t>(tokens.size());
            stats.total_length += tokens.size();
            ++stats.doc_count;
            std::map<std::string, std::uint32_t> frequencies;
            for (const auto& token : tokens) ++frequencies[token];
            for (const auto& [term, tf] : frequencies) {
                stats.postings[term].emplace_back(ordinal, tf);
            }
        }
    }
    return index;
}

const DatasetRecord* InvertedIndex::find_doc(const std::string& id) const {
    auto it = ordinal_by_id_.find(id);
    return it == ordinal_by_id_.end() ? nullptr : &docs_[it->second];
}

const InvertedIndex::FieldStats& InvertedIndex::field_stats(const std::string& field) const {
    auto it = fields_.find(field);
    if (it == fields_.end()) throw std::invalid_argument("unknown index field: " + field);
    return it->second;
}

double InvertedIndex::term_score_at(const FieldStats& stats, const std::string& term,
                                    std::uint32_t ordinal) const {
    auto postings_it = stats.postings.find(term);
    if (postings_it == stats.postings.end()) return 0.0;
    const auto& postings = postings_it->second;
    auto posting = std::lower_bound(
        postings.begin(), postings.end(), ordinal,
        [](const auto& entry, std::uint32_t ord) { return entry.first < ord; });
    if (posting == postings.end() || posting->first != ordinal) return 0.0;
    const double tf = posting->second;
    const double df = static_cast<double>(postings.size());
    const double n = stats.doc_count;
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    const double length = stats.lengths[ordinal];
    const double norm = params_.k1 * (1.0 - params_.b + params_.b * length / stats.avg_length());
    return idf * tf * (params_.k1 + 1.0) / (tf + norm);
}

double InvertedIndex::term_score(const std::string& field, const std::string& term,
                                 const std::string& doc_id) const {
    const auto& stats = field_stats(field);
    auto it = ordinal_by_id_.find(doc_id);
    if (it == ordinal_by_id_.end()) throw std::invalid_argument("unknown document id: " + doc_id);
    return term_score_at(stats, term, it->second);
}

RankedList InvertedIndex::search(const FieldedQuery& query, std::size_t top_k) const {
    std::unordered_map<std::uint32_t, double> accumulator;
    for (const auto& clause : query.clauses) {
        const auto& stats = field_stats(clause.field);
        for (const auto& term : clause.terms) {
            auto postings_it = stats.postings.find(term);
            if (postings_it == stats.postings.end()) continue;
            for (const auto& [ordinal, tf] : postings_it->second) {
                accumulator[ordinal] += clause.boost * term_score_at(stats, term, ordinal);
            }
        }
    }
    RankedList result;
    result.reserve(accumulator.size());
    for (const auto& [ordinal, score] : accumulator) {
        if (score > 0.0) result.push_back({docs_[ordinal].id, score});
    }
    std::sort(result.begin(), result.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (result.size() > top_k) result.resize(top_k);
    return result;
}

void InvertedIndex::save(const std::string& path) const {
    json out;
    out["format"] = "dsrec-index";
    out["version"] = kIndexFormatVersion;
    out["params"] = {{"k1", params_.k1}, {"b", params_.b}};
    json schema = json::object();
    for (const auto& [field, lang] : schema_.fields) schema[field] = lang_name(lang);
    out["schema"] = schema;
    json docs = json::array();
    for (const auto& record : docs_) docs.push_back(to_json(record));
    out["docs"] = docs;
    json fields = json::object();
    for (const auto& [field, stats] : fields_) {
        json postings = json::object();
        for (const auto& [term, entries] : stats.postings) {
            json list = json::array();
            for (const auto& [ordinal, tf] : entries) list.push_back({ordinal, tf});
            postings[term] = list;
        }
        fields[field] = {{"doc_count", stats.doc_count},
                         {"total_length", stats.total_length},
                         {"lengths", stats.lengths},
                         {"postings", postings}};
    }
    out["fields"] = fields;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot write index file: " + path);
    file << out.dump() << '\n';
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot read index file: " + path);
    json in = json::parse(file, nullptr, false);
    if (in.is_discarded() || !in.is_object() || in.value("format", "") != "dsrec-index") {
        throw DataError("not a dsrec index file: " + path);
    }
    if (in.value("version", 0) != kIndexFormatVersion) {
        throw DataError("unsupported index format version in " + path);
    }
    InvertedIndex index;
    index.params_.k1 = in.at("params").at("k1").get<double>();
    index.params_.b = in.at("params").at("b").get<double>();
    for (const auto& [field, lang] : in.at("schema").items()) {
        index.schema_.fields[field] = lang_from_name(lang.get<std::string>());
    }
    for (const auto& doc : in.at("docs")) {
        DatasetRecord record;
        record.id = doc.at("id").get<std::string>();
        auto opt = [&](const char* key) -> std::optional<std::string> {
            auto it = doc.find(key);
            if (it == doc.end()) return std::nullopt;
            return it->get<std::string>();
        };
        auto list = [&](const char* key) -> std::vector<std::string> {
            auto it = doc.find(key);
            if (it == doc.end()) return {};
            return it->get<std::vector<std::string>>();
        };
        record.title = opt("title");
        record.title_de = opt("title_de");
        record.title_en = opt("title_en");
        record.abstract = opt("abstract");
        record.abstract_de = opt("abstract_de");
        record.abstract_en = opt("abstract_en");
        record.topics = list("topics");
        record.ext_topic_de = list("ext_topic_de");
        record.ext_topic_en = list("ext_topic_en");
        record.data_type = opt("data_type");
        record.collection_method = opt("collection_method");
        record.temporal_coverage = opt("temporal_coverage");
        record.geographical_coverage = opt("geographical_coverage");
        record.investigators = list("investigators");
        record.contributors = list("contributors");
        index.docs_.push_back(std::move(record));
    }
    for (std::uint32_t ordinal = 0; ordinal < index.docs_.size(); ++ordinal) {
        index.ordinal_by_id_.emplace(index.docs_[ordinal].id, ordinal);
    }
    for (const auto& [field, stats_json] : in.at("fields").items()) {
        auto& stats = index.fields_[field];
        stats.doc_count = stats_json.at("doc_count").get<std::uint32_t>();
        stats.total_length = stats_json.at("total_length").get<std::uint64_t>();
        stats.lengths = stats_json.at("lengths").get<std::vector<std::uint32_t>>();
        for (const auto& [term, entries] : stats_json.at("postings").items()) {
            auto& postings = stats.postings[term];
            for (const auto& entry : entries) {
                postings.emplace_back(entry.at(0).get<std::uint32_t>(),
                                      entry.at(1).get<std::uint32_t>());
            }
        }
    }
    return index;
}

}  // namespace dsrec
