#include "dsrec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "dsrec/errors.hpp"

namespace dsrec {

namespace {

using nlohmann::json;

void put_string(json& out, const char* key, const std::optional<std::string>& value) {
    if (value) out[key] = *value;
}

void put_list(json& out, const char* key, const std::vector<std::string>& value) {
    if (!value.empty()) out[key] = value;
}

// Pulls an optional string field; records a complaint on type mismatch.
bool get_string(const json& in, const char* key, std::optional<std::string>& out,
                std::string& error) {
    auto it = in.find(key);
    if (it == in.end() || it->is_null()) return true;
    if (!it->is_string()) {
        error = std::string("field '") + key + "' is not a string";
        return false;
    }
    out = it->get<std::string>();
    return true;
}

bool get_list(const json& in, const char* key, std::vector<std::string>& out,
              std::string& error) {
    auto it = in.find(key);
    if (it == in.end() || it->is_null()) return true;
    if (!it->is_array()) {
        error = std::string("field '") + key + "' is not an array";
        return false;
    }
    for (const auto& element : *it) {
        if (!element.is_string()) {
            error = std::string("field '") + key + "' contains a non-string entry";
            return false;
        }
        out.push_back(element.get<std::string>());
    }
    return true;
}

bool parse_record(const json& in, PublicationRecord& out, std::string& error) {
    return get_string(in, "title", out.title, error) &&
           get_string(in, "title_en", out.title_en, error) &&
           get_string(in, "title_de", out.title_de, error) &&
           get_string(in, "abstract", out.abstract, error) &&
           get_string(in, "abstract_en", out.abstract_en, error) &&
           get_string(in, "abstract_de", out.abstract_de, error) &&
           get_list(in, "topics", out.topics, error) &&
           get_list(in, "persons", out.persons, error) &&
           get_string(in, "language", out.language, error);
}

bool parse_record(const json& in, DatasetRecord& out, std::string& error) {
    return get_string(in, "title", out.title, error) &&
           get_string(in, "title_en", out.title_en, error) &&
           get_string(in, "title_de", out.title_de, error) &&
           get_string(in, "abstract", out.abstract, error) &&
           get_string(in, "abstract_en", out.abstract_en, error) &&
           get_string(in, "abstract_de", out.abstract_de, error) &&
           get_list(in, "topics", out.topics, error) &&
           get_list(in, "ext_topic_de", out.ext_topic_de, error) &&
           get_list(in, "ext_topic_en", out.ext_topic_en, error) &&
           get_string(in, "data_type", out.data_type, error) &&
           get_string(in, "collection_method", out.collection_method, error) &&
           get_string(in, "temporal_coverage", out.temporal_coverage, error) &&
           get_string(in, "geographical_coverage", out.geographical_coverage, error) &&
           get_list(in, "investigators", out.investigators, error) &&
           get_list(in, "contributors", out.contributors, error);
}

// Collection-level invariants beyond well-formed JSON.
bool validate(const PublicationRecord& record, std::string& error) {
    if (!record.title && !record.title_en && !record.title_de) {
        error = "publication has no title in any language";
        return false;
    }
    return true;
}

bool validate(const DatasetRecord&, std::string&) { return true; }

template <typename Record>
LoadResult<Record> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read corpus file: " + path);
    LoadResult<Record> result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json parsed = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded() || !parsed.is_object()) {
            result.rejections.push_back({line_no, "malformed JSON object"});
            continue;
        }
        auto id_it = parsed.find("id");
        if (id_it == parsed.end() || !id_it->is_string() || id_it->get<std::string>().empty()) {
            result.rejections.push_back({line_no, "missing or empty id"});
            continue;
        }
        Record record;
        record.id = id_it->get<std::string>();
        std::string error;
        if (!parse_record(parsed, record, error) || !validate(record, error)) {
            result.rejections.push_back({line_no, error});
            continue;
        }
        if (!seen.insert(record.id).second) {
            result.rejections.push_back({line_no, "duplicate id: " + record.id});
            continue;
        }
        result.records.push_back(std::move(record));
    }
    return result;
}

template <typename Record>
void save_records(const std::vector<Record>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file: " + path);
    for (const auto& record : records) out << to_json(record).dump() << '\n';
}

// The slot a (field, lang) pair writes into, or nullptr for unknown names.
template <typename Record>
std::optional<std::string>* translation_slot(Record& record, const std::string& field,
                                             const std::string& lang) {
    if (field == "title") {
        if (lang == "en") return &record.title_en;
        if (lang == "de") return &record.title_de;
    } else if (field == "abstract") {
        if (lang == "en") return &record.abstract_en;
        if (lang == "de") return &record.abstract_de;
    }
    return nullptr;
}

template <typename Record>
TranslationReport apply_translations_impl(std::vector<Record>& records,
                                          const TranslationTable& table) {
    TranslationReport report;
    std::unordered_map<std::string, Record*> by_id;
    by_id.reserve(records.size());
    for (auto& record : records) by_id.emplace(record.id, &record);
    for (const auto& entry : table.entries) {
        auto it = by_id.find(entry.id);
        if (it == by_id.end()) {
            ++report.skipped_unknown_id;
            continue;
        }
        auto* slot = translation_slot(*it->second, entry.field, entry.lang);
        if (slot == nullptr) {
            ++report.rejected;
            continue;
        }
        if (slot->has_value()) {
            ++report.already_present;
            continue;
        }
        *slot = entry.text;
        ++report.applied;
    }
    return report;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// True when `needle` occurs as a contiguous run inside `haystack`.
bool contains_token_run(const std::vector<std::string>& haystack,
                        const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t start = 0; start + needle.size() <= haystack.size(); ++start) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            if (haystack[start + k] != needle[k]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace

nlohmann::json to_json(const PublicationRecord& record) {
    json out;
    out["id"] = record.id;
    put_string(out, "title", record.title);
    put_string(out, "title_en", record.title_en);
    put_string(out, "title_de", record.title_de);
    put_string(out, "abstract", record.abstract);
    put_string(out, "abstract_en", record.abstract_en);
    put_string(out, "abstract_de", record.abstract_de);
    put_list(out, "topics", record.topics);
    put_list(out, "persons", record.persons);
    put_string(out, "language", record.language);
    return out;
}

nlohmann::json to_json(const DatasetRecord& record) {
    json out;
    out["id"] = record.id;
    put_string(out, "title", record.title);
    put_string(out, "title_en", record.title_en);
    put_string(out, "title_de", record.title_de);
    put_string(out, "abstract", record.abstract);
    put_string(out, "abstract_en", record.abstract_en);
    put_string(out, "abstract_de", record.abstract_de);
    put_list(out, "topics", record.topics);
    put_list(out, "ext_topic_de", record.ext_topic_de);
    put_list(out, "ext_topic_en", record.ext_topic_en);
    put_string(out, "data_type", record.data_type);
    put_string(out, "collection_method", record.collection_method);
    put_string(out, "temporal_coverage", record.temporal_coverage);
    put_string(out, "geographical_coverage", record.geographical_coverage);
    put_list(out, "investigators", record.investigators);
    put_list(out, "contributors", record.contributors);
    return out;
}

nlohmann::json to_json(const std::vector<Rejection>& rejections) {
    json out = json::array();
    for (const auto& rejection : rejections) {
        out.push_back({{"line", rejection.line}, {"reason", rejection.reason}});
    }
    return out;
}

LoadResult<PublicationRecord> load_publications(const std::string& path) {
    return load_records<PublicationRecord>(path);
}

LoadResult<DatasetRecord> load_datasets(const std::string& path) {
    return load_records<DatasetRecord>(path);
}

void save_publications(const std::vector<PublicationRecord>& records, const std::string& path) {
    save_records(records, path);
}

void save_datasets(const std::vector<DatasetRecord>& records, const std::string& path) {
    save_records(records, path);
}

TranslationLoadResult load_translations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read translation table: " + path);
    TranslationLoadResult result;
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
        TranslationEntry entry;
        bool ok = true;
        const std::pair<const char*, std::string*> fields[] = {
            {"id", &entry.id}, {"field", &entry.field}, {"lang", &entry.lang}, {"text", &entry.text}};
        for (auto [key, slot] : fields) {
            auto it = parsed.find(key);
            if (it == parsed.end() || !it->is_string()) {
                result.rejections.push_back({line_no, std::string("missing field '") + key + "'"});
                ok = false;
                break;
            }
            *slot = it->get<std::string>();
        }
        if (ok) result.table.entries.push_back(std::move(entry));
    }
    return result;
}

TranslationReport apply_translations(std::vector<PublicationRecord>& records,
                                     const TranslationTable& table) {
    return apply_translations_impl(records, table);
}

TranslationReport apply_translations(std::vector<DatasetRecord>& records,
                                     const TranslationTable& table) {
    return apply_translations_impl(records, table);
}

const std::set<std::string>& TopicVocabulary::terms(Lang lang) const {
    return lang == Lang::De ? de : en;
}

namespace {

void collect_topics(const std::vector<std::string>& topics,
                    const std::optional<std::string>& language_tag, TopicVocabulary& vocabulary) {
    for (const auto& raw : topics) {
        std::string term = trim(raw);
        if (term.empty()) continue;
        Lang lang;
        if (language_tag && *language_tag == "de") {
            lang = Lang::De;
        } else if (language_tag && *language_tag == "en") {
            lang = Lang::En;
        } else {
            lang = looks_german(term) ? Lang::De : Lang::En;
        }
        (lang == Lang::De ? vocabulary.de : vocabulary.en).insert(std::move(term));
    }
}

}  // namespace

TopicVocabulary build_topic_vocabulary(const std::vector<PublicationRecord>& publications,
                                       const std::vector<DatasetRecord>& datasets) {
    TopicVocabulary vocabulary;
    for (const auto& publication : publications) {
        collect_topics(publication.topics, publication.language, vocabulary);
    }
    for (const auto& dataset : datasets) {
        collect_topics(dataset.topics, std::nullopt, vocabulary);
    }
    return vocabulary;
}

nlohmann::json to_json(const ExpansionReport& report) {
    json assignments = json::array();
    for (const auto& assignment : report.assignments) {
        assignments.push_back({{"dataset", assignment.dataset_id},
                               {"term", assignment.term},
                               {"lang", lang_name(assignment.lang)}});
    }
    return json{{"assigned_de", report.assigned_de},
                {"assigned_en", report.assigned_en},
                {"assignments", assignments}};
}

ExpansionReport expand_topics(std::vector<DatasetRecord>& datasets,
                              const TopicVocabulary& vocabulary) {
    ExpansionReport report;
    for (auto& dataset : datasets) {
        // Casefolded token sequences of the record's own topics, for the
        // already-assigned check.
        std::vector<std::vector<std::string>> own_topics;
        own_topics.reserve(dataset.topics.size());
        for (const auto& topic : dataset.topics) own_topics.push_back(tokenize_fold(topic));

        for (Lang lang : {Lang::De, Lang::En}) {
            const auto& language_title = lang == Lang::De ? dataset.title_de : dataset.title_en;
            const auto& title = language_title ? language_title : dataset.title;
            if (!title) continue;
            const auto title_tokens = tokenize_fold(*title);
            auto& ext = lang == Lang::De ? dataset.ext_topic_de : dataset.ext_topic_en;
            for (const auto& term : vocabulary.terms(lang)) {
                const auto term_tokens = tokenize_fold(term);
                if (!contains_token_run(title_tokens, term_tokens)) continue;
                if (std::any_of(own_topics.begin(), own_topics.end(),
                                [&](const auto& tokens) { return tokens == term_tokens; })) {
                    continue;
                }
                if (std::find(ext.begin(), ext.end(), term) != ext.end()) continue;
                ext.push_back(term);
                report.assignments.push_back({dataset.id, term, lang});
                ++(lang == Lang::De ? report.assigned_de : report.assigned_en);
            }
        }
    }
    return report;
}

}  // namespace dsrec
