#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsrec/text.hpp"

namespace dsrec {

struct PublicationRecord {
    std::string id;
    std::optional<std::string> title, title_en, title_de;
    std::optional<std::string> abstract, abstract_en, abstract_de;
    std::vector<std::string> topics;
    std::vector<std::string> persons;
    std::optional<std::string> language;  // ISO 639-1 tag of the record

    bool operator==(const PublicationRecord&) const = default;
};

struct DatasetRecord {
    std::string id;
    std::optional<std::string> title, title_en, title_de;
    std::optional<std::string> abstract, abstract_en, abstract_de;
    std::vector<std::string> topics;
    std::vector<std::string> ext_topic_de, ext_topic_en;  // filled by expand_topics
    std::optional<std::string> data_type, collection_method;
    std::optional<std::string> temporal_coverage, geographical_coverage;
    std::vector<std::string> investigators, contributors;

    bool operator==(const DatasetRecord&) const = default;
};

/// A line that could not be ingested, with the 1-based line number.
struct Rejection {
    std::size_t line = 0;
    std::string reason;
};

template <typename Record>
struct LoadResult {
    std::vector<Record> records;
    std::vector<Rejection> rejections;
};

nlohmann::json to_json(const PublicationRecord& record);
nlohmann::json to_json(const DatasetRecord& record);
nlohmann::json to_json(const std::vector<Rejection>& rejections);

/// JSONL loaders: one object per line, malformed lines and duplicate ids are
/// rejected with their line number, ingestion continues. Unreadable files
/// throw DataError.
LoadResult<PublicationRecord> load_publications(const std::string& path);
LoadResult<DatasetRecord> load_datasets(const std::string& path);

void save_publications(const std::vector<PublicationRecord>& records, const std::string& path);
void save_datasets(const std::vector<DatasetRecord>& records, const std::string& path);

struct TranslationEntry {
    std::string id;     // record id in the target collection
    std::string field;  // "title" or "abstract"
    std::string lang;   // "de" or "en"
    std::string text;
};

struct TranslationTable {
    std::vector<TranslationEntry> entries;
};

struct TranslationLoadResult {
    TranslationTable table;
    std::vector<Rejection> rejections;
};

TranslationLoadResult load_translations(const std::string& path);

struct TranslationReport {
    std::size_t applied = 0;
    std::size_t already_present = 0;   // field existed, never overwritten
    std::size_t skipped_unknown_id = 0;
    std::size_t rejected = 0;          // unknown field or language
};

/// Fills language-suffixed fields (title_en, abstract_de, ...) from the table.
/// Existing values win; originals are never touched.
TranslationReport apply_translations(std::vector<PublicationRecord>& records,
                                     const TranslationTable& table);
TranslationReport apply_translations(std::vector<DatasetRecord>& records,
                                     const TranslationTable& table);

/// Controlled vocabulary collected from the topics assigned in the corpus,
/// split by language.
struct TopicVocabulary {
    std::set<std::string> de;
    std::set<std::string> en;

    const std::set<std::string>& terms(Lang lang) const;
    std::size_t size() const { return de.size() + en.size(); }
};

/// Union of all assigned topics. A term's language comes from the record's
/// language tag when present, otherwise from the stopword heuristic.
TopicVocabulary build_topic_vocabulary(const std::vector<PublicationRecord>& publications,
                                       const std::vector<DatasetRecord>& datasets);

struct ExpansionAssignment {
    std::string dataset_id;
    std::string term;
    Lang lang = Lang::Neutral;
};

struct ExpansionReport {
    std::vector<ExpansionAssignment> assignments;
    std::size_t assigned_de = 0;
    std::size_t assigned_en = 0;
};

nlohmann::json to_json(const ExpansionReport& report);

/// Assigns a vocabulary term to ext_topic_de / ext_topic_en when it occurs in
/// the corresponding-language title as a contiguous, token-aligned, casefolded
/// match and is not already one of the record's topics. A record without a
/// language-specific title falls back to the plain title field.
ExpansionReport expand_topics(std::vector<DatasetRecord>& datasets,
                              const TopicVocabulary& vocabulary);

}  // namespace dsrec
