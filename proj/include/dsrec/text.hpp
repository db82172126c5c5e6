#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dsrec {

enum class Lang { De, En, Neutral };

std::string lang_name(Lang lang);
Lang lang_from_name(std::string_view name);  // throws std::invalid_argument

/// Casefold a single code point. Covers ASCII, Latin-1, Latin Extended-A,
/// Greek and Cyrillic; everything else is returned unchanged.
char32_t fold_codepoint(char32_t cp);

/// Letters and digits of the ranges above count as word characters.
bool is_word_codepoint(char32_t cp);

/// Maximal runs of word characters, casefolded. No stopword removal; this is
/// the shared tokenizer used by analyzers and by topic-boundary matching.
std::vector<std::string> tokenize_fold(std::string_view text);

/// Built-in stopword list for a language (Neutral is empty). The same lists
/// ship as data/stopwords/{de,en}.txt; a test keeps them in sync.
const std::unordered_set<std::string>& stopwords(Lang lang);

/// One term per line, blank lines ignored. Terms are casefolded.
std::unordered_set<std::string> load_stopwords(const std::string& path);

/// Language attribution for terms without an explicit tag: any token hitting
/// the German stopword list means German, everything else counts as English.
bool looks_german(std::string_view text);

/// Very light suffix stripping, only meant as the switchable stemming hook.
std::string light_stem(std::string token, Lang lang);

struct Analyzer {
    Lang lang = Lang::Neutral;
    std::unordered_set<std::string> stop;
    bool stemming = false;

    static Analyzer for_language(Lang lang, bool stemming = false);

    /// Tokenize, casefold, drop stopwords, optionally stem. Order preserved.
    std::vector<std::string> analyze(std::string_view text) const;
};

}  // namespace dsrec
