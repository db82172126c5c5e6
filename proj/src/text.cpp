#include "dsrec/text.hpp"

#include <fstream>
#include <stdexcept>

#include "dsrec/errors.hpp"

namespace dsrec {

std::string lang_name(Lang lang) {
    switch (lang) {
        case Lang::De: return "de";
        case Lang::En: return "en";
        case Lang::Neutral: return "neutral";
    }
    return "neutral";
}

Lang lang_from_name(std::string_view name) {
    if (name == "de") return Lang::De;
    if (name == "en") return Lang::En;
    if (name == "neutral") return Lang::Neutral;
    throw std::invalid_argument("unknown language: " + std::string(name));
}

char32_t fold_codepoint(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    // Latin-1 supplement uppercase, excluding the multiplication sign.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    // Latin Extended-A comes in upper/lower pairs with three irregular spots.
    if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;  // Y with diaeresis
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp == 0x17F) return U's';  // long s
    // Greek and Cyrillic basic blocks.
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

bool is_word_codepoint(char32_t cp) {
    if (cp >= U'0' && cp <= U'9') return true;
    if (cp >= U'A' && cp <= U'Z') return true;
    if (cp >= U'a' && cp <= U'z') return true;
    if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;
    if (cp >= 0x100 && cp <= 0x24F) return true;  // Latin Extended-A/B
    if (cp >= 0x370 && cp <= 0x3FF) return true;  // Greek
    if (cp >= 0x400 && cp <= 0x4FF) return true;  // Cyrillic
    return false;
}

namespace {

// Decodes the next UTF-8 code point starting at `i`; advances `i` past it.
// Malformed bytes yield U+FFFD and advance by one byte.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + static_cast<std::size_t>(extra) >= s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += 1 + extra;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

const char* const kStopDe[] = {
    "aber", "alle",  "als",  "also", "am",    "an",   "auch", "auf",  "aus",  "bei",  "bin",
    "bis",  "das",   "dass", "dem",  "den",   "der",  "des",  "die",  "doch", "durch", "ein",
    "eine", "einem", "einen", "einer", "eines", "er",  "es",   "für",  "hat",  "hatte", "ich",
    "ihr",  "im",    "in",   "ist",  "ja",    "kann", "mit",  "nach", "nicht", "noch", "nur",
    "oder", "sich",  "sie",  "sind", "so",    "über", "um",   "und",  "unter", "vom",  "von",
    "vor",  "war",   "was",  "wie",  "wird",  "zu",   "zum",  "zur",
};

const char* const kStopEn[] = {
    "a",    "an",   "and",  "are",  "as",    "at",    "be",   "but",  "by",   "for", "if",
    "in",   "into", "is",   "it",   "no",    "not",   "of",   "on",   "or",   "such", "that",
    "the",  "their", "then", "there", "these", "they", "this", "to",   "was",  "will", "with",
};

}  // namespace

std::vector<std::string> tokenize_fold(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = decode_utf8(text, i);
        if (is_word_codepoint(cp)) {
            encode_utf8(fold_codepoint(cp), current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

const std::unordered_set<std::string>& stopwords(Lang lang) {
    static const std::unordered_set<std::string> de(std::begin(kStopDe), std::end(kStopDe));
    static const std::unordered_set<std::string> en(std::begin(kStopEn), std::end(kStopEn));
    static const std::unordered_set<std::string> none;
    switch (lang) {
        case Lang::De: return de;
        case Lang::En: return en;
        case Lang::Neutral: return none;
    }
    return none;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read stopword list: " + path);
    std::unordered_set<std::string> result;
    std::string line;
    while (std::getline(in, line)) {
        for (auto& token : tokenize_fold(line)) result.insert(std::move(token));
    }
    return result;
}

bool looks_german(std::string_view text) {
    const auto& de = stopwords(Lang::De);
    for (const auto& token : tokenize_fold(text)) {
        if (de.count(token) > 0) return true;
    }
    return false;
}

std::string light_stem(std::string token, Lang lang) {
    const auto ends_with = [&](std::string_view suffix) {
        return token.size() > suffix.size() + 2 &&
               token.compare(token.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    const auto chop = [&](std::size_t n) { token.resize(token.size() - n); };
    if (lang == Lang::En) {
        if (ends_with("ies")) {
            chop(3);
            token.push_back('y');
        } else if (ends_with("es")) {
            chop(2);
        } else if (ends_with("s") && !ends_with("ss")) {
            chop(1);
        }
    } else if (lang == Lang::De) {
        for (std::string_view suffix : {"ern", "en", "er", "es", "em", "e", "n", "s"}) {
            if (ends_with(suffix)) {
                chop(suffix.size());
                break;
            }
        }
    }
    return token;
}

Analyzer Analyzer::for_language(Lang lang, bool stemming) {
    return Analyzer{lang, stopwords(lang), stemming};
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const {
    std::vector<std::string> result;
    for (auto& token : tokenize_fold(text)) {
        if (stop.count(token) > 0) continue;
        result.push_back(stemming ? light_stem(std::move(token), lang) : std::move(token));
    }
    return result;
}

}  // namespace dsrec
