#pragma once

// Segmentation for dictionary tagging.
//
// Text is cut at whitespace and wherever the character class changes
// between CJK (kana/kanji), Number, Alphabetic, Symbol and Emoji. Number and
// Alphabetic runs stay whole, every Symbol and Emoji is its own token, and
// CJK runs are split by greedy longest match against the dictionary stems
// (one character at a time where nothing matches, or when no matcher is
// given).

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liwcad/liwc/matcher.hpp"
#include "liwcad/text/profile.hpp"

namespace liwcad::text {

struct TokenList {
    std::vector<std::string> tokens;
    std::vector<std::pair<std::size_t, std::size_t>> boundaries;  // [begin, end) byte offsets

    std::size_t size() const noexcept { return tokens.size(); }
};

namespace detail {

enum class Segment { Cjk, Number, Alphabetic, Symbol, Emoji, Space };

inline Segment segment_of(CharClass c) {
    switch (c) {
    case CharClass::Hiragana:
    case CharClass::Katakana:
    case CharClass::Kanji: return Segment::Cjk;
    case CharClass::Number: return Segment::Number;
    case CharClass::Alphabetic: return Segment::Alphabetic;
    case CharClass::Emoji: return Segment::Emoji;
    case CharClass::Whitespace: return Segment::Space;
    case CharClass::Symbol: break;
    }
    return Segment::Symbol;
}

// Kana voicing marks that belong to the preceding character.
inline bool is_voicing_mark(char32_t cp) {
    return cp == 0x3099 || cp == 0x309A || cp == 0xFF9E || cp == 0xFF9F;
}

inline void push(TokenList& out, std::string_view text, std::size_t begin, std::size_t end) {
    out.tokens.emplace_back(text.substr(begin, end - begin));
    out.boundaries.emplace_back(begin, end);
}

inline void split_cjk(TokenList& out, std::string_view text, const std::vector<CharUnit>& run,
                      const liwc::Matcher* matcher) {
    if (matcher == nullptr) {
        for (const auto& u : run) push(out, text, u.begin, u.end);
        return;
    }
    // Normalized image of the run, unit by unit, with cumulative end offsets.
    std::string normalized;
    std::vector<std::size_t> ends;
    ends.reserve(run.size());
    for (const auto& u : run) {
        normalized += unicode::normalize_token(text.substr(u.begin, u.end - u.begin));
        ends.push_back(normalized.size());
    }

    std::size_t i = 0;
    while (i < run.size()) {
        const std::size_t start = i == 0 ? 0 : ends[i - 1];
        std::size_t last = i;
        matcher->for_each_stem_prefix(std::string_view(normalized).substr(start), [&](std::size_t len) {
            const std::size_t target = start + len;
            auto it = std::lower_bound(ends.begin() + static_cast<std::ptrdiff_t>(i), ends.end(), target);
            if (it != ends.end() && *it == target) last = static_cast<std::size_t>(it - ends.begin());
        });
        push(out, text, run[i].begin, run[last].end);
        i = last + 1;
    }
}

}  // namespace detail

inline TokenList tokenize(std::string_view text, const liwc::Matcher* matcher = nullptr,
                          const CharClassifier& classifier = default_classifier()) {
    std::vector<CharUnit> units;
    for_each_unit(text, classifier, [&](const CharUnit& u) {
        if (!units.empty() && units.back().end == u.begin &&
            detail::segment_of(units.back().cls) == detail::Segment::Cjk &&
            detail::is_voicing_mark(utf8::decode(text, u.begin).scalar)) {
            units.back().end = u.end;
            return;
        }
        units.push_back(u);
    });

    TokenList out;
    std::size_t i = 0;
    while (i < units.size()) {
        const auto seg = detail::segment_of(units[i].cls);
        std::size_t j = i + 1;
        while (j < units.size() && detail::segment_of(units[j].cls) == seg) ++j;

        switch (seg) {
        case detail::Segment::Space: break;
        case detail::Segment::Number:
        case detail::Segment::Alphabetic: detail::push(out, text, units[i].begin, units[j - 1].end); break;
        case detail::Segment::Symbol:
        case detail::Segment::Emoji:
            for (std::size_t k = i; k < j; ++k) detail::push(out, text, units[k].begin, units[k].end);
            break;
        case detail::Segment::Cjk:
            detail::split_cjk(out, text, std::vector<CharUnit>(units.begin() + static_cast<std::ptrdiff_t>(i),
                                                               units.begin() + static_cast<std::ptrdiff_t>(j)),
                              matcher);
            break;
        }
        i = j;
    }
    return out;
}

inline TokenList tokenize(std::string_view text, const liwc::Matcher& matcher) { return tokenize(text, &matcher); }

}  // namespace liwcad::text
