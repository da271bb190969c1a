#pragma once

// Seven-way script classification of Unicode scalars.
//
// Resolution order for a scalar:
//   1. White_Space                      -> Whitespace (never counted)
//   2. explicit range in the table      -> that class
//   3. Emoji_Presentation               -> Emoji
//   4. general category Nd              -> Number
//   5. NFKC image's first scalar is Nd  -> Number; else its table class
//   6. otherwise                        -> Symbol
//
// The range table is data (`charclass.tsv`, `start_hex<TAB>end_hex<TAB>class`);
// the built-in copy below is what ships in data/charclass.tsv.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>

#include "liwcad/unicode.hpp"

namespace liwcad::text {

enum class CharClass : std::uint8_t { Number, Alphabetic, Katakana, Hiragana, Kanji, Symbol, Emoji, Whitespace };

inline constexpr std::array<CharClass, 7> kPublicClasses{
    CharClass::Number, CharClass::Alphabetic, CharClass::Katakana, CharClass::Hiragana,
    CharClass::Kanji,  CharClass::Symbol,     CharClass::Emoji};

inline constexpr std::size_t index_of(CharClass c) { return static_cast<std::size_t>(c); }

inline constexpr std::string_view name_of(CharClass c) {
    switch (c) {
    case CharClass::Number: return "Number";
    case CharClass::Alphabetic: return "Alphabetic";
    case CharClass::Katakana: return "Katakana";
    case CharClass::Hiragana: return "Hiragana";
    case CharClass::Kanji: return "Kanji";
    case CharClass::Symbol: return "Symbol";
    case CharClass::Emoji: return "Emoji";
    case CharClass::Whitespace: return "Whitespace";
    }
    return "?";
}

inline std::optional<CharClass> class_from_name(std::string_view s) {
    for (auto c : {CharClass::Number, CharClass::Alphabetic, CharClass::Katakana, CharClass::Hiragana,
                   CharClass::Kanji, CharClass::Symbol, CharClass::Emoji, CharClass::Whitespace}) {
        if (name_of(c) == s) return c;
    }
    return std::nullopt;
}

inline constexpr std::string_view kBuiltinCharClassTable =
    "# charclass table v1\n"
    "# start_hex\tend_hex\tclass\n"
    "0041\t005A\tAlphabetic\n"
    "0061\t007A\tAlphabetic\n"
    "00C0\t00D6\tAlphabetic\n"
    "00D8\t00F6\tAlphabetic\n"
    "00F8\t00FF\tAlphabetic\n"
    "3005\t3005\tKanji\n"
    "3040\t309F\tHiragana\n"
    "30A0\t30FA\tKatakana\n"
    "30FB\t30FB\tSymbol\n"
    "30FC\t30FF\tKatakana\n"
    "31F0\t31FF\tKatakana\n"
    "3400\t4DBF\tKanji\n"
    "4E00\t9FFF\tKanji\n"
    "FF66\tFF9D\tKatakana\n"
    "20000\t2A6DF\tKanji\n"
    "2A700\t2EBEF\tKanji\n"
    "30000\t3134F\tKanji\n";

class CharClassTable {
public:
    struct Range {
        char32_t start;
        char32_t end;  // inclusive
        CharClass cls;
    };

    CharClassTable() = default;

    static CharClassTable parse(std::string_view tsv) {
        CharClassTable t;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos < tsv.size()) {
            const std::size_t nl = std::min(tsv.find('\n', pos), tsv.size());
            std::string_view line = tsv.substr(pos, nl - pos);
            pos = nl + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty() || line.front() == '#') continue;

            std::array<std::string_view, 3> f{};
            std::size_t n = 0;
            std::size_t p = 0;
            while (n < 3) {
                const std::size_t tab = line.find('\t', p);
                f[n++] = line.substr(p, tab == std::string_view::npos ? std::string_view::npos : tab - p);
                if (tab == std::string_view::npos) break;
                p = tab + 1;
            }
            const auto fail = [&](const std::string& why) {
                return std::runtime_error("charclass line " + std::to_string(line_no) + ": " + why);
            };
            if (n != 3) throw fail("expected start_hex<TAB>end_hex<TAB>class");
            const auto hex = [&](std::string_view s) {
                std::uint32_t v = 0;
                auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
                if (ec != std::errc{} || ptr != s.data() + s.size() || v > 0x10FFFF) throw fail("bad code point");
                return static_cast<char32_t>(v);
            };
            const char32_t start = hex(f[0]);
            const char32_t end = hex(f[1]);
            if (end < start) throw fail("range end before start");
            const auto cls = class_from_name(f[2]);
            if (!cls) throw fail("unknown class '" + std::string(f[2]) + "'");
            t.ranges_.push_back({start, end, *cls});
        }
        std::sort(t.ranges_.begin(), t.ranges_.end(), [](const Range& a, const Range& b) { return a.start < b.start; });
        for (std::size_t i = 1; i < t.ranges_.size(); ++i) {
            if (t.ranges_[i].start <= t.ranges_[i - 1].end) throw std::runtime_error("charclass ranges overlap");
        }
        return t;
    }

    std::optional<CharClass> lookup(char32_t cp) const {
        auto it = std::upper_bound(ranges_.begin(), ranges_.end(), cp,
                                   [](char32_t c, const Range& r) { return c < r.start; });
        if (it == ranges_.begin()) return std::nullopt;
        --it;
        if (cp <= it->end) return it->cls;
        return std::nullopt;
    }

    const std::vector<Range>& ranges() const noexcept { return ranges_; }

private:
    std::vector<Range> ranges_;
};

class CharClassifier {
public:
    explicit CharClassifier(CharClassTable table = CharClassTable::parse(kBuiltinCharClassTable))
        : table_(std::move(table)) {}

    CharClass classify(char32_t cp) const {
        if (unicode::is_whitespace(cp)) return CharClass::Whitespace;
        if (auto cls = table_.lookup(cp)) return *cls;
        if (unicode::has_emoji_presentation(cp)) return CharClass::Emoji;
        if (unicode::is_decimal_digit(cp)) return CharClass::Number;
        if (!unicode::detail::nfkc_instance().isInert(static_cast<UChar32>(cp))) {
            const auto folded = unicode::nfkc_scalar(cp);
            if (!folded.empty() && folded != std::u32string(1, cp)) {
                const char32_t head = folded.front();
                if (unicode::is_decimal_digit(head)) return CharClass::Number;
                if (auto cls = table_.lookup(head); cls && *cls != CharClass::Whitespace) return *cls;
            }
        }
        return CharClass::Symbol;
    }

    const CharClassTable& table() const noexcept { return table_; }

private:
    CharClassTable table_;
};

inline const CharClassifier& default_classifier() {
    static const CharClassifier instance;
    return instance;
}

inline CharClass classify_char(char32_t cp) { return default_classifier().classify(cp); }

}  // namespace liwcad::text
