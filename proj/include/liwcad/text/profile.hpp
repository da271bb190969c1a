#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "liwcad/text/charclass.hpp"
#include "liwcad/utf8.hpp"

namespace liwcad::text {

// One counted character: a single scalar, or a whole emoji sequence
// (VS16-qualified base, skin-tone modifier, keycap, ZWJ chain, flag pair).
struct CharUnit {
    std::size_t begin = 0;  // byte offsets into the source
    std::size_t end = 0;
    CharClass cls = CharClass::Symbol;
};

namespace detail {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char32_t peek() const { return utf8::decode(text, pos).scalar; }
    std::size_t peek_len() const { return utf8::decode(text, pos).length; }
    void advance() { pos += peek_len(); }
    bool eat(char32_t cp) {
        if (!done() && peek() == cp) {
            advance();
            return true;
        }
        return false;
    }
};

// Consumes the modifiers that may trail an emoji base.
inline void eat_emoji_tail(Cursor& cur) {
    cur.eat(unicode::kVariationSelector16);
    if (!cur.done() && unicode::is_emoji_modifier(cur.peek())) cur.advance();
    cur.eat(unicode::kCombiningKeycap);
    while (!cur.done() && cur.peek() >= 0xE0020 && cur.peek() <= 0xE007F) cur.advance();  // tag sequence
}

}  // namespace detail

template <typename Fn>
void for_each_unit(std::string_view text, const CharClassifier& classifier, Fn&& fn) {
    detail::Cursor cur{text, 0};
    while (!cur.done()) {
        const std::size_t begin = cur.pos;
        const char32_t cp = cur.peek();
        cur.advance();
        CharClass cls = classifier.classify(cp);

        if (cls == CharClass::Whitespace) {
            fn(CharUnit{begin, cur.pos, cls});
            continue;
        }

        const bool qualified = !cur.done() && cur.peek() == unicode::kVariationSelector16;
        if (cls == CharClass::Emoji || qualified) {
            cls = CharClass::Emoji;
            if (unicode::is_regional_indicator(cp) && !cur.done() && unicode::is_regional_indicator(cur.peek())) {
                cur.advance();
            } else {
                detail::eat_emoji_tail(cur);
                while (!cur.done() && cur.peek() == unicode::kZeroWidthJoiner) {
                    detail::Cursor look = cur;
                    look.advance();
                    if (look.done() || unicode::is_whitespace(look.peek())) break;
                    look.advance();
                    cur = look;
                    detail::eat_emoji_tail(cur);
                }
            }
        }
        fn(CharUnit{begin, cur.pos, cls});
    }
}

template <typename Fn>
void for_each_unit(std::string_view text, Fn&& fn) {
    for_each_unit(text, default_classifier(), std::forward<Fn>(fn));
}

struct CharProfile {
    std::array<std::uint64_t, 7> counts{};
    std::uint64_t total = 0;
    std::array<double, 7> proportions{};

    std::uint64_t count(CharClass c) const { return counts[index_of(c)]; }
    double proportion(CharClass c) const { return proportions[index_of(c)]; }

    friend bool operator==(const CharProfile&, const CharProfile&) = default;
};

inline CharProfile profile_text(std::string_view text, const CharClassifier& classifier) {
    CharProfile p;
    for_each_unit(text, classifier, [&](const CharUnit& u) {
        if (u.cls == CharClass::Whitespace) return;
        ++p.counts[index_of(u.cls)];
        ++p.total;
    });
    if (p.total > 0) {
        for (std::size_t i = 0; i < p.counts.size(); ++i) {
            p.proportions[i] = static_cast<double>(p.counts[i]) / static_cast<double>(p.total);
        }
    }
    return p;
}

inline CharProfile profile_text(std::string_view text) { return profile_text(text, default_classifier()); }

// Per-field means over a corpus: mean counts and the mean of per-text
// proportions. Texts with no countable characters contribute zeros.
struct MeanCharProfile {
    std::array<double, 7> mean_counts{};
    std::array<double, 7> mean_proportions{};
    double mean_total = 0.0;
    std::size_t texts = 0;
};

inline MeanCharProfile mean_profile(const std::vector<CharProfile>& profiles) {
    MeanCharProfile m;
    m.texts = profiles.size();
    if (profiles.empty()) return m;
    for (const auto& p : profiles) {
        for (std::size_t i = 0; i < 7; ++i) {
            m.mean_counts[i] += static_cast<double>(p.counts[i]);
            m.mean_proportions[i] += p.proportions[i];
        }
        m.mean_total += static_cast<double>(p.total);
    }
    const auto n = static_cast<double>(profiles.size());
    for (std::size_t i = 0; i < 7; ++i) {
        m.mean_counts[i] /= n;
        m.mean_proportions[i] /= n;
    }
    m.mean_total /= n;
    return m;
}

}  // namespace liwcad::text
