#pragma once

// Test-only reference implementations. These deliberately avoid the library's
// data structures (no trie, no precomputed closures, long double sums) so
// they can check it independently.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "liwcad/liwc/dictionary.hpp"
#include "liwcad/unicode.hpp"

namespace liwcad::testing {

// Linear scan over every entry, then walk parent links one by one.
inline std::vector<liwc::CategoryId> naive_match(const liwc::Dictionary& dict, const std::string& raw_token) {
    const std::string token = unicode::normalize_token(raw_token);
    std::set<liwc::CategoryId> hits;
    for (const auto& e : dict.entries) {
        const std::string stem = unicode::normalize_token(e.stem);
        const bool match = e.wildcard ? token.size() >= stem.size() && token.compare(0, stem.size(), stem) == 0
                                      : token == stem;
        if (!match) continue;
        for (auto id : e.categories) {
            hits.insert(id);
            const liwc::Category* c = dict.find(id);
            while (c != nullptr && c->parent) {
                hits.insert(*c->parent);
                c = dict.find(*c->parent);
            }
        }
    }
    return {hits.begin(), hits.end()};
}

// Direct deviation form of the coefficient in long double. nullopt when a
// sum of squares is zero.
inline std::optional<long double> naive_pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    long double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n;
    const long double my = sy / n;
    long double num = 0, dx2 = 0, dy2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        num += dx * dy;
        dx2 += dx * dx;
        dy2 += dy * dy;
    }
    if (dx2 == 0 || dy2 == 0) return std::nullopt;
    return num / std::sqrt(dx2 * dy2);
}

// Raw-sum form, n*Sxy - Sx*Sy over the root of the product of the two
// variance terms; agrees with the deviation form on well-conditioned data.
inline long double sum_form_pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Random dictionaries over a tiny alphabet so exact/wildcard overlaps and
// shared prefixes are common. Category names come from the LIWC2015 table
// so the hierarchy roll-up is exercised.
inline liwc::Dictionary random_dictionary(std::mt19937_64& rng, std::size_t n_entries) {
    static const std::vector<std::string> kNames{"affect", "posemo", "negemo", "anx",     "sad",   "social",
                                                 "cogproc", "cause",  "bio",    "body",    "health", "drives",
                                                 "reward",  "relativ", "time",  "pconcern", "money", "death",
                                                 "informal", "netspeak", "custom1", "custom2"};
    std::vector<std::string> names = kNames;
    std::shuffle(names.begin(), names.end(), rng);
    const std::size_t n_cats = 3 + rng() % (names.size() - 3);

    std::string raw = "%\n";
    std::vector<liwc::CategoryId> ids;
    for (std::size_t i = 0; i < n_cats; ++i) {
        const liwc::CategoryId id = static_cast<liwc::CategoryId>(10 + i * 3 + rng() % 3);
        ids.push_back(id);
        raw += std::to_string(id) + "\t" + names[i] + "\n";
    }
    raw += "%\n";

    static const std::vector<std::string> kAlphabet{"a", "b", "A", "ａ", "あ", "ア", "ｱ", "悩"};
    std::set<std::pair<std::string, bool>> seen;
    std::size_t made = 0;
    while (made < n_entries) {
        std::string stem;
        const std::size_t len = 1 + rng() % 4;
        for (std::size_t k = 0; k < len; ++k) stem += kAlphabet[rng() % kAlphabet.size()];
        const bool wildcard = rng() % 2 == 0;
        if (!seen.insert({stem, wildcard}).second) continue;
        raw += stem + (wildcard ? "*" : "");
        const std::size_t n = 1 + rng() % 3;
        for (std::size_t k = 0; k < n; ++k) raw += "\t" + std::to_string(ids[rng() % ids.size()]);
        raw += "\n";
        ++made;
    }
    return liwc::parse_dictionary(raw);
}

inline std::string random_token(std::mt19937_64& rng) {
    static const std::vector<std::string> kAlphabet{"a", "b", "A", "B", "ａ", "あ", "ア", "ｱ", "悩", "c"};
    std::string t;
    const std::size_t len = 1 + rng() % 6;
    for (std::size_t k = 0; k < len; ++k) t += kAlphabet[rng() % kAlphabet.size()];
    return t;
}

}  // namespace liwcad::testing
