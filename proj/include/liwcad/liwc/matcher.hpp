#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liwcad/liwc/dictionary.hpp"
#include "liwcad/unicode.hpp"

namespace liwcad::liwc {

using CategorySet = std::vector<CategoryId>;  // sorted, unique

struct CategoryVector {
    std::map<CategoryId, std::uint64_t> counts;
    std::uint64_t total_tokens = 0;
    std::map<CategoryId, double> percentages;

    std::uint64_t count(CategoryId id) const {
        auto it = counts.find(id);
        return it == counts.end() ? 0 : it->second;
    }
    double percent(CategoryId id) const {
        auto it = percentages.find(id);
        return it == percentages.end() ? 0.0 : it->second;
    }

    friend bool operator==(const CategoryVector&, const CategoryVector&) = default;
};

// Byte trie over normalized stems. Immutable once built; share freely
// between threads.
class Matcher {
public:
    explicit Matcher(const Dictionary& dict) {
        nodes_.emplace_back();
        for (const auto& c : dict.categories) {
            CategorySet closure{c.id};
            for (auto a : dict.ancestors(c.id)) closure.push_back(a);
            std::sort(closure.begin(), closure.end());
            closure_.emplace(c.id, std::move(closure));
            category_ids_.push_back(c.id);
        }
        std::sort(category_ids_.begin(), category_ids_.end());

        for (const auto& e : dict.entries) {
            const std::string stem = unicode::normalize_token(e.stem);
            if (stem.empty()) continue;
            std::uint32_t node = 0;
            for (unsigned char byte : stem) node = child_or_insert(node, byte);
            auto& target = e.wildcard ? nodes_[node].wildcard : nodes_[node].exact;
            target = merge(target, e.categories);
            nodes_[node].terminal = true;
            max_stem_bytes_ = std::max(max_stem_bytes_, stem.size());
        }
    }

    // Categories of an already-normalized token, ancestors included.
    CategorySet match_normalized(std::string_view token) const {
        CategorySet hits;
        std::uint32_t node = 0;
        std::size_t depth = 0;
        while (true) {
            const Node& n = nodes_[node];
            if (!n.wildcard.empty()) hits.insert(hits.end(), n.wildcard.begin(), n.wildcard.end());
            if (depth == token.size()) {
                hits.insert(hits.end(), n.exact.begin(), n.exact.end());
                break;
            }
            const auto next = child(node, static_cast<unsigned char>(token[depth]));
            if (!next) break;
            node = *next;
            ++depth;
        }
        return expand(hits);
    }

    CategorySet match(std::string_view token) const { return match_normalized(unicode::normalize_token(token)); }

    // Calls fn(len) for every stem that is a byte prefix of `normalized`,
    // shortest first.
    template <typename Fn>
    void for_each_stem_prefix(std::string_view normalized, Fn&& fn) const {
        std::uint32_t node = 0;
        for (std::size_t depth = 0; depth < normalized.size(); ++depth) {
            const auto next = child(node, static_cast<unsigned char>(normalized[depth]));
            if (!next) return;
            node = *next;
            if (nodes_[node].terminal) fn(depth + 1);
        }
    }

    std::size_t max_stem_bytes() const noexcept { return max_stem_bytes_; }
    const std::vector<CategoryId>& category_ids() const noexcept { return category_ids_; }

private:
    struct Node {
        std::vector<std::pair<unsigned char, std::uint32_t>> children;  // sorted by byte
        CategorySet exact;
        CategorySet wildcard;
        bool terminal = false;
    };

    static CategorySet merge(const CategorySet& a, const CategorySet& b) {
        CategorySet out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    std::optional<std::uint32_t> child(std::uint32_t node, unsigned char byte) const {
        const auto& kids = nodes_[node].children;
        auto it = std::lower_bound(kids.begin(), kids.end(), byte,
                                   [](const auto& kv, unsigned char b) { return kv.first < b; });
        if (it == kids.end() || it->first != byte) return std::nullopt;
        return it->second;
    }

    std::uint32_t child_or_insert(std::uint32_t node, unsigned char byte) {
        if (auto existing = child(node, byte)) return *existing;
        const auto index = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        auto& kids = nodes_[node].children;
        auto it = std::lower_bound(kids.begin(), kids.end(), byte,
                                   [](const auto& kv, unsigned char b) { return kv.first < b; });
        kids.insert(it, {byte, index});
        return index;
    }

    CategorySet expand(const CategorySet& hits) const {
        CategorySet out;
        for (auto id : hits) {
            auto it = closure_.find(id);
            if (it == closure_.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<Node> nodes_;
    std::map<CategoryId, CategorySet> closure_;
    std::vector<CategoryId> category_ids_;
    std::size_t max_stem_bytes_ = 0;
};

inline Matcher compile_matcher(const Dictionary& dict) { return Matcher(dict); }

inline CategorySet match_token(const Matcher& m, std::string_view token) { return m.match(token); }

// Every dictionary category appears in the result, zero or not.
inline CategoryVector tag_tokens(const Matcher& m, std::span<const std::string> tokens) {
    CategoryVector v;
    for (auto id : m.category_ids()) v.counts.emplace(id, 0);
    for (const auto& token : tokens) {
        if (token.empty()) continue;
        for (auto id : m.match(token)) ++v.counts[id];
    }
    v.total_tokens = tokens.size();
    for (const auto& [id, n] : v.counts) {
        v.percentages.emplace(id, v.total_tokens == 0 ? 0.0
                                                      : 100.0 * static_cast<double>(n) /
                                                            static_cast<double>(v.total_tokens));
    }
    return v;
}

}  // namespace liwcad::liwc
