#pragma once

// LIWC-format dictionary files.
//
//   %
//   1<TAB>affect
//   2<TAB>negemo
//   %
//   happ*<TAB>1
//   sad<TAB>1<TAB>2
//
// The header is fenced by lines holding only `%`. Body words ending in `*`
// are wildcard (prefix) entries. Blank lines and `#` comments are skipped.
// Category parents are not part of the file; they come from a name-based
// hierarchy table (the LIWC2015 layout by default, overridable by a sidecar
// file of `child<TAB>parent` lines).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "liwcad/digest.hpp"
#include "liwcad/utf8.hpp"

namespace liwcad::liwc {

using CategoryId = std::uint32_t;

struct Category {
    CategoryId id = 0;
    std::string name;
    std::optional<CategoryId> parent;

    friend bool operator==(const Category&, const Category&) = default;
};

struct WordEntry {
    std::string stem;
    bool wildcard = false;
    std::vector<CategoryId> categories;  // sorted, unique

    friend bool operator==(const WordEntry&, const WordEntry&) = default;
};

struct Dictionary {
    std::vector<Category> categories;
    std::vector<WordEntry> entries;
    std::string source_digest;

    const Category* find(CategoryId id) const {
        for (const auto& c : categories) {
            if (c.id == id) return &c;
        }
        return nullptr;
    }

    std::optional<CategoryId> id_of(std::string_view name) const {
        for (const auto& c : categories) {
            if (c.name == name) return c.id;
        }
        return std::nullopt;
    }

    // Strict ancestors of `id`, nearest first.
    std::vector<CategoryId> ancestors(CategoryId id) const {
        std::vector<CategoryId> out;
        const Category* c = find(id);
        while (c != nullptr && c->parent) {
            out.push_back(*c->parent);
            c = find(*c->parent);
        }
        return out;
    }
};

class DictionaryError : public std::runtime_error {
public:
    DictionaryError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    // 1-based line of the offending input, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// child name -> parent name
using Hierarchy = std::map<std::string, std::string, std::less<>>;

inline const Hierarchy& liwc2015_hierarchy() {
    static const Hierarchy table = [] {
        Hierarchy h;
        const auto add = [&h](std::string_view parent, std::initializer_list<std::string_view> children) {
            for (auto child : children) h.emplace(std::string(child), std::string(parent));
        };
        add("function", {"pronoun", "article", "prep", "auxverb", "adverb", "conj", "negate"});
        add("pronoun", {"ppron", "ipron"});
        add("ppron", {"i", "we", "you", "shehe", "they"});
        add("affect", {"posemo", "negemo"});
        add("negemo", {"anx", "anger", "sad"});
        add("social", {"family", "friend", "female", "male"});
        add("cogproc", {"insight", "cause", "discrep", "tentat", "certain", "differ"});
        add("percept", {"see", "hear", "feel"});
        add("bio", {"body", "health", "sexual", "ingest"});
        add("drives", {"affiliation", "achieve", "power", "reward", "risk"});
        add("timeorient", {"focuspast", "focuspresent", "focusfuture"});
        add("relativ", {"motion", "space", "time"});
        add("pconcern", {"work", "leisure", "home", "money", "relig", "death"});
        add("informal", {"swear", "netspeak", "assent", "nonflu", "filler"});
        return h;
    }();
    return table;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

// Splits on tabs when the line has any, otherwise on runs of spaces.
inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    const char sep = line.find('\t') != std::string_view::npos ? '\t' : ' ';
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t next = std::min(line.find(sep, pos), line.size());
        const auto field = trim(line.substr(pos, next - pos));
        if (!field.empty()) out.push_back(field);
        pos = next + 1;
    }
    return out;
}

inline std::optional<CategoryId> parse_id(std::string_view s) {
    CategoryId v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) return std::nullopt;
    return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        fn(++line_no, text.substr(pos, end - pos));
        pos = end + 1;
    }
}

inline void resolve_parents(std::vector<Category>& categories, const Hierarchy& hierarchy) {
    std::unordered_map<std::string, CategoryId> by_name;
    for (const auto& c : categories) by_name.emplace(c.name, c.id);

    for (auto& c : categories) {
        c.parent.reset();
        std::set<std::string, std::less<>> seen{c.name};
        auto it = hierarchy.find(c.name);
        while (it != hierarchy.end() && !it->second.empty() && it->second != "-") {
            const std::string& parent = it->second;
            if (!seen.insert(parent).second) {
                throw DictionaryError(0, "category hierarchy has a cycle through '" + parent + "'");
            }
            if (auto found = by_name.find(parent); found != by_name.end()) {
                c.parent = found->second;
                break;
            }
            // Parent not in this dictionary: attach to the nearest present ancestor.
            it = hierarchy.find(parent);
        }
    }

    std::unordered_map<CategoryId, std::optional<CategoryId>> parent_of;
    for (const auto& c : categories) parent_of.emplace(c.id, c.parent);
    for (const auto& c : categories) {
        std::size_t steps = 0;
        auto p = c.parent;
        while (p) {
            if (++steps > categories.size()) {
                throw DictionaryError(0, "category hierarchy has a cycle through '" + c.name + "'");
            }
            p = parent_of.at(*p);
        }
    }
}

}  // namespace detail

// Parses a sidecar of `child<TAB>parent` lines. A parent of `-` detaches the
// child. Entries are merged over `base`.
inline Hierarchy parse_hierarchy(std::string_view raw, const Hierarchy& base = liwc2015_hierarchy()) {
    raw = utf8::strip_bom(raw);
    if (auto bad = utf8::first_invalid(raw)) {
        throw DictionaryError(0, "hierarchy file is not valid UTF-8 (byte offset " + std::to_string(*bad) + ")");
    }
    Hierarchy out = base;
    detail::for_each_line(raw, [&](std::size_t line_no, std::string_view line) {
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') return;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 2) throw DictionaryError(line_no, "expected 'child<TAB>parent'");
        out[std::string(fields[0])] = std::string(fields[1]);
    });
    return out;
}

inline Dictionary parse_dictionary(std::string_view raw, const Hierarchy& hierarchy = liwc2015_hierarchy()) {
    Dictionary dict;
    dict.source_digest = sha256_hex(raw);
    raw = utf8::strip_bom(raw);

    enum class State { BeforeHeader, Header, Body } state = State::BeforeHeader;
    std::size_t header_open_line = 0;
    std::map<CategoryId, std::size_t> id_index;
    std::map<std::pair<std::string, bool>, std::size_t> entry_index;

    detail::for_each_line(raw, [&](std::size_t line_no, std::string_view line) {
        if (!utf8::is_valid(line)) throw DictionaryError(line_no, "invalid UTF-8 (only UTF-8 dictionaries are supported)");
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') return;

        switch (state) {
        case State::BeforeHeader:
            if (line != "%") throw DictionaryError(line_no, "expected '%' to open the category header");
            header_open_line = line_no;
            state = State::Header;
            return;

        case State::Header: {
            if (line == "%") {
                state = State::Body;
                return;
            }
            const auto fields = detail::split_fields(line);
            if (fields.size() < 2) throw DictionaryError(line_no, "expected '<id><TAB><name>' in header");
            const auto id = detail::parse_id(fields[0]);
            if (!id) throw DictionaryError(line_no, "non-numeric category id '" + std::string(fields[0]) + "'");
            std::string_view name = fields[1];
            if (auto slash = name.find('/'); slash != std::string_view::npos) name = name.substr(0, slash);
            if (name.empty()) throw DictionaryError(line_no, "empty category name");
            if (id_index.count(*id)) throw DictionaryError(line_no, "duplicate category id " + std::to_string(*id));
            if (dict.id_of(name)) throw DictionaryError(line_no, "duplicate category name '" + std::string(name) + "'");
            id_index.emplace(*id, dict.categories.size());
            dict.categories.push_back({*id, std::string(name), std::nullopt});
            return;
        }

        case State::Body: {
            if (line == "%") throw DictionaryError(line_no, "unexpected '%' after the header was closed");
            const auto fields = detail::split_fields(line);
            std::string_view word = fields.front();
            bool wildcard = false;
            if (word.back() == '*') {
                wildcard = true;
                word.remove_suffix(1);
            }
            if (word.empty()) throw DictionaryError(line_no, "empty word");
            if (word.find('*') != std::string_view::npos) {
                throw DictionaryError(line_no, "'*' is only allowed at the end of a word");
            }
            if (fields.size() < 2) throw DictionaryError(line_no, "word '" + std::string(word) + "' has no categories");

            std::vector<CategoryId> cats;
            for (std::size_t i = 1; i < fields.size(); ++i) {
                const auto id = detail::parse_id(fields[i]);
                if (!id) throw DictionaryError(line_no, "non-numeric category id '" + std::string(fields[i]) + "'");
                if (!id_index.count(*id)) throw DictionaryError(line_no, "unknown category id " + std::to_string(*id));
                cats.push_back(*id);
            }

            auto key = std::make_pair(std::string(word), wildcard);
            if (auto it = entry_index.find(key); it != entry_index.end()) {
                auto& existing = dict.entries[it->second].categories;
                existing.insert(existing.end(), cats.begin(), cats.end());
                std::sort(existing.begin(), existing.end());
                existing.erase(std::unique(existing.begin(), existing.end()), existing.end());
                return;
            }
            std::sort(cats.begin(), cats.end());
            cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
            entry_index.emplace(key, dict.entries.size());
            dict.entries.push_back({std::move(key.first), wildcard, std::move(cats)});
            return;
        }
        }
    });

    if (state == State::BeforeHeader) throw DictionaryError(0, "no categories (missing '%' header)");
    if (state == State::Header) throw DictionaryError(header_open_line, "unclosed '%' header");
    if (dict.categories.empty()) throw DictionaryError(0, "no categories");
    if (dict.entries.empty()) throw DictionaryError(0, "no entries");

    detail::resolve_parents(dict.categories, hierarchy);
    return dict;
}

// Inverse of parse_dictionary up to whitespace, comments and the parent
// links (which are re-derived from the hierarchy table on parse).
inline std::string serialize_dictionary(const Dictionary& dict) {
    std::string out = "%\n";
    for (const auto& c : dict.categories) out += std::to_string(c.id) + "\t" + c.name + "\n";
    out += "%\n";
    for (const auto& e : dict.entries) {
        out += e.stem;
        if (e.wildcard) out += '*';
        for (auto id : e.categories) out += "\t" + std::to_string(id);
        out += '\n';
    }
    return out;
}

}  // namespace liwcad::liwc
