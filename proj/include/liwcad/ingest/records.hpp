#pragma once

// Ad-performance records from CSV (RFC 4180, header row) or JSON Lines.
//
// Columns / fields:
//   ad_id, product_category, main_text, in_image_text, image_ref,
//   impressions, clicks
// plus optional pre-tokenized `main_tokens` / `in_image_tokens` (JSON arrays,
// or space-separated in CSV) which bypass the built-in segmenter.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "liwcad/digest.hpp"
#include "liwcad/utf8.hpp"

namespace liwcad::ingest {

inline constexpr std::uint64_t kDefaultMinImpressions = 10000;
inline constexpr std::size_t kMainTextLimit = 125;

struct AdRecord {
    std::string ad_id;
    std::string product_category;
    std::string main_text;
    std::optional<std::string> in_image_text;
    std::optional<std::string> image_ref;
    std::uint64_t impressions = 0;
    std::uint64_t clicks = 0;
    std::optional<std::vector<std::string>> main_tokens;
    std::optional<std::vector<std::string>> in_image_tokens;

    friend bool operator==(const AdRecord&, const AdRecord&) = default;
};

struct RecordError {
    std::size_t line = 0;
    std::string reason;
};

struct RecordWarning {
    std::size_t line = 0;
    std::string ad_id;
    std::string message;
};

struct ParseResult {
    std::vector<AdRecord> records;
    std::vector<RecordError> errors;
    std::vector<RecordWarning> warnings;
    std::size_t rows = 0;  // data rows seen; records.size() + errors.size()
    std::string source_digest;
};

enum class RecordFormat { Csv, Jsonl };

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::vector<AdRecord> records;
    std::string source_digest;
    std::uint64_t filter_threshold = 0;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
};

namespace detail {

inline constexpr std::array<std::string_view, 5> kRequired{"ad_id", "product_category", "main_text", "impressions",
                                                           "clicks"};

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
    bool unterminated = false;
};

// RFC 4180 reader. Quoted fields may span lines; line numbers refer to the
// physical line a row starts on.
inline std::vector<CsvRow> read_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t pos = 0;
    std::size_t line = 1;
    while (pos < text.size()) {
        CsvRow row;
        row.line = line;
        std::string field;
        bool in_quotes = false;
        bool row_done = false;
        while (!row_done) {
            if (pos >= text.size()) {
                row.unterminated = in_quotes;
                row.fields.push_back(std::move(field));
                break;
            }
            const char c = text[pos];
            if (in_quotes) {
                if (c == '"') {
                    if (pos + 1 < text.size() && text[pos + 1] == '"') {
                        field.push_back('"');
                        pos += 2;
                    } else {
                        in_quotes = false;
                        ++pos;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                    ++pos;
                }
                continue;
            }
            switch (c) {
            case '"':
                in_quotes = true;
                ++pos;
                break;
            case ',':
                row.fields.push_back(std::move(field));
                field.clear();
                ++pos;
                break;
            case '\r':
                ++pos;
                break;
            case '\n':
                row.fields.push_back(std::move(field));
                ++pos;
                ++line;
                row_done = true;
                break;
            default:
                field.push_back(c);
                ++pos;
            }
        }
        const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !row.unterminated;
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

inline std::optional<std::uint64_t> parse_count(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string> split_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t next = std::min(s.find(' ', pos), s.size());
        if (next > pos) out.emplace_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

struct RawFields {
    std::string ad_id, product_category, main_text;
    std::optional<std::string> in_image_text, image_ref;
    std::string impressions, clicks;
    std::optional<std::vector<std::string>> main_tokens, in_image_tokens;
};

// Shared validation for both formats. Returns the reason on rejection.
inline std::optional<std::string> validate(RawFields raw, std::size_t line, std::unordered_set<std::string>& seen_ids,
                                           ParseResult& out) {
    if (raw.ad_id.empty()) return "empty ad_id";
    for (const std::string* s : {&raw.ad_id, &raw.product_category, &raw.main_text}) {
        if (!utf8::is_valid(*s)) return "invalid UTF-8";
    }
    if (raw.in_image_text && !utf8::is_valid(*raw.in_image_text)) return "invalid UTF-8";
    const auto impressions = parse_count(raw.impressions);
    if (!impressions) return "impressions is not a non-negative integer";
    const auto clicks = parse_count(raw.clicks);
    if (!clicks) return "clicks is not a non-negative integer";
    if (*impressions == 0) return "zero impressions (CTR undefined)";
    if (*clicks > *impressions) return "clicks exceed impressions";
    if (!seen_ids.insert(raw.ad_id).second) return "duplicate ad_id '" + raw.ad_id + "'";

    if (utf8::count_scalars(raw.main_text) > kMainTextLimit) {
        out.warnings.push_back({line, raw.ad_id, "main_text exceeds " + std::to_string(kMainTextLimit) + " characters"});
    }
    if (raw.in_image_text && raw.in_image_text->empty()) raw.in_image_text.reset();
    if (raw.image_ref && raw.image_ref->empty()) raw.image_ref.reset();

    out.records.push_back(AdRecord{std::move(raw.ad_id), std::move(raw.product_category), std::move(raw.main_text),
                                   std::move(raw.in_image_text), std::move(raw.image_ref), *impressions, *clicks,
                                   std::move(raw.main_tokens), std::move(raw.in_image_tokens)});
    return std::nullopt;
}

inline void parse_csv(std::string_view text, ParseResult& out) {
    auto rows = read_csv(text);
    if (rows.empty()) throw SchemaError("missing CSV header row");
    std::vector<std::string> header = rows.front().fields;
    for (auto& h : header) {
        while (!h.empty() && (h.back() == ' ')) h.pop_back();
        while (!h.empty() && (h.front() == ' ')) h.erase(h.begin());
    }
    const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::string> missing;
    for (auto name : kRequired) {
        if (!column(name)) missing.emplace_back(name);
    }
    if (!missing.empty()) {
        std::string msg = "missing required column(s):";
        for (const auto& m : missing) msg += " " + m;
        throw SchemaError(msg);
    }
    const auto c_id = *column("ad_id");
    const auto c_cat = *column("product_category");
    const auto c_main = *column("main_text");
    const auto c_imp = *column("impressions");
    const auto c_clk = *column("clicks");
    const auto c_img_text = column("in_image_text");
    const auto c_img_ref = column("image_ref");
    const auto c_main_tok = column("main_tokens");
    const auto c_img_tok = column("in_image_tokens");

    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        auto& row = rows[r];
        ++out.rows;
        if (row.unterminated) {
            out.errors.push_back({row.line, "unterminated quoted field"});
            continue;
        }
        if (row.fields.size() != header.size()) {
            out.errors.push_back({row.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                                std::to_string(row.fields.size())});
            continue;
        }
        RawFields raw;
        raw.ad_id = row.fields[c_id];
        raw.product_category = row.fields[c_cat];
        raw.main_text = row.fields[c_main];
        raw.impressions = row.fields[c_imp];
        raw.clicks = row.fields[c_clk];
        if (c_img_text) raw.in_image_text = row.fields[*c_img_text];
        if (c_img_ref) raw.image_ref = row.fields[*c_img_ref];
        if (c_main_tok && !row.fields[*c_main_tok].empty()) raw.main_tokens = split_tokens(row.fields[*c_main_tok]);
        if (c_img_tok && !row.fields[*c_img_tok].empty()) raw.in_image_tokens = split_tokens(row.fields[*c_img_tok]);
        if (auto reason = validate(std::move(raw), row.line, seen, out)) out.errors.push_back({row.line, *reason});
    }
}

inline void parse_jsonl(std::string_view text, ParseResult& out) {
    using nlohmann::json;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty()) continue;
        ++out.rows;

        const json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            out.errors.push_back({line_no, "not a JSON object"});
            continue;
        }
        const auto text_field = [&](const char* key) -> std::optional<std::string> {
            auto it = obj.find(key);
            if (it == obj.end() || it->is_null()) return std::nullopt;
            if (it->is_string()) return it->get<std::string>();
            return std::string{};
        };
        const auto count_field = [&](const char* key) -> std::optional<std::string> {
            auto it = obj.find(key);
            if (it == obj.end() || it->is_null()) return std::nullopt;
            if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
            if (it->is_string()) return it->get<std::string>();
            return std::string("invalid");
        };
        const auto token_field = [&](const char* key) -> std::optional<std::vector<std::string>> {
            auto it = obj.find(key);
            if (it == obj.end() || !it->is_array()) return std::nullopt;
            std::vector<std::string> toks;
            for (const auto& t : *it) {
                if (t.is_string() && !t.get<std::string>().empty()) toks.push_back(t.get<std::string>());
            }
            return toks;
        };

        std::string missing;
        for (auto name : kRequired) {
            if (!obj.contains(std::string(name)) || obj.at(std::string(name)).is_null()) missing += " " + std::string(name);
        }
        if (!missing.empty()) {
            out.errors.push_back({line_no, "missing field(s):" + missing});
            continue;
        }
        for (const char* key : {"ad_id", "product_category", "main_text"}) {
            if (!obj.at(key).is_string()) missing += std::string(" ") + key;
        }
        if (!missing.empty()) {
            out.errors.push_back({line_no, "non-string field(s):" + missing});
            continue;
        }

        RawFields raw;
        raw.ad_id = *text_field("ad_id");
        raw.product_category = *text_field("product_category");
        raw.main_text = *text_field("main_text");
        raw.in_image_text = text_field("in_image_text");
        raw.image_ref = text_field("image_ref");
        raw.impressions = *count_field("impressions");
        raw.clicks = *count_field("clicks");
        raw.main_tokens = token_field("main_tokens");
        raw.in_image_tokens = token_field("in_image_tokens");
        if (auto reason = validate(std::move(raw), line_no, seen, out)) out.errors.push_back({line_no, *reason});
    }
}

}  // namespace detail

// Malformed rows become RecordErrors; only a missing header or missing
// required CSV columns abort (SchemaError).
inline ParseResult parse_records(std::string_view raw, RecordFormat format) {
    ParseResult out;
    out.source_digest = sha256_hex(raw);
    raw = utf8::strip_bom(raw);
    if (format == RecordFormat::Csv) {
        detail::parse_csv(raw, out);
    } else {
        detail::parse_jsonl(raw, out);
    }
    return out;
}

inline RecordFormat format_for_path(std::string_view path) {
    const auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
    };
    return ends_with(".jsonl") || ends_with(".ndjson") || ends_with(".json") ? RecordFormat::Jsonl : RecordFormat::Csv;
}

// Keeps records with impressions >= threshold; "below" is strict.
inline Dataset filter_by_impressions(std::vector<AdRecord> records, std::uint64_t threshold = kDefaultMinImpressions,
                                     std::string source_digest = {}) {
    Dataset ds;
    ds.filter_threshold = threshold;
    ds.source_digest = std::move(source_digest);
    ds.records.reserve(records.size());
    for (auto& r : records) {
        if (r.impressions >= threshold) ds.records.push_back(std::move(r));
    }
    return ds;
}

inline Dataset filter_by_impressions(const Dataset& ds, std::uint64_t threshold) {
    return filter_by_impressions(ds.records, threshold, ds.source_digest);
}

}  // namespace liwcad::ingest
