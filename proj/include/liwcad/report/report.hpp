#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "liwcad/report/format.hpp"
#include "liwcad/stats.hpp"
#include "liwcad/text/profile.hpp"
#include "liwcad/version.hpp"

namespace liwcad::report {

inline constexpr std::string_view kReportSchema = "liwcad.report/1";
inline constexpr std::string_view kPlotSchema = "liwcad.plot/1";
inline constexpr double kDefaultHighlight = 0.15;

// Row order of the correlation tables.
inline constexpr std::array<std::string_view, 16> kCategoryOrder{
    "affect", "posemo", "negemo",  "home",    "money", "work",   "death",   "relig",
    "leisure", "social", "cogproc", "percept", "bio",   "drives", "relativ", "informal"};

enum class Format { Text, Markdown, Json };

inline std::optional<Format> format_from_name(std::string_view s) {
    if (s == "text" || s == "txt") return Format::Text;
    if (s == "markdown" || s == "md") return Format::Markdown;
    if (s == "json") return Format::Json;
    return std::nullopt;
}

struct Metadata {
    std::string tool_version{kVersion};
    std::string dataset_digest;
    std::string dictionary_digest;
    std::string hierarchy_digest;  // empty: built-in table
    std::string stoplist_digest;   // empty: no stop-list
    std::string charclass_digest;  // empty: built-in range table
    std::uint64_t min_impressions = 0;
    stats::ValueMode mode = stats::ValueMode::Percent;
    std::vector<stats::Field> fields;
    double highlight = kDefaultHighlight;
    std::size_t records_parsed = 0;
    std::size_t records_rejected = 0;
    std::size_t records_kept = 0;
};

struct ProductReport {
    std::string product_category;
    std::size_t records = 0;
    stats::FiveNumberSummary ctr_summary;
    std::map<stats::Field, text::MeanCharProfile> char_profiles;
    std::map<stats::Field, std::map<liwc::CategoryId, double>> category_means;
    std::optional<stats::CorrelationTable> correlations;  // absent when fewer than two records
};

struct ReportBundle {
    Metadata metadata;
    std::vector<liwc::Category> categories;
    std::vector<ProductReport> products;  // sorted by product_category
};

// Categories in rendering order: the fixed rows first, then any others in
// id order. Fixed rows missing from the dictionary are kept as nullopt.
inline std::vector<std::pair<std::string, std::optional<liwc::CategoryId>>> row_order(
    const std::vector<liwc::Category>& categories, bool include_others = true) {
    std::vector<std::pair<std::string, std::optional<liwc::CategoryId>>> rows;
    for (auto name : kCategoryOrder) {
        std::optional<liwc::CategoryId> id;
        for (const auto& c : categories) {
            if (c.name == name) id = c.id;
        }
        rows.emplace_back(std::string(name), id);
    }
    if (include_others) {
        std::vector<liwc::Category> rest;
        for (const auto& c : categories) {
            if (std::find(kCategoryOrder.begin(), kCategoryOrder.end(), c.name) == kCategoryOrder.end()) {
                rest.push_back(c);
            }
        }
        std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        for (const auto& c : rest) rows.emplace_back(c.name, c.id);
    }
    return rows;
}

inline std::string format_rho(const stats::Rho& rho) { return rho ? format_fixed(*rho, 3) : "-"; }

namespace detail {

inline std::size_t display_width(std::string_view s) { return utf8::count_scalars(s); }

inline std::string pad(std::string s, std::size_t width, bool left_align) {
    const std::size_t w = display_width(s);
    if (w >= width) return s;
    const std::string fill(width - w, ' ');
    return left_align ? s + fill : fill + s;
}

// Markdown pipe table or space-aligned plain text.
inline std::string render_grid(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                               Format fmt) {
    std::string out;
    if (fmt == Format::Markdown) {
        const auto line = [&](const std::vector<std::string>& cells) {
            out += "|";
            for (const auto& c : cells) out += " " + c + " |";
            out += "\n";
        };
        line(header);
        out += "|";
        for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
        out += "\n";
        for (const auto& r : rows) line(r);
        return out;
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (std::size_t i = 0; i < header.size(); ++i) widths[i] = display_width(header[i]);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], display_width(r[i]));
    }
    const auto line = [&](const std::vector<std::string>& cells) {
        std::string l;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) l += "  ";
            l += pad(cells[i], widths[i], i == 0);
        }
        while (!l.empty() && l.back() == ' ') l.pop_back();
        out += l + "\n";
    };
    line(header);
    std::size_t total = 0;
    for (auto w : widths) total += w;
    out += std::string(total + 2 * (widths.size() - 1), '-') + "\n";
    for (const auto& r : rows) line(r);
    return out;
}

inline std::string field_title(stats::Field f) { return f == stats::Field::Main ? "Main text" : "In-image text"; }

}  // namespace detail

// |rho| >= highlight_threshold is emphasized: **x** in Markdown, a trailing
// `*` in plain text. Undefined cells print "-".
inline std::string render_correlation_table(const stats::CorrelationTable& t, double highlight_threshold,
                                            Format fmt = Format::Markdown, bool include_others = true) {
    std::vector<std::string> header{"category"};
    for (auto f : t.fields) header.push_back(detail::field_title(f));

    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, id] : row_order(t.categories, include_others)) {
        std::vector<std::string> row{name};
        for (auto f : t.fields) {
            const stats::CorrelationCell* cell = id ? t.find(*id, f) : nullptr;
            if (cell == nullptr || !cell->rho) {
                row.emplace_back("-");
                continue;
            }
            std::string s = format_rho(cell->rho);
            if (std::fabs(*cell->rho) >= highlight_threshold) s = fmt == Format::Markdown ? "**" + s + "**" : s + "*";
            row.push_back(std::move(s));
        }
        rows.push_back(std::move(row));
    }
    return detail::render_grid(header, rows, fmt);
}

// "6.8 (9.2%)"; an exact zero count prints as "0".
inline std::string format_char_cell(double mean_count, double proportion) {
    const std::string count = mean_count == 0.0 ? "0" : format_fixed(mean_count, 1);
    return count + " (" + format_fixed(proportion * 100.0, 1) + "%)";
}

inline std::string render_char_table(const std::map<stats::Field, text::MeanCharProfile>& profiles,
                                     Format fmt = Format::Markdown) {
    static constexpr std::array<std::string_view, 7> kRowNames{
        "Numbers", "Alphabetic characters", "Katakana", "Hiragana", "Kanji", "Symbols", "Emoji"};

    std::vector<std::string> header{"class"};
    for (const auto& [f, p] : profiles) header.push_back(detail::field_title(f));

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < text::kPublicClasses.size(); ++i) {
        const auto idx = text::index_of(text::kPublicClasses[i]);
        std::vector<std::string> row{std::string(kRowNames[i])};
        for (const auto& [f, p] : profiles) row.push_back(format_char_cell(p.mean_counts[idx], p.mean_proportions[idx]));
        rows.push_back(std::move(row));
    }
    std::vector<std::string> total{"Character count"};
    for (const auto& [f, p] : profiles) total.push_back(p.mean_total == 0.0 ? "0" : format_fixed(p.mean_total, 1));
    rows.push_back(std::move(total));
    return detail::render_grid(header, rows, fmt);
}

namespace detail {

inline nlohmann::json metadata_json(const Metadata& m) {
    nlohmann::json fields = nlohmann::json::array();
    for (auto f : m.fields) fields.push_back(std::string(stats::name_of(f)));
    return {
        {"tool_version", m.tool_version},
        {"dataset_digest", m.dataset_digest},
        {"dictionary_digest", m.dictionary_digest},
        {"hierarchy_digest", m.hierarchy_digest},
        {"stoplist_digest", m.stoplist_digest},
        {"charclass_digest", m.charclass_digest},
        {"min_impressions", m.min_impressions},
        {"mode", std::string(stats::name_of(m.mode))},
        {"fields", fields},
        {"highlight", m.highlight},
        {"records_parsed", m.records_parsed},
        {"records_rejected", m.records_rejected},
        {"records_kept", m.records_kept},
    };
}

inline nlohmann::json summary_json(const stats::FiveNumberSummary& s) {
    return {{"min", s.min},       {"q1", s.q1},
            {"median", s.median}, {"q3", s.q3},
            {"max", s.max},       {"mean", s.mean},
            {"lower_whisker", s.lower_whisker}, {"upper_whisker", s.upper_whisker},
            {"n", s.n}};
}

inline const liwc::Category* category_by_id(const std::vector<liwc::Category>& cats, liwc::CategoryId id) {
    for (const auto& c : cats) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

}  // namespace detail

// Full machine-readable report.
inline nlohmann::json bundle_to_json(const ReportBundle& b) {
    using nlohmann::json;
    json doc;
    doc["schema"] = std::string(kReportSchema);
    doc["metadata"] = detail::metadata_json(b.metadata);

    json cats = json::array();
    for (const auto& c : b.categories) {
        cats.push_back({{"id", c.id}, {"name", c.name}, {"parent", c.parent ? json(*c.parent) : json(nullptr)}});
    }
    doc["categories"] = cats;

    json products = json::array();
    for (const auto& p : b.products) {
        json pj;
        pj["product_category"] = p.product_category;
        pj["records"] = p.records;
        pj["ctr_summary"] = detail::summary_json(p.ctr_summary);

        json chars = json::object();
        for (const auto& [f, prof] : p.char_profiles) {
            json rows = json::object();
            for (auto cls : text::kPublicClasses) {
                const auto i = text::index_of(cls);
                rows[std::string(text::name_of(cls))] = {{"mean_count", prof.mean_counts[i]},
                                                         {"mean_proportion", prof.mean_proportions[i]}};
            }
            chars[std::string(stats::name_of(f))] = {{"classes", rows}, {"mean_total", prof.mean_total},
                                                     {"texts", prof.texts}};
        }
        pj["char_profiles"] = chars;

        json means = json::object();
        for (const auto& [f, m] : p.category_means) {
            json arr = json::array();
            for (const auto& [id, v] : m) {
                const auto* c = detail::category_by_id(b.categories, id);
                arr.push_back({{"id", id}, {"name", c ? c->name : ""}, {"mean_percent", v}});
            }
            means[std::string(stats::name_of(f))] = arr;
        }
        pj["category_means"] = means;

        if (p.correlations) {
            json cells = json::array();
            for (const auto& [name, id] : row_order(p.correlations->categories)) {
                for (auto f : p.correlations->fields) {
                    const auto* cell = id ? p.correlations->find(*id, f) : nullptr;
                    cells.push_back({{"category", name},
                                     {"id", id ? json(*id) : json(nullptr)},
                                     {"field", std::string(stats::name_of(f))},
                                     {"rho", cell && cell->rho ? json(*cell->rho) : json(nullptr)},
                                     {"n", cell ? cell->n : 0}});
                }
            }
            pj["correlations"] = {{"mode", std::string(stats::name_of(p.correlations->mode))}, {"cells", cells}};
        } else {
            pj["correlations"] = nullptr;
        }
        products.push_back(std::move(pj));
    }
    doc["products"] = products;
    return doc;
}

// Plot-ready data: one box plot per product category and one bar group per
// (product category, field).
inline nlohmann::json emit_plot_data(const ReportBundle& b) {
    using nlohmann::json;
    json doc;
    doc["schema"] = std::string(kPlotSchema);
    doc["metadata"] = detail::metadata_json(b.metadata);
    json boxes = json::array();
    json groups = json::array();
    for (const auto& p : b.products) {
        json box = detail::summary_json(p.ctr_summary);
        box["product_category"] = p.product_category;
        boxes.push_back(std::move(box));
        for (const auto& [f, m] : p.category_means) {
            json bars = json::array();
            for (const auto& [name, id] : row_order(b.categories)) {
                if (!id) continue;
                auto it = m.find(*id);
                bars.push_back({{"category", name}, {"mean_percent", it == m.end() ? 0.0 : it->second}});
            }
            groups.push_back({{"product_category", p.product_category},
                              {"field", std::string(stats::name_of(f))},
                              {"bars", bars}});
        }
    }
    doc["box_plots"] = boxes;
    doc["bar_groups"] = groups;
    return doc;
}

// Human-readable report (Markdown or plain text).
inline std::string render_bundle(const ReportBundle& b, Format fmt) {
    const bool md = fmt == Format::Markdown;
    const auto heading = [&](int level, const std::string& s) {
        return md ? std::string(static_cast<std::size_t>(level), '#') + " " + s + "\n\n" : s + "\n" +
                                                                                   std::string(utf8::count_scalars(s), level == 1 ? '=' : '-') + "\n\n";
    };
    const auto& m = b.metadata;
    std::string out = heading(1, "Ad text psychographic report");
    std::string fields;
    for (auto f : m.fields) fields += (fields.empty() ? "" : ",") + std::string(stats::name_of(f));
    const std::string bullet = md ? "- " : "  ";
    out += bullet + "tool version: " + m.tool_version + "\n";
    out += bullet + "dataset sha256: " + m.dataset_digest + "\n";
    out += bullet + "dictionary sha256: " + m.dictionary_digest + "\n";
    out += bullet + "hierarchy sha256: " + (m.hierarchy_digest.empty() ? "built-in" : m.hierarchy_digest) + "\n";
    out += bullet + "stop-list sha256: " + (m.stoplist_digest.empty() ? "none" : m.stoplist_digest) + "\n";
    out += bullet + "character table sha256: " + (m.charclass_digest.empty() ? "built-in" : m.charclass_digest) + "\n";
    out += bullet + "min impressions: " + std::to_string(m.min_impressions) + "\n";
    out += bullet + "value mode: " + std::string(stats::name_of(m.mode)) + "\n";
    out += bullet + "fields: " + fields + "\n";
    out += bullet + "highlight: |rho| >= " + format_fixed(m.highlight, 3) + "\n";
    out += bullet + "records: " + std::to_string(m.records_parsed) + " parsed, " + std::to_string(m.records_rejected) +
           " rejected, " + std::to_string(m.records_kept) + " kept\n\n";

    out += heading(2, "Summary");
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : b.products) {
            const auto& s = p.ctr_summary;
            const auto pct = [](double v) { return format_fixed(v * 100.0, 2) + "%"; };
            rows.push_back({p.product_category, std::to_string(p.records), pct(s.mean), pct(s.min), pct(s.q1),
                            pct(s.median), pct(s.q3), pct(s.max)});
        }
        out += detail::render_grid({"product category", "ads", "avg CTR", "min", "q1", "median", "q3", "max"}, rows,
                                   fmt);
        out += "\n";
    }

    for (const auto& p : b.products) {
        out += heading(2, "Product category: " + p.product_category);
        out += heading(3, "Character classes (mean count, mean proportion)");
        out += render_char_table(p.char_profiles, fmt) + "\n";

        out += heading(3, "Mean occurrence ratio by category (%)");
        {
            std::vector<std::string> header{"category"};
            for (const auto& [f, mm] : p.category_means) header.push_back(detail::field_title(f));
            std::vector<std::vector<std::string>> rows;
            for (const auto& [name, id] : row_order(b.categories)) {
                if (!id) continue;
                std::vector<std::string> row{name};
                for (const auto& [f, mm] : p.category_means) {
                    auto it = mm.find(*id);
                    row.push_back(format_fixed(it == mm.end() ? 0.0 : it->second, 2));
                }
                rows.push_back(std::move(row));
            }
            out += detail::render_grid(header, rows, fmt) + "\n";
        }

        out += heading(3, "Correlation with CTR (" + std::string(stats::name_of(m.mode)) + ")");
        if (p.correlations) {
            out += render_correlation_table(*p.correlations, m.highlight, fmt);
            out += md ? "\nBold: |rho| >= " + format_fixed(m.highlight, 3) + ". \"-\" marks an undefined coefficient.\n\n"
                      : "\n* |rho| >= " + format_fixed(m.highlight, 3) + "; \"-\" marks an undefined coefficient.\n\n";
        } else {
            out += "Not computed: fewer than two ads.\n\n";
        }
    }
    return out;
}

}  // namespace liwcad::report
