#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "liwcad/ingest/records.hpp"
#include "liwcad/liwc/matcher.hpp"

namespace liwcad::stats {

// Pearson coefficient; nullopt is the undefined result (a zero-variance
// series), rendered "-" in tables.
using Rho = std::optional<double>;

enum class Field { Main, Image };
enum class ValueMode { Percent, Counts };

inline constexpr std::string_view name_of(Field f) { return f == Field::Main ? "main" : "image"; }
inline constexpr std::string_view name_of(ValueMode m) { return m == ValueMode::Percent ? "percent" : "counts"; }

inline double ctr(std::uint64_t clicks, std::uint64_t impressions) {
    if (impressions == 0) throw std::invalid_argument("ctr: impressions must be positive");
    if (clicks > impressions) throw std::invalid_argument("ctr: clicks exceed impressions");
    return static_cast<double>(clicks) / static_cast<double>(impressions);
}

inline std::vector<double> ctr_series(const ingest::Dataset& ds) {
    std::vector<double> out;
    out.reserve(ds.size());
    for (const auto& r : ds.records) out.push_back(ctr(r.clicks, r.impressions));
    return out;
}

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of empty sequence");
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

// Two-pass evaluation: means first, then centered sums, in index order.
inline Rho pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson: need at least two observations");

    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    if (*xmin == *xmax || *ymin == *ymax) return std::nullopt;

    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    const double rho = sxy / (std::sqrt(sxx) * std::sqrt(syy));
    return std::clamp(rho, -1.0, 1.0);
}

struct FiveNumberSummary {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    double mean = 0;
    // Tukey whiskers: most extreme observations within 1.5 IQR of the box.
    double lower_whisker = 0, upper_whisker = 0;
    std::size_t n = 0;
};

// Type-7 (linear interpolation) quantile of sorted data.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline FiveNumberSummary five_number_summary(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("five_number_summary: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    FiveNumberSummary s;
    s.n = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.mean = mean(values);

    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.lower_whisker = *std::find_if(sorted.begin(), sorted.end(), [&](double v) { return v >= lo_fence; });
    s.upper_whisker = *std::find_if(sorted.rbegin(), sorted.rend(), [&](double v) { return v <= hi_fence; });
    return s;
}

struct CorrelationCell {
    liwc::CategoryId category = 0;
    Field field = Field::Main;
    Rho rho;
    std::size_t n = 0;
};

struct CorrelationTable {
    std::vector<liwc::Category> categories;
    std::vector<Field> fields;
    std::vector<CorrelationCell> cells;  // category-major, in `categories` order
    ValueMode mode = ValueMode::Percent;

    const CorrelationCell* find(liwc::CategoryId id, Field field) const {
        for (const auto& c : cells) {
            if (c.category == id && c.field == field) return &c;
        }
        return nullptr;
    }
};

using FieldVectors = std::map<Field, std::vector<liwc::CategoryVector>>;

inline std::vector<double> category_series(std::span<const liwc::CategoryVector> vectors, liwc::CategoryId id,
                                           ValueMode mode) {
    std::vector<double> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        out.push_back(mode == ValueMode::Percent ? v.percent(id) : static_cast<double>(v.count(id)));
    }
    return out;
}

inline CorrelationTable correlation_table(std::span<const double> ctr_values,
                                          const std::vector<liwc::Category>& categories, const FieldVectors& vectors,
                                          ValueMode mode = ValueMode::Percent) {
    if (ctr_values.size() < 2) throw std::invalid_argument("correlation_table: need at least two records");
    CorrelationTable t;
    t.categories = categories;
    t.mode = mode;
    for (const auto& [field, vs] : vectors) {
        if (vs.size() != ctr_values.size()) {
            throw std::invalid_argument("correlation_table: category vectors not aligned with the dataset");
        }
        t.fields.push_back(field);
    }
    for (const auto& cat : categories) {
        for (const auto& [field, vs] : vectors) {
            const auto series = category_series(vs, cat.id, mode);
            t.cells.push_back({cat.id, field, pearson(ctr_values, series), ctr_values.size()});
        }
    }
    return t;
}

inline CorrelationTable correlation_table(const ingest::Dataset& ds, const std::vector<liwc::Category>& categories,
                                          const FieldVectors& vectors, ValueMode mode = ValueMode::Percent) {
    const auto x = ctr_series(ds);
    return correlation_table(x, categories, vectors, mode);
}

// Mean occurrence percentage per category across texts.
inline std::map<liwc::CategoryId, double> mean_by_category(std::span<const liwc::CategoryVector> vectors) {
    std::map<liwc::CategoryId, double> out;
    if (vectors.empty()) return out;
    for (const auto& v : vectors) {
        for (const auto& [id, pct] : v.percentages) out[id] += pct;
    }
    for (auto& [id, sum] : out) sum /= static_cast<double>(vectors.size());
    return out;
}

}  // namespace liwcad::stats
