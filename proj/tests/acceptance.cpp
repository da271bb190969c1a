// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "liwcad/liwc/matcher.hpp"
#include "liwcad/pipeline/analyze.hpp"
#include "liwcad/report/report.hpp"
#include "liwcad/stats.hpp"
#include "liwcad/text/profile.hpp"
#include "support/golden.hpp"
#include "support/oracles.hpp"

namespace {

using namespace liwcad;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::string kDict = std::string(LIWCAD_DATA_DIR) + "/synthetic.dic";

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct TempDir {
    TempDir() {
        path = fs::temp_directory_path() / ("liwcad_accept_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path path;
};

std::string write_file(const fs::path& p, const std::string& content) {
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
}

// AC1
Outcome pearson_oracle() {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> len(2, 4000);
    std::normal_distribution<double> normal(0, 1);
    std::uniform_real_distribution<double> unit(0, 1);
    const int cases = 10000;
    double max_diff = 0, max_abs = 0;
    int undefined = 0;
    bool ok = true;
    const auto t0 = Clock::now();
    for (int c = 0; c < cases; ++c) {
        const std::size_t n = len(rng);
        std::vector<double> x(n), y(n);
        const double slope = normal(rng);
        const double noise = std::pow(10.0, -4.0 * unit(rng));  // from near-exact to weak linearity
        const int kind = c % 4;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = kind == 1 ? std::floor(unit(rng) * 5) : normal(rng) * 1e3 + 5e3;  // kind 1: heavy ties
            y[i] = slope * x[i] + noise * normal(rng) * (kind == 2 ? 1e3 : 1.0);
            if (kind == 3) y[i] = unit(rng) * 0.02;  // CTR-like magnitudes
        }
        const auto got = stats::pearson(x, y);
        const auto want = testing::naive_pearson(x, y);
        if (got.has_value() != want.has_value()) {
            ok = false;
            continue;
        }
        if (!got) {
            ++undefined;
            continue;
        }
        max_diff = std::max(max_diff, std::fabs(*got - static_cast<double>(*want)));
        max_abs = std::max(max_abs, std::fabs(*got));
    }
    const double elapsed = seconds_since(t0);
    ok = ok && max_diff <= 1e-12 && max_abs <= 1.0 + 1e-12 && elapsed < 10.0;
    return {ok, std::to_string(cases) + " pairs (" + std::to_string(undefined) + " undefined), max |diff| " +
                    fmt("%.2e", max_diff) + ", max |rho| " + fmt("%.17g", max_abs) + ", " + fmt("%.2f", elapsed) +
                    " s"};
}

// AC2
Outcome matcher_oracle() {
    std::mt19937_64 rng(2002);
    const int dictionaries = 1000;
    const int tokens_per_dict = 12;
    std::size_t cases = 0, mismatches = 0, rollups = 0, overlaps = 0;
    const auto t0 = Clock::now();
    for (int d = 0; d < dictionaries; ++d) {
        const auto dict = testing::random_dictionary(rng, 1 + rng() % 60);
        const auto m = liwc::compile_matcher(dict);
        for (int t = 0; t < tokens_per_dict; ++t) {
            // Mix fresh random tokens with stems and stem extensions so hits are common.
            std::string token = testing::random_token(rng);
            if (t % 3 == 1 && !dict.entries.empty()) {
                const auto& e = dict.entries[rng() % dict.entries.size()];
                token = e.stem + (e.wildcard ? testing::random_token(rng) : "");
            }
            const auto want = testing::naive_match(dict, token);
            const auto got = liwc::match_token(m, token);
            ++cases;
            if (got != want) ++mismatches;
            std::size_t direct = 0, exact = 0, wild = 0;
            const auto norm = unicode::normalize_token(token);
            for (const auto& e : dict.entries) {
                const auto stem = unicode::normalize_token(e.stem);
                if (!e.wildcard && stem == norm) {
                    ++exact;
                    direct += e.categories.size();
                }
                if (e.wildcard && norm.compare(0, stem.size(), stem) == 0 && norm.size() >= stem.size()) ++wild;
            }
            if (exact > 0 && wild > 0) ++overlaps;
            if (want.size() > direct && direct > 0) ++rollups;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool ok = cases >= 10000 && mismatches == 0 && overlaps > 0 && rollups > 0 && elapsed < 10.0;
    return {ok, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches, " +
                    std::to_string(overlaps) + " exact/wildcard overlaps, " + std::to_string(rollups) +
                    " with roll-up, " + fmt("%.2f", elapsed) + " s"};
}

bool forms_sequence(char32_t cp) {
    return cp == unicode::kVariationSelector16 || cp == unicode::kZeroWidthJoiner || cp == unicode::kCombiningKeycap ||
           unicode::is_emoji_modifier(cp) || unicode::is_regional_indicator(cp) || (cp >= 0xE0020 && cp <= 0xE007F);
}

// AC3
Outcome char_partition() {
    std::mt19937_64 rng(3003);
    std::uniform_int_distribution<std::uint32_t> any(0, 0x10FFFF - 0x800);
    const auto draw = [&] {
        std::uint32_t v = any(rng);
        if (v >= 0xD800) v += 0x800;  // skip surrogates
        return static_cast<char32_t>(v);
    };
    std::array<std::size_t, 8> seen{};
    for (int i = 0; i < 1'000'000; ++i) {
        const auto cls = text::classify_char(draw());
        const auto k = static_cast<std::size_t>(cls);
        if (k >= seen.size()) return {false, "classify_char returned an out-of-range class"};
        ++seen[k];
    }

    std::size_t strings = 0, bad = 0;
    for (int s = 0; s < 2000; ++s) {
        std::string str;
        std::size_t scalars = 0, spaces = 0;
        const std::size_t len = rng() % 80;
        while (scalars < len) {
            char32_t cp = draw();
            if (s % 2 == 0) cp = static_cast<char32_t>(0x3000 + rng() % 0x7000);  // dense CJK half
            if (forms_sequence(cp)) continue;
            utf8::append(str, cp);
            ++scalars;
            if (text::classify_char(cp) == text::CharClass::Whitespace) ++spaces;
        }
        const auto p = text::profile_text(str);
        std::uint64_t sum = 0;
        for (auto c : p.counts) sum += c;
        ++strings;
        if (sum != scalars - spaces || p.total != sum) ++bad;
    }

    const auto trial = text::profile_text("お試し価格500円");
    const bool example = trial.count(text::CharClass::Hiragana) == 2 && trial.count(text::CharClass::Kanji) == 4 &&
                         trial.count(text::CharClass::Number) == 3 && trial.total == 9;
    return {bad == 0 && example, "1000000 scalars classified, " + std::to_string(strings) + " strings, " +
                                     std::to_string(bad) + " count mismatches, example H" +
                                     std::to_string(trial.count(text::CharClass::Hiragana)) + "/K" +
                                     std::to_string(trial.count(text::CharClass::Kanji)) + "/N" +
                                     std::to_string(trial.count(text::CharClass::Number))};
}

// AC4
Outcome filter_boundary() {
    std::vector<ingest::AdRecord> recs;
    for (std::uint64_t imp : {9999u, 10000u, 10001u}) {
        ingest::AdRecord r;
        r.ad_id = std::to_string(imp);
        r.product_category = "health";
        r.impressions = imp;
        r.clicks = 10;
        recs.push_back(r);
    }
    const auto ds = ingest::filter_by_impressions(recs);
    const bool ok = ds.size() == 2 && ds.records[0].impressions == 10000 && ds.records[1].impressions == 10001;
    std::string kept;
    for (const auto& r : ds.records) kept += (kept.empty() ? "" : ",") + r.ad_id;
    return {ok, "kept {" + kept + "}"};
}

pipeline::RunConfig main_only_config(const std::string& input, const fs::path& dir) {
    pipeline::RunConfig cfg;
    cfg.inputs = {input};
    cfg.dict_path = kDict;
    cfg.fields = pipeline::FieldSelection::Main;
    cfg.cache_dir = (dir / "cache").string();
    return cfg;
}

// AC5: generated CSV through parse, filter, tokenize, tag and correlate.
Outcome planted_correlation(const fs::path& dir) {
    const double target = 0.30;
    double lo = 1, hi = -1;
    int inside = 0;
    const int runs = 20;
    const auto negemo = *liwc::parse_dictionary(read_file(kDict)).id_of("negemo");
    for (int seed = 1; seed <= runs; ++seed) {
        const auto recs = testing::golden_records({{"health", 3000, 0.0075, target, 3.0}}, 500 + seed);
        const auto input = write_file(dir / "planted.csv", testing::to_csv(recs));
        std::ostringstream out, err;
        const auto res = pipeline::run_analyze(main_only_config(input, dir), out, err);
        if (res.exit_code != 0 || !res.bundle || !res.bundle->products[0].correlations) {
            return {false, "run " + std::to_string(seed) + " failed: " + err.str()};
        }
        const auto* cell = res.bundle->products[0].correlations->find(negemo, stats::Field::Main);
        if (cell == nullptr || !cell->rho) return {false, "negemo correlation undefined"};
        lo = std::min(lo, *cell->rho);
        hi = std::max(hi, *cell->rho);
        if (std::fabs(*cell->rho - target) <= 0.06) ++inside;
    }
    return {inside == runs, std::to_string(inside) + "/" + std::to_string(runs) + " runs within 0.30 +/- 0.06, rho in [" +
                                fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]"};
}

// AC6: no record mentions a death word.
Outcome undefined_cell(const fs::path& dir) {
    const auto recs = testing::golden_records({{"health", 300, 0.0075, 0.3, 3.0}}, 77);
    const auto input = write_file(dir / "undefined.csv", testing::to_csv(recs));
    auto cfg = main_only_config(input, dir);
    std::ostringstream out, err;
    cfg.format = report::Format::Markdown;
    const auto md = pipeline::run_analyze(cfg, out, err);
    cfg.format = report::Format::Text;
    std::ostringstream out_txt;
    pipeline::run_analyze(cfg, out_txt, err);

    const bool md_ok = md.exit_code == 0 && out.str().find("\n| death | - |\n") != std::string::npos;
    bool txt_ok = false;
    std::istringstream lines(out_txt.str());
    for (std::string l; std::getline(lines, l);) {
        if (l.rfind("death ", 0) == 0 && l.back() == '-' && l.find_first_not_of(" -", 5) == std::string::npos) txt_ok = true;
    }
    const bool defined_elsewhere = out.str().find("\n| negemo | - |") == std::string::npos;
    return {md_ok && txt_ok && defined_elsewhere,
            std::string("markdown row ") + (md_ok ? "'| death | - |'" : "missing") + ", text row " +
                (txt_ok ? "'death ... -'" : "missing")};
}

// AC7
Outcome determinism(const fs::path& dir) {
    testing::GoldenOptions opt;
    opt.below_threshold = 25;
    const auto recs = testing::golden_records(testing::two_product_corpus(), 9, opt);
    const auto input = write_file(dir / "determinism.csv", testing::to_csv(recs));
    std::vector<std::map<std::string, std::string>> files(2);
    for (int run = 0; run < 2; ++run) {
        pipeline::RunConfig cfg;
        cfg.inputs = {input};
        cfg.dict_path = kDict;
        cfg.cache_dir = (dir / "cache").string();
        cfg.out_dir = (dir / ("run" + std::to_string(run))).string();
        std::ostringstream out, err;
        if (pipeline::run_analyze(cfg, out, err).exit_code != 0) return {false, "analyze failed: " + err.str()};
        for (const auto& entry : fs::directory_iterator(*cfg.out_dir)) {
            files[run][entry.path().filename().string()] = read_file(entry.path());
        }
    }
    std::size_t bytes = 0;
    for (const auto& [name, content] : files[0]) bytes += content.size();
    const bool ok = !files[0].empty() && files[0] == files[1];
    return {ok, std::to_string(files[0].size()) + " documents, " + std::to_string(bytes) + " bytes, " +
                    (ok ? "identical" : "differ")};
}

// AC8
Outcome table_formatting() {
    const auto cell = report::format_char_cell(6.8, 0.092);
    return {cell == "6.8 (9.2%)", "\"" + cell + "\""};
}

}  // namespace

int main() {
    TempDir tmp;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 pearson matches naive oracle", pearson_oracle},
        {"AC2 matcher matches naive scan", matcher_oracle},
        {"AC3 character classes partition text", char_partition},
        {"AC4 impression filter boundary", filter_boundary},
        {"AC5 planted correlation recovered", [&] { return planted_correlation(tmp.path); }},
        {"AC6 zero-occurrence category renders '-'", [&] { return undefined_cell(tmp.path); }},
        {"AC7 analyze is byte-for-byte deterministic", [&] { return determinism(tmp.path); }},
        {"AC8 character table cell format", table_formatting},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
