#pragma once

// End-to-end runs behind the CLI subcommands.
//
// Exit codes: 0 success, 1 invalid input (dictionary/schema/config errors),
// 2 missing or unreadable input files, 3 nothing left after filtering.

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "liwcad/digest.hpp"
#include "liwcad/ingest/ocr.hpp"
#include "liwcad/ingest/records.hpp"
#include "liwcad/liwc/dictionary.hpp"
#include "liwcad/liwc/matcher.hpp"
#include "liwcad/pipeline/config.hpp"
#include "liwcad/report/report.hpp"
#include "liwcad/stats.hpp"
#include "liwcad/text/profile.hpp"
#include "liwcad/text/tokenize.hpp"

namespace liwcad::pipeline {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitMissingInput = 2, kExitEmptyDataset = 3 };

struct RunOutput {
    int exit_code = kExitOk;
    std::optional<report::ReportBundle> bundle;
    std::map<std::string, std::string> documents;  // file name -> content
};

// Runs fn(i) for i in [0, n) on a few threads. Results must be written by
// index so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
    if (n < 64 || workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

inline std::unordered_set<std::string> parse_stoplist(std::string_view raw) {
    std::unordered_set<std::string> out;
    raw = utf8::strip_bom(raw);
    std::size_t pos = 0;
    while (pos < raw.size()) {
        const std::size_t nl = std::min(raw.find('\n', pos), raw.size());
        auto line = liwc::detail::trim(raw.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty() || line.front() == '#') continue;
        out.insert(unicode::normalize_token(line));
    }
    return out;
}

struct RecordIssue {
    std::string source;
    std::size_t line = 0;
    std::string level;  // "error" | "warning"
    std::string message;
};

inline std::string issues_tsv(const std::vector<RecordIssue>& issues) {
    const auto clean = [](std::string s) {
        for (char& c : s) {
            if (c == '\t' || c == '\n' || c == '\r') c = ' ';
        }
        return s;
    };
    std::string out = "source\tline\tlevel\tmessage\n";
    for (const auto& i : issues) {
        out += clean(i.source) + "\t" + std::to_string(i.line) + "\t" + i.level + "\t" + clean(i.message) + "\n";
    }
    return out;
}

namespace detail {

struct Prepared {
    ingest::Dataset dataset;
    std::vector<RecordIssue> issues;
    std::size_t parsed = 0;
    std::size_t rejected = 0;
    std::vector<stats::Field> fields;
    std::vector<std::string> notes;
};

inline bool readable(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return false;
    std::ifstream in(path, std::ios::binary);
    return static_cast<bool>(in);
}

inline std::optional<int> check_paths(const RunConfig& cfg, bool need_dict, std::ostream& err) {
    if (cfg.inputs.empty()) {
        err << "error: no --input given\n";
        return kExitMissingInput;
    }
    std::vector<std::pair<std::string, std::string>> required;
    for (const auto& in : cfg.inputs) required.emplace_back("input", in);
    if (need_dict) {
        if (cfg.dict_path.empty()) {
            err << "error: no --dict given\n";
            return kExitMissingInput;
        }
        required.emplace_back("dictionary", cfg.dict_path);
    }
    if (cfg.hierarchy_path) required.emplace_back("hierarchy", *cfg.hierarchy_path);
    if (cfg.stoplist_path) required.emplace_back("stop-list", *cfg.stoplist_path);
    if (cfg.charclass_path) required.emplace_back("character-class table", *cfg.charclass_path);
    for (const auto& [what, path] : required) {
        if (!readable(path)) {
            err << "error: " << what << " file '" << path << "' is missing or unreadable\n";
            return kExitMissingInput;
        }
    }
    return std::nullopt;
}

// Parse, merge, filter and (optionally) OCR-resolve every input.
inline std::optional<int> prepare(const RunConfig& cfg, ingest::OcrProvider* provider, Prepared& p,
                                  std::ostream& err) {
    std::vector<ingest::AdRecord> all;
    std::set<std::string> ids;
    std::string digests;
    for (const auto& path : cfg.inputs) {
        const std::string raw = read_file(path);
        ingest::ParseResult parsed;
        try {
            parsed = ingest::parse_records(raw, ingest::format_for_path(path));
        } catch (const ingest::SchemaError& e) {
            err << "error: " << path << ": " << e.what() << '\n';
            return kExitInvalid;
        }
        digests += parsed.source_digest + "\n";
        p.parsed += parsed.rows;
        p.rejected += parsed.errors.size();
        for (const auto& e : parsed.errors) p.issues.push_back({path, e.line, "error", e.reason});
        for (const auto& w : parsed.warnings) p.issues.push_back({path, w.line, "warning", "ad " + w.ad_id + ": " + w.message});
        for (auto& r : parsed.records) {
            if (!ids.insert(r.ad_id).second) {
                ++p.rejected;
                p.issues.push_back({path, 0, "error", "duplicate ad_id '" + r.ad_id + "' across inputs"});
                continue;
            }
            all.push_back(std::move(r));
        }
    }
    const std::string digest = cfg.inputs.size() == 1 ? digests.substr(0, digests.size() - 1) : sha256_hex(digests);
    p.dataset = ingest::filter_by_impressions(std::move(all), cfg.min_impressions, digest);
    if (p.dataset.empty()) {
        err << "error: no records left after filtering (min impressions " << cfg.min_impressions << ")\n";
        return kExitEmptyDataset;
    }

    const bool want_image = cfg.fields != FieldSelection::Main;
    if (want_image && provider != nullptr) {
        ingest::OcrCache cache(cfg.cache_dir);
        const auto loader = ingest::file_image_loader(cfg.image_dir.value_or(""));
        const ingest::WarningSink warn = [&](const std::string& msg) {
            p.issues.push_back({"ocr", 0, "warning", msg});
        };
        for (auto& r : p.dataset.records) r = ingest::resolve_in_image_text(std::move(r), *provider, cache, loader, warn);
    }

    if (cfg.fields != FieldSelection::Image) p.fields.push_back(stats::Field::Main);
    if (want_image) {
        const bool any_image = std::any_of(p.dataset.records.begin(), p.dataset.records.end(),
                                           [](const auto& r) { return r.in_image_text || r.in_image_tokens; });
        if (any_image) {
            p.fields.push_back(stats::Field::Image);
        } else {
            const std::string note = "no record carries in-image text; reporting main text only";
            err << "warning: " << note << '\n';
            p.notes.push_back(note);
            if (p.fields.empty()) p.fields.push_back(stats::Field::Main);
        }
    }
    return std::nullopt;
}

// The built-in table unless a range file is configured; nullopt on a bad file.
inline std::optional<text::CharClassifier> load_classifier(const RunConfig& cfg, std::string& digest, std::ostream& err) {
    if (!cfg.charclass_path) return text::default_classifier();
    const auto raw = read_file(*cfg.charclass_path);
    try {
        text::CharClassifier c(text::CharClassTable::parse(raw));
        digest = sha256_hex(raw);
        return c;
    } catch (const std::runtime_error& e) {
        err << "error: " << *cfg.charclass_path << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

inline const std::string& field_text(const ingest::AdRecord& r, stats::Field f) {
    static const std::string empty;
    if (f == stats::Field::Main) return r.main_text;
    return r.in_image_text ? *r.in_image_text : empty;
}

inline const std::optional<std::vector<std::string>>& field_tokens(const ingest::AdRecord& r, stats::Field f) {
    return f == stats::Field::Main ? r.main_tokens : r.in_image_tokens;
}

inline std::map<std::string, std::vector<std::size_t>> group_by_product(const ingest::Dataset& ds) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < ds.records.size(); ++i) groups[ds.records[i].product_category].push_back(i);
    return groups;
}

inline void write_documents(const RunConfig& cfg, RunOutput& result, const std::string& primary, std::ostream& out,
                            std::ostream& err) {
    if (cfg.out_dir) {
        std::filesystem::create_directories(*cfg.out_dir);
        for (const auto& [name, content] : result.documents) {
            const auto path = std::filesystem::path(*cfg.out_dir) / name;
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            f << content;
            if (!f) throw std::runtime_error("cannot write " + path.string());
            err << "wrote " << path.string() << '\n';
        }
    } else {
        out << result.documents.at(primary);
        if (auto it = result.documents.find("record_errors.tsv"); it != result.documents.end()) {
            const auto lines = std::count(it->second.begin(), it->second.end(), '\n');
            if (lines > 1) err << it->second;
        }
    }
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::string human_extension(report::Format f) { return f == report::Format::Text ? ".txt" : ".md"; }

}  // namespace detail

inline RunOutput run_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                             ingest::OcrProvider* provider = nullptr) {
    RunOutput result;
    if (auto code = detail::check_paths(cfg, true, err)) {
        result.exit_code = *code;
        return result;
    }

    liwc::Hierarchy hierarchy = liwc::liwc2015_hierarchy();
    report::Metadata meta;
    std::unordered_set<std::string> stoplist;
    std::optional<liwc::Dictionary> dict;
    try {
        if (cfg.hierarchy_path) {
            const auto raw = read_file(*cfg.hierarchy_path);
            hierarchy = liwc::parse_hierarchy(raw);
            meta.hierarchy_digest = sha256_hex(raw);
        }
        dict = liwc::parse_dictionary(read_file(cfg.dict_path), hierarchy);
        if (cfg.stoplist_path) {
            const auto raw = read_file(*cfg.stoplist_path);
            stoplist = parse_stoplist(raw);
            meta.stoplist_digest = sha256_hex(raw);
        }
    } catch (const liwc::DictionaryError& e) {
        err << "error: " << cfg.dict_path << ": " << e.what() << '\n';
        result.exit_code = kExitInvalid;
        return result;
    }

    const auto classifier = detail::load_classifier(cfg, meta.charclass_digest, err);
    if (!classifier) {
        result.exit_code = kExitInvalid;
        return result;
    }

    detail::Prepared prep;
    if (auto code = detail::prepare(cfg, provider, prep, err)) {
        result.exit_code = *code;
        return result;
    }
    const auto matcher = liwc::compile_matcher(*dict);
    const auto& ds = prep.dataset;

    struct PerRecord {
        std::map<stats::Field, text::CharProfile> profiles;
        std::map<stats::Field, liwc::CategoryVector> vectors;
    };
    std::vector<PerRecord> per(ds.size());
    parallel_for(ds.size(), [&](std::size_t i) {
        const auto& r = ds.records[i];
        for (auto f : prep.fields) {
            const auto& txt = detail::field_text(r, f);
            per[i].profiles[f] = text::profile_text(txt, *classifier);
            std::vector<std::string> tokens;
            if (const auto& pre = detail::field_tokens(r, f)) {
                tokens = *pre;
            } else {
                tokens = text::tokenize(txt, &matcher, *classifier).tokens;
            }
            if (!stoplist.empty()) {
                std::erase_if(tokens, [&](const std::string& t) { return stoplist.count(unicode::normalize_token(t)) > 0; });
            }
            per[i].vectors[f] = liwc::tag_tokens(matcher, tokens);
        }
    });

    meta.dataset_digest = ds.source_digest;
    meta.dictionary_digest = dict->source_digest;
    meta.min_impressions = cfg.min_impressions;
    meta.mode = cfg.mode;
    meta.fields = prep.fields;
    meta.highlight = cfg.highlight;
    meta.records_parsed = prep.parsed;
    meta.records_rejected = prep.rejected;
    meta.records_kept = ds.size();

    report::ReportBundle bundle;
    bundle.metadata = meta;
    bundle.categories = dict->categories;
    for (const auto& [product, idx] : detail::group_by_product(ds)) {
        report::ProductReport pr;
        pr.product_category = product;
        pr.records = idx.size();
        std::vector<double> ctrs;
        for (auto i : idx) ctrs.push_back(stats::ctr(ds.records[i].clicks, ds.records[i].impressions));
        pr.ctr_summary = stats::five_number_summary(ctrs);

        stats::FieldVectors fv;
        for (auto f : prep.fields) {
            std::vector<text::CharProfile> profiles;
            auto& vectors = fv[f];
            for (auto i : idx) {
                profiles.push_back(per[i].profiles.at(f));
                vectors.push_back(per[i].vectors.at(f));
            }
            pr.char_profiles[f] = text::mean_profile(profiles);
            pr.category_means[f] = stats::mean_by_category(vectors);
        }
        if (idx.size() >= 2) pr.correlations = stats::correlation_table(ctrs, dict->categories, fv, cfg.mode);
        bundle.products.push_back(std::move(pr));
    }

    result.documents["report.json"] = detail::dump(report::bundle_to_json(bundle));
    result.documents["plot.json"] = detail::dump(report::emit_plot_data(bundle));
    std::string primary = "report.json";
    if (cfg.format != report::Format::Json) {
        primary = "report" + detail::human_extension(cfg.format);
        std::string doc = report::render_bundle(bundle, cfg.format);
        for (const auto& n : prep.notes) doc += "Note: " + n + "\n";
        result.documents[primary] = std::move(doc);
    }
    result.documents["record_errors.tsv"] = issues_tsv(prep.issues);
    result.bundle = std::move(bundle);
    detail::write_documents(cfg, result, primary, out, err);
    return result;
}

// Character-class tables only; no dictionary involved.
inline RunOutput run_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                             ingest::OcrProvider* provider = nullptr) {
    RunOutput result;
    if (auto code = detail::check_paths(cfg, false, err)) {
        result.exit_code = *code;
        return result;
    }
    std::string charclass_digest;
    const auto classifier = detail::load_classifier(cfg, charclass_digest, err);
    if (!classifier) {
        result.exit_code = kExitInvalid;
        return result;
    }
    detail::Prepared prep;
    if (auto code = detail::prepare(cfg, provider, prep, err)) {
        result.exit_code = *code;
        return result;
    }
    const auto& ds = prep.dataset;
    std::vector<std::map<stats::Field, text::CharProfile>> per(ds.size());
    parallel_for(ds.size(), [&](std::size_t i) {
        for (auto f : prep.fields) per[i][f] = text::profile_text(detail::field_text(ds.records[i], f), *classifier);
    });

    nlohmann::json doc;
    doc["schema"] = "liwcad.profile/1";
    doc["metadata"] = {{"tool_version", std::string(kVersion)},
                       {"dataset_digest", ds.source_digest},
                       {"charclass_digest", charclass_digest},
                       {"min_impressions", cfg.min_impressions},
                       {"records_kept", ds.size()}};
    nlohmann::json products = nlohmann::json::array();
    const bool md = cfg.format == report::Format::Markdown;
    std::string human = md ? "# Character profile\n\n" : "Character profile\n=================\n\n";
    const std::string bullet = md ? "- " : "  ";
    human += bullet + "tool version: " + std::string(kVersion) + "\n";
    human += bullet + "dataset sha256: " + ds.source_digest + "\n";
    human += bullet + "character table sha256: " + (charclass_digest.empty() ? "built-in" : charclass_digest) + "\n";
    human += bullet + "min impressions: " + std::to_string(cfg.min_impressions) + "\n";
    human += bullet + "records: " + std::to_string(prep.parsed) + " parsed, " + std::to_string(prep.rejected) +
             " rejected, " + std::to_string(ds.size()) + " kept\n\n";
    for (const auto& [product, idx] : detail::group_by_product(ds)) {
        std::map<stats::Field, text::MeanCharProfile> means;
        for (auto f : prep.fields) {
            std::vector<text::CharProfile> ps;
            for (auto i : idx) ps.push_back(per[i].at(f));
            means[f] = text::mean_profile(ps);
        }
        nlohmann::json pj;
        pj["product_category"] = product;
        pj["records"] = idx.size();
        for (const auto& [f, m] : means) {
            nlohmann::json classes;
            for (auto cls : text::kPublicClasses) {
                const auto k = text::index_of(cls);
                classes[std::string(text::name_of(cls))] = {{"mean_count", m.mean_counts[k]},
                                                            {"mean_proportion", m.mean_proportions[k]}};
            }
            pj["fields"][std::string(stats::name_of(f))] = {{"classes", classes}, {"mean_total", m.mean_total}};
        }
        products.push_back(std::move(pj));
        const std::string title = product + " (" + std::to_string(idx.size()) + " ads)";
        human += md ? "## " + title + "\n\n" : title + "\n" + std::string(utf8::count_scalars(title), '-') + "\n\n";
        human += report::render_char_table(means, cfg.format == report::Format::Text ? report::Format::Text
                                                                                     : report::Format::Markdown) +
                 "\n";
    }
    doc["products"] = products;
    for (const auto& n : prep.notes) human += "Note: " + n + "\n";

    result.documents["profile.json"] = detail::dump(doc);
    std::string primary = "profile.json";
    if (cfg.format != report::Format::Json) {
        primary = "profile" + detail::human_extension(cfg.format);
        result.documents[primary] = human;
    }
    result.documents["record_errors.tsv"] = issues_tsv(prep.issues);
    detail::write_documents(cfg, result, primary, out, err);
    return result;
}

inline int run_dict_check(const std::string& path, const std::optional<std::string>& hierarchy_path,
                          std::ostream& out, std::ostream& err) {
    if (!detail::readable(path)) {
        err << "error: dictionary file '" << path << "' is missing or unreadable\n";
        return kExitMissingInput;
    }
    if (hierarchy_path && !detail::readable(*hierarchy_path)) {
        err << "error: hierarchy file '" << *hierarchy_path << "' is missing or unreadable\n";
        return kExitMissingInput;
    }
    try {
        liwc::Hierarchy hierarchy = liwc::liwc2015_hierarchy();
        if (hierarchy_path) hierarchy = liwc::parse_hierarchy(read_file(*hierarchy_path));
        const auto dict = liwc::parse_dictionary(read_file(path), hierarchy);
        std::size_t wildcards = 0;
        for (const auto& e : dict.entries) wildcards += e.wildcard ? 1 : 0;
        out << "dictionary: " << path << '\n';
        out << "sha256: " << dict.source_digest << '\n';
        out << "categories: " << dict.categories.size() << '\n';
        out << "entries: " << dict.entries.size() << " (" << wildcards << " wildcard)\n";
        out << "hierarchy:\n";
        for (const auto& c : dict.categories) {
            out << "  " << c.id << '\t' << c.name;
            if (c.parent) {
                const auto* parent = dict.find(*c.parent);
                out << "\t<- " << (parent ? parent->name : std::to_string(*c.parent));
            }
            out << '\n';
        }
        return kExitOk;
    } catch (const liwc::DictionaryError& e) {
        err << "error: " << path << ": " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace liwcad::pipeline
