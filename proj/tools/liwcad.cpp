// liwcad: dictionary tagging, character profiling and CTR correlation for ad
// text corpora.
//
//   liwcad analyze   --input ads.csv --dict dict.dic [--out DIR] ...
//   liwcad profile   --input ads.csv [--fields main|image|both] ...
//   liwcad dict-check --dict dict.dic [--hierarchy sidecar.tsv]

#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liwcad/digest.hpp"
#include "liwcad/ingest/http_ocr.hpp"
#include "liwcad/pipeline/analyze.hpp"
#include "liwcad/pipeline/config.hpp"
#include "liwcad/version.hpp"

namespace {

using liwcad::pipeline::ConfigLayer;

struct RunFlags {
    std::vector<std::string> inputs;
    std::string dict, hierarchy, stoplist, charclass, min_impressions, mode, fields, format, highlight, cache_dir, out, image_dir;
    std::string config_path;
    bool print_config = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_dict) {
    cmd->add_option("--input", f.inputs, "Ad records (.csv or .jsonl); repeatable");
    if (with_dict) {
        cmd->add_option("--dict", f.dict, "LIWC-format dictionary file");
        cmd->add_option("--hierarchy", f.hierarchy, "Sidecar of child<TAB>parent category lines");
        cmd->add_option("--stoplist", f.stoplist, "Tokens to drop before tagging, one per line");
        cmd->add_option("--mode", f.mode, "Correlate 'percent' (default) or raw 'counts'");
        cmd->add_option("--highlight", f.highlight, "Emphasize |rho| at or above this value (default 0.15)");
    }
    cmd->add_option("--charclass", f.charclass, "Character-class range table (start_hex<TAB>end_hex<TAB>class)");
    cmd->add_option("--min-impressions", f.min_impressions, "Drop ads below this impression count (default 10000)");
    cmd->add_option("--fields", f.fields, "main, image or both (default)");
    cmd->add_option("--format", f.format, "text, markdown (default) or json");
    cmd->add_option("--cache-dir", f.cache_dir, "OCR cache root (default ./cache)");
    cmd->add_option("--image-dir", f.image_dir, "Base directory for relative image_ref paths");
    cmd->add_option("--out", f.out, "Write report documents into this directory instead of stdout");
    cmd->add_option("--config", f.config_path, "JSON config file (flags > environment > config file)");
    cmd->add_flag("--print-config", f.print_config, "Print the effective configuration and exit");
}

ConfigLayer layer_from_flags(const CLI::App* cmd, const RunFlags& f) {
    ConfigLayer l;
    const auto set = [&](const char* name, const std::string& value, std::optional<std::string>& dst) {
        if (cmd->get_option_no_throw(name) != nullptr && cmd->count(name) > 0) dst = value;
    };
    if (cmd->count("--input") > 0) l.inputs = f.inputs;
    set("--dict", f.dict, l.dict_path);
    set("--hierarchy", f.hierarchy, l.hierarchy_path);
    set("--stoplist", f.stoplist, l.stoplist_path);
    set("--charclass", f.charclass, l.charclass_path);
    set("--min-impressions", f.min_impressions, l.min_impressions);
    set("--mode", f.mode, l.mode);
    set("--fields", f.fields, l.fields);
    set("--format", f.format, l.format);
    set("--highlight", f.highlight, l.highlight);
    set("--cache-dir", f.cache_dir, l.cache_dir);
    set("--out", f.out, l.out_dir);
    set("--image-dir", f.image_dir, l.image_dir);
    return l;
}

// Returns nullopt and sets `code` on failure.
std::optional<liwcad::pipeline::RunConfig> build_config(const CLI::App* cmd, const RunFlags& f, int& code) {
    using namespace liwcad::pipeline;
    try {
        std::optional<ConfigLayer> file;
        if (!f.config_path.empty()) {
            std::string raw;
            try {
                raw = liwcad::read_file(f.config_path);
            } catch (const std::exception& e) {
                std::cerr << "error: config file '" << f.config_path << "' is missing or unreadable\n";
                code = kExitMissingInput;
                return std::nullopt;
            }
            const auto j = nlohmann::json::parse(raw, nullptr, false);
            if (j.is_discarded()) throw ConfigError("config file is not valid JSON");
            file = layer_from_json(j);
        }
        return resolve_config(file, layer_from_env(process_env()), layer_from_flags(cmd, f));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        code = kExitInvalid;
        return std::nullopt;
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace liwcad::pipeline;

    CLI::App app{"Psychographic dictionary analysis of ad text and its correlation with CTR"};
    app.set_version_flag("--version", std::string(liwcad::kVersion));
    app.require_subcommand(1);

    RunFlags analyze_flags;
    auto* analyze = app.add_subcommand("analyze", "Full pipeline: filter, profile, tag, correlate, report");
    add_run_flags(analyze, analyze_flags, true);

    RunFlags profile_flags;
    auto* profile = app.add_subcommand("profile", "Character-class profile tables only");
    add_run_flags(profile, profile_flags, false);

    std::string check_dict;
    std::string check_hierarchy;
    auto* dict_check = app.add_subcommand("dict-check", "Validate a dictionary and print its category table");
    dict_check->add_option("--dict,dict", check_dict, "LIWC-format dictionary file")->required();
    dict_check->add_option("--hierarchy", check_hierarchy, "Sidecar of child<TAB>parent category lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInvalid;
    }

    try {
        if (dict_check->parsed()) {
            return run_dict_check(check_dict,
                                  check_hierarchy.empty() ? std::nullopt : std::optional<std::string>(check_hierarchy),
                                  std::cout, std::cerr);
        }

        const bool is_analyze = analyze->parsed();
        const RunFlags& flags = is_analyze ? analyze_flags : profile_flags;
        int code = 0;
        const auto cfg = build_config(is_analyze ? analyze : profile, flags, code);
        if (!cfg) return code;
        if (flags.print_config) {
            std::cout << config_to_json(*cfg).dump(2) << '\n';
            return kExitOk;
        }

        std::unique_ptr<liwcad::ingest::OcrProvider> provider;
        if (cfg->ocr_endpoint) {
            provider = std::make_unique<liwcad::ingest::HttpOcrProvider>(*cfg->ocr_endpoint, cfg->ocr_token.value_or(""));
        }
        const auto result = is_analyze ? run_analyze(*cfg, std::cout, std::cerr, provider.get())
                                       : run_profile(*cfg, std::cout, std::cerr, provider.get());
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}
