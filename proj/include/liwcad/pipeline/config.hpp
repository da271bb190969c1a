#pragma once

// Run configuration. Sources, lowest to highest precedence:
// built-in defaults < config file (JSON) < LIWCAD_* environment < flags.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "liwcad/ingest/records.hpp"
#include "liwcad/report/report.hpp"
#include "liwcad/stats.hpp"

namespace liwcad::pipeline {

enum class FieldSelection { Main, Image, Both };

inline std::optional<FieldSelection> fields_from_name(std::string_view s) {
    if (s == "main") return FieldSelection::Main;
    if (s == "image") return FieldSelection::Image;
    if (s == "both") return FieldSelection::Both;
    return std::nullopt;
}

inline std::string_view name_of(FieldSelection f) {
    switch (f) {
    case FieldSelection::Main: return "main";
    case FieldSelection::Image: return "image";
    case FieldSelection::Both: break;
    }
    return "both";
}

inline std::optional<stats::ValueMode> mode_from_name(std::string_view s) {
    if (s == "percent") return stats::ValueMode::Percent;
    if (s == "counts") return stats::ValueMode::Counts;
    return std::nullopt;
}

inline std::string_view name_of(report::Format f) {
    switch (f) {
    case report::Format::Text: return "text";
    case report::Format::Json: return "json";
    case report::Format::Markdown: break;
    }
    return "markdown";
}

struct RunConfig {
    std::vector<std::string> inputs;
    std::string dict_path;
    std::optional<std::string> hierarchy_path;
    std::optional<std::string> stoplist_path;
    std::optional<std::string> charclass_path;  // empty: built-in range table
    std::uint64_t min_impressions = ingest::kDefaultMinImpressions;
    stats::ValueMode mode = stats::ValueMode::Percent;
    FieldSelection fields = FieldSelection::Both;
    report::Format format = report::Format::Markdown;
    double highlight = report::kDefaultHighlight;
    std::string cache_dir = "cache";
    std::optional<std::string> out_dir;
    std::optional<std::string> image_dir;  // base for relative image_ref paths
    std::optional<std::string> ocr_endpoint;
    std::optional<std::string> ocr_token;
};

// Every field optional: one layer of configuration.
struct ConfigLayer {
    std::optional<std::vector<std::string>> inputs;
    std::optional<std::string> dict_path, hierarchy_path, stoplist_path, charclass_path;
    std::optional<std::string> min_impressions, mode, fields, format, highlight;
    std::optional<std::string> cache_dir, out_dir, image_dir, ocr_endpoint, ocr_token;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ConfigLayer layer_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    ConfigLayer l;
    const auto str = [&](const char* key, std::optional<std::string>& dst) {
        auto it = j.find(key);
        if (it == j.end() || it->is_null()) return;
        if (it->is_string()) {
            dst = it->get<std::string>();
        } else if (it->is_number()) {
            dst = it->dump();
        } else {
            throw ConfigError(std::string("config key '") + key + "' must be a string or number");
        }
    };
    if (auto it = j.find("input"); it != j.end()) {
        if (it->is_string()) {
            l.inputs = std::vector<std::string>{it->get<std::string>()};
        } else if (it->is_array()) {
            l.inputs = it->get<std::vector<std::string>>();
        } else {
            throw ConfigError("config key 'input' must be a string or array of strings");
        }
    }
    str("dict", l.dict_path);
    str("hierarchy", l.hierarchy_path);
    str("stoplist", l.stoplist_path);
    str("charclass", l.charclass_path);
    str("min_impressions", l.min_impressions);
    str("mode", l.mode);
    str("fields", l.fields);
    str("format", l.format);
    str("highlight", l.highlight);
    str("cache_dir", l.cache_dir);
    str("out", l.out_dir);
    str("image_dir", l.image_dir);
    str("ocr_endpoint", l.ocr_endpoint);
    return l;
}

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

inline EnvLookup process_env() {
    return [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (v == nullptr || *v == '\0') return std::nullopt;
        return std::string(v);
    };
}

inline ConfigLayer layer_from_env(const EnvLookup& env) {
    ConfigLayer l;
    if (auto v = env("LIWCAD_INPUT")) l.inputs = std::vector<std::string>{*v};
    l.dict_path = env("LIWCAD_DICT");
    l.hierarchy_path = env("LIWCAD_HIERARCHY");
    l.stoplist_path = env("LIWCAD_STOPLIST");
    l.charclass_path = env("LIWCAD_CHARCLASS");
    l.min_impressions = env("LIWCAD_MIN_IMPRESSIONS");
    l.mode = env("LIWCAD_MODE");
    l.fields = env("LIWCAD_FIELDS");
    l.format = env("LIWCAD_FORMAT");
    l.highlight = env("LIWCAD_HIGHLIGHT");
    l.cache_dir = env("LIWCAD_CACHE_DIR");
    l.out_dir = env("LIWCAD_OUT");
    l.image_dir = env("LIWCAD_IMAGE_DIR");
    l.ocr_endpoint = env("LIWCAD_OCR_ENDPOINT");
    l.ocr_token = env("LIWCAD_OCR_TOKEN");
    return l;
}

inline void apply(RunConfig& cfg, const ConfigLayer& l) {
    if (l.inputs) cfg.inputs = *l.inputs;
    if (l.dict_path) cfg.dict_path = *l.dict_path;
    if (l.hierarchy_path) cfg.hierarchy_path = *l.hierarchy_path;
    if (l.stoplist_path) cfg.stoplist_path = *l.stoplist_path;
    if (l.charclass_path) cfg.charclass_path = *l.charclass_path;
    if (l.min_impressions) {
        std::uint64_t v = 0;
        const auto& s = *l.min_impressions;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("min-impressions must be a non-negative integer");
        cfg.min_impressions = v;
    }
    if (l.mode) {
        auto m = mode_from_name(*l.mode);
        if (!m) throw ConfigError("mode must be 'percent' or 'counts'");
        cfg.mode = *m;
    }
    if (l.fields) {
        auto f = fields_from_name(*l.fields);
        if (!f) throw ConfigError("fields must be 'main', 'image' or 'both'");
        cfg.fields = *f;
    }
    if (l.format) {
        auto f = report::format_from_name(*l.format);
        if (!f) throw ConfigError("format must be 'text', 'markdown' or 'json'");
        cfg.format = *f;
    }
    if (l.highlight) {
        char* end = nullptr;
        const double v = std::strtod(l.highlight->c_str(), &end);
        if (end == l.highlight->c_str() || *end != '\0' || !(v >= 0.0)) throw ConfigError("highlight must be a number >= 0");
        cfg.highlight = v;
    }
    if (l.cache_dir) cfg.cache_dir = *l.cache_dir;
    if (l.out_dir) cfg.out_dir = *l.out_dir;
    if (l.image_dir) cfg.image_dir = *l.image_dir;
    if (l.ocr_endpoint) cfg.ocr_endpoint = *l.ocr_endpoint;
    if (l.ocr_token) cfg.ocr_token = *l.ocr_token;
}

inline RunConfig resolve_config(const std::optional<ConfigLayer>& file, const ConfigLayer& env,
                                const ConfigLayer& flags) {
    RunConfig cfg;
    if (file) apply(cfg, *file);
    apply(cfg, env);
    apply(cfg, flags);
    return cfg;
}

// Effective configuration; the OCR credential is never printed.
inline nlohmann::json config_to_json(const RunConfig& c) {
    using nlohmann::json;
    const auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
    return {
        {"input", c.inputs},
        {"dict", c.dict_path},
        {"hierarchy", opt(c.hierarchy_path)},
        {"stoplist", opt(c.stoplist_path)},
        {"charclass", opt(c.charclass_path)},
        {"min_impressions", c.min_impressions},
        {"mode", std::string(stats::name_of(c.mode))},
        {"fields", std::string(name_of(c.fields))},
        {"format", std::string(name_of(c.format))},
        {"highlight", c.highlight},
        {"cache_dir", c.cache_dir},
        {"out", opt(c.out_dir)},
        {"image_dir", opt(c.image_dir)},
        {"ocr_endpoint", opt(c.ocr_endpoint)},
        {"ocr_token", c.ocr_token ? json("<redacted>") : json(nullptr)},
    };
}

}  // namespace liwcad::pipeline
