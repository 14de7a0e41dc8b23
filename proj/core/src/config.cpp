#include "profilecast/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "profilecast/errors.hpp"

namespace profilecast {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void bad_key(const std::string& path, const std::string& key) {
    throw Error(ErrorKind::Config, path + ": unknown config key '" + key + "'");
}

[[noreturn]] void bad_value(const std::string& path, const std::string& key,
                            const std::string& why) {
    throw Error(ErrorKind::Config, path + ": key '" + key + "' " + why);
}

std::uint64_t to_u64(const std::string& path, const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        bad_value(path, key, "must be an unsigned integer, got '" + text + "'");
    }
    return v;
}

double to_f64(const std::string& path, const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        bad_value(path, key, "must be a number, got '" + text + "'");
    }
    return v;
}

// Applies one key from either syntax. String-typed values arrive unquoted.
struct ConfigValue {
    bool is_string = false;
    bool is_bool = false;
    bool bool_value = false;
    std::string text; // raw scalar text, or the string content
};

void apply_key(PipelineConfig& cfg, const std::string& path, const std::string& key,
               const ConfigValue& v) {
    auto want_string = [&]() -> const std::string& {
        if (!v.is_string) bad_value(path, key, "must be a string");
        return v.text;
    };
    auto want_bool = [&]() -> bool {
        if (!v.is_bool) bad_value(path, key, "must be a boolean");
        return v.bool_value;
    };
    auto want_number = [&]() -> const std::string& {
        if (v.is_string || v.is_bool) bad_value(path, key, "must be a number");
        return v.text;
    };

    if (key == "input") {
        cfg.input_path = want_string();
    } else if (key == "seed") {
        cfg.seed = to_u64(path, key, want_number());
    } else if (key == "k") {
        cfg.k = to_u64(path, key, want_number());
    } else if (key == "auto_k") {
        cfg.auto_k = want_bool();
    } else if (key == "elbow_k_min") {
        cfg.elbow_k_min = to_u64(path, key, want_number());
    } else if (key == "elbow_k_max") {
        cfg.elbow_k_max = to_u64(path, key, want_number());
    } else if (key == "corr_threshold") {
        cfg.corr_threshold = to_f64(path, key, want_number());
    } else if (key == "pca_components") {
        cfg.pca_components = to_u64(path, key, want_number());
    } else if (key == "standardize") {
        cfg.standardize = want_bool();
    } else if (key == "modules") {
        cfg.modules = parse_module_list(want_string());
    } else if (key == "format") {
        cfg.format = lower(want_string());
    } else if (key == "output") {
        cfg.output_path = want_string();
    } else if (key == "dump_features") {
        cfg.dump_features_dir = want_string();
    } else if (key == "dump_profiles") {
        cfg.dump_profiles_dir = want_string();
    } else if (key == "drop_bad_rows") {
        cfg.drop_bad_rows = want_bool();
    } else {
        bad_key(path, key);
    }
}

void apply_json(PipelineConfig& cfg, const std::string& path, const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorKind::Config, path + ": config root must be an object");
    }
    for (const auto& [key, value] : doc.items()) {
        ConfigValue v;
        if (value.is_string()) {
            v.is_string = true;
            v.text = value.get<std::string>();
        } else if (value.is_boolean()) {
            v.is_bool = true;
            v.bool_value = value.get<bool>();
        } else if (value.is_number()) {
            v.text = value.dump();
        } else if (value.is_array() && key == "modules") {
            std::string joined;
            for (const auto& item : value) {
                if (!item.is_string()) {
                    bad_value(path, key, "array entries must be strings");
                }
                if (!joined.empty()) joined += ',';
                joined += item.get<std::string>();
            }
            v.is_string = true;
            v.text = joined;
        } else {
            bad_value(path, key, "has unsupported type");
        }
        apply_key(cfg, path, key, v);
    }
}

void apply_toml(PipelineConfig& cfg, const std::string& path, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        // Strip comments outside quotes.
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quotes = !in_quotes;
            if (line[i] == '#' && !in_quotes) {
                line.resize(i);
                break;
            }
        }
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            throw Error(ErrorKind::Config,
                        path + ":" + std::to_string(line_no) +
                            ": tables are not supported, use flat keys");
        }
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, path + ":" + std::to_string(line_no) +
                                               ": expected key = value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string raw = trim(stripped.substr(eq + 1));
        if (key.empty() || raw.empty()) {
            throw Error(ErrorKind::Config, path + ":" + std::to_string(line_no) +
                                               ": expected key = value");
        }

        ConfigValue v;
        if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"') {
                bad_value(path, key, "has an unterminated string");
            }
            v.is_string = true;
            v.text = raw.substr(1, raw.size() - 2);
        } else if (raw == "true" || raw == "false") {
            v.is_bool = true;
            v.bool_value = raw == "true";
        } else {
            v.text = raw;
        }
        apply_key(cfg, path, key, v);
    }
}

} // namespace

bool PipelineConfig::runs_module(FeatureModuleId id) const {
    return std::find(modules.begin(), modules.end(), id) != modules.end();
}

std::vector<FeatureModuleId> parse_module_list(const std::string& text) {
    std::vector<bool> seen(kAllModules.size(), false);
    std::stringstream parts(text);
    std::string part;
    bool any = false;
    while (std::getline(parts, part, ',')) {
        std::string name = trim(part);
        if (name.empty()) continue;
        seen[static_cast<std::size_t>(module_from_name(name))] = true;
        any = true;
    }
    if (!any) {
        throw Error(ErrorKind::Config, "module list is empty");
    }
    std::vector<FeatureModuleId> result;
    for (FeatureModuleId id : kAllModules) {
        if (seen[static_cast<std::size_t>(id)]) result.push_back(id);
    }
    return result;
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Config, "cannot open config file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
    if (ext == "json") {
        apply_json(cfg, path, text);
    } else if (ext == "toml") {
        apply_toml(cfg, path, text);
    } else {
        throw Error(ErrorKind::Config,
                    path + ": unsupported config extension, expected .json or .toml");
    }
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.input_path.empty()) {
        throw Error(ErrorKind::Config, "input path is required");
    }
    if (cfg.k < 1) {
        throw Error(ErrorKind::Config, "k must be at least 1");
    }
    if (cfg.elbow_k_min < 1 || cfg.elbow_k_max < cfg.elbow_k_min) {
        throw Error(ErrorKind::Config, "elbow k range is invalid");
    }
    if (!(cfg.corr_threshold > 0.0 && cfg.corr_threshold <= 1.0)) {
        throw Error(ErrorKind::Config, "corr_threshold must lie in (0, 1]");
    }
    if (cfg.pca_components < 1) {
        throw Error(ErrorKind::Config, "pca_components must be at least 1");
    }
    if (cfg.modules.empty()) {
        throw Error(ErrorKind::Config, "at least one feature module is required");
    }
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "markdown") {
        throw Error(ErrorKind::Config,
                    "format must be json, csv, or markdown, got '" + cfg.format + "'");
    }
}

} // namespace profilecast
