#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "profilecast/features.hpp"

namespace profilecast {

// Fully resolved run configuration. Defaults chase the published reference
// numbers: k pinned to 4 per module, seed 42, standardized features,
// correlation cut at 0.9, 3 principal components.
struct PipelineConfig {
    std::string input_path;
    std::uint64_t seed = 42;
    std::size_t k = 4;
    bool auto_k = false;             // elbow selection over k_min..k_max
    std::size_t elbow_k_min = 1;
    std::size_t elbow_k_max = 10;
    double corr_threshold = 0.9;
    std::size_t pca_components = 3;
    bool standardize = true;
    std::vector<FeatureModuleId> modules = {kAllModules.begin(), kAllModules.end()};
    std::string format = "json";     // json | csv | markdown
    std::string output_path;         // empty = stdout
    std::string dump_features_dir;   // empty = no dump
    std::string dump_profiles_dir;   // empty = no dump
    bool drop_bad_rows = false;

    bool runs_module(FeatureModuleId id) const;
    bool runs_all_modules() const { return modules.size() == kAllModules.size(); }

    bool operator==(const PipelineConfig&) const = default;
};

// Comma-separated module names, case-insensitive. The result is normalized
// to canonical order with duplicates collapsed; an empty list is an error.
std::vector<FeatureModuleId> parse_module_list(const std::string& text);

// Overlays keys found in a .json or .toml file onto cfg (file extension
// picks the syntax). Unknown keys are errors. The TOML reader is the flat
// `key = value` subset: quoted strings, booleans, numbers, no tables.
void apply_config_file(PipelineConfig& cfg, const std::string& path);

// Range and enum checks; throws on the first violation.
void validate_config(const PipelineConfig& cfg);

} // namespace profilecast
