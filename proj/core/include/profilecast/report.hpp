#pragma once

#include <optional>
#include <string>
#include <vector>

#include "profilecast/activity.hpp"
#include "profilecast/clustering.hpp"
#include "profilecast/config.hpp"
#include "profilecast/features.hpp"
#include "profilecast/fusion.hpp"
#include "profilecast/validity.hpp"

// Phase 6: orchestration and serialization of a full run.

namespace profilecast {

struct ModuleReport {
    FeatureModuleId module = FeatureModuleId::Original;
    std::vector<std::string> selected_features;
    std::vector<std::string> dropped_features;    // correlation eliminations
    std::vector<double> explained_variance;       // principal components only
    std::vector<double> explained_variance_ratio; // principal components only
    std::optional<ElbowResult> elbow;             // present under auto_k
    std::size_t chosen_k = 0;
    KMeansModel kmeans;

    bool operator==(const ModuleReport&) const = default;
};

struct DatasetReport {
    DatasetSummary summary;
    std::vector<std::string> feature_names;
    std::vector<std::string> dropped_columns;
    std::vector<std::string> warnings;

    bool operator==(const DatasetReport&) const = default;
};

struct RunReport {
    std::string version;
    PipelineConfig config; // resolved echo; replaying it reproduces the run
    DatasetReport dataset;
    std::vector<ModuleReport> per_module; // canonical module order
    std::optional<RobustPartition> robust;
    ValidityReport validity;
    std::vector<std::string> notices;

    bool operator==(const RunReport&) const = default;
};

// The report plus the intermediate artifacts the dump writers need.
struct PipelineResult {
    RunReport report;
    Dataset dataset;                              // cleaned
    std::vector<FeatureMatrix> feature_matrices;  // aligned with report.per_module
    std::vector<ProfileMatrix> profile_matrices;  // aligned with report.per_module
};

// ingest -> clean -> feature modules -> fusion -> clustering -> intersection
// -> validity grid. Errors carry the failing phase in their message. Robust
// clustering runs only when all three modules are selected; otherwise a
// notice records the skip.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// format is one of json, csv, markdown. json is the canonical machine
// format (stable key order, round-trips through parse_report_json); csv
// flattens the validity grid one cell per row; markdown renders the grid
// with metrics as rows and algorithm x module columns, 5 decimals.
std::string render_report(const RunReport& r, const std::string& format);

RunReport parse_report_json(const std::string& text);

// One CSV per module: record-level selected features, then per-user fused
// profiles plus robust_profile.json. Directories are created as needed.
void write_feature_dumps(const PipelineResult& result, const std::string& dir);
void write_profile_dumps(const PipelineResult& result, const std::string& dir);

} // namespace profilecast
