#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "profilecast/activity.hpp"
#include "profilecast/matrix.hpp"

// Phase 2: the three feature-selection paths applied separately to the
// cleaned record-level dataset.

namespace profilecast {

enum class FeatureModuleId { Original, Pca, Correlation };

inline constexpr std::array<FeatureModuleId, 3> kAllModules = {
    FeatureModuleId::Original, FeatureModuleId::Pca, FeatureModuleId::Correlation};

const char* module_name(FeatureModuleId id);
FeatureModuleId module_from_name(const std::string& name); // throws Param

struct RowKey {
    std::int64_t user_id = 0;
    Date activity_date;

    bool operator==(const RowKey&) const = default;
};

// Record-level selected dataset: one row per cleaned ActivityRecord.
struct FeatureMatrix {
    FeatureModuleId module = FeatureModuleId::Original;
    std::vector<RowKey> row_keys;
    Matrix values; // col_names holds the feature names ("PC1..PCn" for PCA)

    const std::vector<std::string>& feature_names() const { return values.col_names; }
};

// All retained features, values verbatim.
FeatureMatrix select_original(const Dataset& ds);

struct PcaProjection {
    FeatureMatrix matrix;
    std::vector<double> explained_variance;       // top-n eigenvalues, descending
    std::vector<double> explained_variance_ratio; // eigenvalue / total variance
};

// standardize -> covariance -> eigendecomposition -> project onto the top
// n_components eigenvectors. With standardize_features off the data is
// still centered. Deterministic sign per the numeric kernel's convention.
PcaProjection project_pca(const Dataset& ds, std::size_t n_components = 3,
                          bool standardize_features = true);

struct CorrelationDrop {
    std::string dropped;
    std::string kept; // the other feature of the triggering pair
    double r = 0.0;   // signed correlation of the pair
};

struct CorrelationSelection {
    FeatureMatrix matrix;                    // surviving columns, values verbatim
    std::vector<std::string> dropped;        // in drop order
    std::vector<CorrelationDrop> trigger_pairs;
};

// Greedy elimination: while any off-diagonal |r| >= threshold remains, take
// the pair with the largest |r| and drop the feature with the greater mean
// absolute correlation to the remaining features (tie: the later column in
// input order). Threshold must lie in (0, 1].
CorrelationSelection select_by_correlation(const Dataset& ds, double threshold = 0.9);

} // namespace profilecast
