#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "profilecast/clustering.hpp"
#include "profilecast/features.hpp"
#include "profilecast/fusion.hpp"
#include "profilecast/matrix.hpp"

// Phase 5: cluster validity indices. Higher SS and CHI are better, lower
// DBI is better.

namespace profilecast {

// Low-level entry points score any point matrix with per-row labels; the
// ProfileMatrix overloads score the standardized profile space and require
// the partition to cover exactly the matrix's users.
double silhouette_score(const Matrix& points, std::span<const int> labels);
double silhouette_score(const ProfileMatrix& pm, const Partition& p);

double davies_bouldin_index(const Matrix& points, std::span<const int> labels);
double davies_bouldin_index(const ProfileMatrix& pm, const Partition& p);

double calinski_harabasz_index(const Matrix& points, std::span<const int> labels);
double calinski_harabasz_index(const ProfileMatrix& pm, const Partition& p);

struct ValidityScores {
    double ss = 0.0;
    double dbi = 0.0;
    double chi = 0.0;

    bool operator==(const ValidityScores&) const = default;
};

ValidityScores score_partition(const ProfileMatrix& pm, const Partition& p);

// One grid cell; value is meaningful only when ok is set.
struct MetricCell {
    bool ok = false;
    double value = 0.0;
    std::string error_kind; // failure kind name, or "skipped"
    std::string error;

    bool operator==(const MetricCell&) const = default;
};

inline constexpr std::array<const char*, 3> kMetricNames = {"SS", "DBI", "CHI"};
inline constexpr std::array<const char*, 2> kAlgorithmNames = {"K-means", "Robust"};

// Grid in table order: metrics as rows, algorithm column groups, one
// sub-column per feature module.
struct ValidityReport {
    std::array<std::array<std::array<MetricCell, 3>, 2>, 3> cells; // [metric][algorithm][module]

    MetricCell& cell(std::size_t metric, std::size_t algorithm, FeatureModuleId module) {
        return cells[metric][algorithm][static_cast<std::size_t>(module)];
    }
    const MetricCell& cell(std::size_t metric, std::size_t algorithm,
                           FeatureModuleId module) const {
        return cells[metric][algorithm][static_cast<std::size_t>(module)];
    }

    bool operator==(const ValidityReport&) const = default;
};

// Null entries mark modules that were not run; their cells come back with
// error_kind "skipped". The robust partition, when present, is evaluated in
// every selected module's profile space. Metric failures are captured per
// cell, never thrown.
ValidityReport score_all(const std::array<const ProfileMatrix*, 3>& profiles,
                         const std::array<const Partition*, 3>& kmeans_partitions,
                         const Partition* robust);

} // namespace profilecast
