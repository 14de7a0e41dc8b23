#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "profilecast/fusion.hpp"
#include "profilecast/matrix.hpp"

// Phase 4: K-means with elbow-based k selection, plus robust clustering via
// intersection of the three per-module partitions.

namespace profilecast {

// A labeling of users into clusters. Canonical form numbers clusters
// 0..k-1 by order of first appearance when users are traversed in
// ascending user_id order; every cluster is non-empty.
struct Partition {
    std::vector<std::int64_t> users; // ascending
    std::vector<int> labels;         // aligned with users
    int k = 0;
    bool canonical = false;

    // Sorts by user, renumbers labels by first appearance, sets k.
    static Partition from_labels(std::vector<std::int64_t> users, std::vector<int> labels);

    int label_of(std::int64_t user) const; // throws Shape if user unknown

    bool operator==(const Partition&) const = default;
};

struct KMeansParams {
    std::size_t max_iter = 300;
    double tol = 1e-6;       // centroid max-shift convergence threshold
    std::size_t restarts = 10;
};

struct KMeansModel {
    std::size_t k = 0;
    Matrix centroids; // k x d, aligned with canonical labels
    Partition labels;
    double inertia = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;              // base seed
    std::size_t best_restart = 0;        // restart index that won (seed + index)
    std::vector<double> inertia_history; // post-assignment inertia per Lloyd iteration
    std::vector<std::string> repair_log; // empty-cluster reassignments

    bool operator==(const KMeansModel&) const = default;
};

// k-means++ seeding from a deterministic PRNG, Lloyd iterations until the
// centroid max-shift falls below tol or max_iter is hit, best of
// params.restarts restarts (seeds seed..seed+restarts-1) by inertia, ties
// to the lowest restart index. Nearest-centroid ties go to the lowest
// centroid index. Empty clusters are repaired by reassigning the point
// farthest from its centroid, never dropped.
KMeansModel kmeans_fit(const Matrix& points, const std::vector<std::int64_t>& ids,
                       std::size_t k, std::uint64_t seed, const KMeansParams& params = {});

// Clusters in the standardized profile space.
KMeansModel kmeans_fit(const ProfileMatrix& pm, std::size_t k, std::uint64_t seed,
                       const KMeansParams& params = {});

struct ElbowResult {
    std::size_t chosen_k = 0;
    std::vector<std::size_t> ks;
    std::vector<double> inertias;

    bool operator==(const ElbowResult&) const = default;
};

// Chosen k maximizes the discrete second difference
// inertia(k-1) - 2*inertia(k) + inertia(k+1) over interior k; ties go to
// the smallest k. Requires at least three curve points and k_max <= rows.
std::size_t elbow_from_curve(const std::vector<std::size_t>& ks,
                             const std::vector<double>& inertias);
ElbowResult elbow_select_k(const ProfileMatrix& pm, std::uint64_t seed,
                           std::size_t k_min = 1, std::size_t k_max = 10,
                           const KMeansParams& params = {});

// One robust cluster per distinct (label_Original, label_PCA,
// label_Correlation) triple; clusters ordered by smallest member user_id.
struct RobustPartition {
    Partition partition;
    std::vector<std::array<int, 3>> cell_signatures;
    std::vector<std::vector<std::int64_t>> member_lists;

    bool operator==(const RobustPartition&) const = default;
};

RobustPartition intersect_partitions(const Partition& p_orig, const Partition& p_pca,
                                     const Partition& p_corr);

} // namespace profilecast
