#include "profilecast/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "profilecast/errors.hpp"
#include "profilecast/numeric.hpp"
#include "profilecast/rng.hpp"

namespace profilecast {

Partition Partition::from_labels(std::vector<std::int64_t> users, std::vector<int> labels) {
    if (users.size() != labels.size()) {
        throw Error(ErrorKind::Shape, "partition: users/labels length mismatch");
    }
    std::vector<std::size_t> order(users.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return users[a] < users[b]; });

    Partition p;
    p.users.reserve(users.size());
    p.labels.reserve(users.size());
    std::map<int, int> renumber; // original label -> canonical id
    for (std::size_t i : order) {
        if (!p.users.empty() && p.users.back() == users[i]) {
            throw Error(ErrorKind::Shape,
                        "partition: duplicate user " + std::to_string(users[i]));
        }
        auto [it, inserted] = renumber.emplace(labels[i], static_cast<int>(renumber.size()));
        p.users.push_back(users[i]);
        p.labels.push_back(it->second);
    }
    p.k = static_cast<int>(renumber.size());
    p.canonical = true;
    return p;
}

int Partition::label_of(std::int64_t user) const {
    auto it = std::lower_bound(users.begin(), users.end(), user);
    if (it == users.end() || *it != user) {
        throw Error(ErrorKind::Shape, "partition: unknown user " + std::to_string(user));
    }
    return labels[static_cast<std::size_t>(it - users.begin())];
}

namespace {

// Nearest centroid, ties to the lowest index.
std::size_t nearest_centroid(const Matrix& points, std::size_t row, const Matrix& centroids,
                             double* out_d2 = nullptr) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows; ++c) {
        double d2 = numeric::squared_euclidean_distance(points.row(row), centroids.row(c));
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    if (out_d2) *out_d2 = best_d2;
    return best;
}

Matrix kmeanspp_init(const Matrix& points, std::size_t k, SplitMix64& rng) {
    const std::size_t n = points.rows;
    Matrix centroids(k, points.cols);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    std::size_t first = rng.next_index(n);
    std::copy_n(points.row(first).begin(), points.cols, centroids.row(0).begin());

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = numeric::squared_euclidean_distance(points.row(i), centroids.row(c - 1));
            d2[i] = std::min(d2[i], d);
            total += d2[i];
        }
        std::size_t pick;
        if (total <= 0.0) {
            pick = rng.next_index(n); // all remaining points coincide with a centroid
        } else {
            double r = rng.next_double() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
        }
        std::copy_n(points.row(pick).begin(), points.cols, centroids.row(c).begin());
    }
    return centroids;
}

struct LloydRun {
    Matrix centroids;
    std::vector<int> labels;
    double inertia = 0.0;
    std::size_t iterations = 0;
    std::vector<double> inertia_history;
    std::vector<std::string> repair_log;
};

LloydRun lloyd(const Matrix& points, std::size_t k, std::uint64_t restart_seed,
               const KMeansParams& params) {
    const std::size_t n = points.rows;
    const std::size_t d = points.cols;
    SplitMix64 rng(restart_seed);

    LloydRun run;
    run.centroids = kmeanspp_init(points, k, rng);
    run.labels.assign(n, 0);

    double prev_inertia = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 1; iter <= params.max_iter; ++iter) {
        run.iterations = iter;

        // Assignment step.
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d2;
            run.labels[i] = static_cast<int>(nearest_centroid(points, i, run.centroids, &d2));
            inertia += d2;
        }
        // The Lloyd objective never increases across iterations.
        if (inertia > prev_inertia * (1.0 + 1e-12) + 1e-12) {
            std::ostringstream msg;
            msg << "kmeans: inertia increased from " << prev_inertia << " to " << inertia
                << " at iteration " << iter;
            throw Error(ErrorKind::Convergence, msg.str());
        }
        prev_inertia = inertia;
        run.inertia = inertia;
        run.inertia_history.push_back(inertia);

        // Empty-cluster repair: hand the farthest point to each empty cluster.
        std::vector<std::size_t> counts(k, 0);
        for (int lab : run.labels) ++counts[static_cast<std::size_t>(lab)];
        bool repaired = false;
        std::set<std::size_t> moved;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t worst = n;
            double worst_d2 = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (moved.count(i)) continue;
                auto lab = static_cast<std::size_t>(run.labels[i]);
                if (counts[lab] <= 1) continue; // do not empty another cluster
                double d2 = numeric::squared_euclidean_distance(
                    points.row(i), run.centroids.row(lab));
                if (d2 > worst_d2) {
                    worst_d2 = d2;
                    worst = i;
                }
            }
            if (worst == n) {
                throw Error(ErrorKind::Convergence,
                            "kmeans: cannot repair empty cluster " + std::to_string(c));
            }
            --counts[static_cast<std::size_t>(run.labels[worst])];
            run.labels[worst] = static_cast<int>(c);
            ++counts[c];
            moved.insert(worst);
            repaired = true;
            std::ostringstream msg;
            msg << "iteration " << iter << ": reassigned point " << worst
                << " to empty cluster " << c;
            run.repair_log.push_back(msg.str());
        }

        // Update step.
        Matrix next(k, d);
        for (std::size_t i = 0; i < n; ++i) {
            auto lab = static_cast<std::size_t>(run.labels[i]);
            for (std::size_t j = 0; j < d; ++j) next.at(lab, j) += points.at(i, j);
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < d; ++j) {
                next.at(c, j) /= static_cast<double>(counts[c]);
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift,
                             numeric::euclidean_distance(run.centroids.row(c), next.row(c)));
        }

        // Exit before adopting the update so the reported labels are exact
        // nearest-centroid assignments against the reported centroids.
        if (!repaired && shift < params.tol) break;
        if (iter == params.max_iter) break;
        run.centroids = std::move(next);
    }
    return run;
}

} // namespace

KMeansModel kmeans_fit(const Matrix& points, const std::vector<std::int64_t>& ids,
                       std::size_t k, std::uint64_t seed, const KMeansParams& params) {
    if (points.rows == 0) {
        throw Error(ErrorKind::EmptyInput, "kmeans_fit: no points");
    }
    if (ids.size() != points.rows) {
        throw Error(ErrorKind::Shape, "kmeans_fit: ids/points length mismatch");
    }
    if (k < 1 || k > points.rows) {
        std::ostringstream msg;
        msg << "kmeans_fit: k " << k << " out of range [1, " << points.rows << "]";
        throw Error(ErrorKind::Param, msg.str());
    }

    LloydRun best;
    std::size_t best_restart = 0;
    bool have_best = false;
    for (std::size_t r = 0; r < std::max<std::size_t>(params.restarts, 1); ++r) {
        LloydRun run = lloyd(points, k, seed + r, params);
        if (!have_best || run.inertia < best.inertia) {
            best = std::move(run);
            best_restart = r;
            have_best = true;
        }
    }

    // Canonicalize labels; permute centroid rows to match.
    Partition part = Partition::from_labels(ids, best.labels);
    std::map<int, int> renumber;
    {
        // Recompute the same renumbering from_labels used.
        std::vector<std::size_t> order(ids.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
        for (std::size_t i : order) {
            renumber.emplace(best.labels[i], static_cast<int>(renumber.size()));
        }
    }
    Matrix centroids(k, points.cols);
    for (auto [old_label, new_label] : renumber) {
        std::copy_n(best.centroids.row(static_cast<std::size_t>(old_label)).begin(),
                    points.cols,
                    centroids.row(static_cast<std::size_t>(new_label)).begin());
    }

    KMeansModel model;
    model.k = k;
    model.centroids = std::move(centroids);
    model.labels = std::move(part);
    model.inertia = best.inertia;
    model.iterations = best.iterations;
    model.seed = seed;
    model.best_restart = best_restart;
    model.inertia_history = std::move(best.inertia_history);
    model.repair_log = std::move(best.repair_log);
    return model;
}

KMeansModel kmeans_fit(const ProfileMatrix& pm, std::size_t k, std::uint64_t seed,
                       const KMeansParams& params) {
    return kmeans_fit(pm.standardized_values, pm.user_ids, k, seed, params);
}

std::size_t elbow_from_curve(const std::vector<std::size_t>& ks,
                             const std::vector<double>& inertias) {
    if (ks.size() != inertias.size()) {
        throw Error(ErrorKind::Shape, "elbow_from_curve: ks/inertias length mismatch");
    }
    if (ks.size() < 3) {
        throw Error(ErrorKind::Param,
                    "elbow_from_curve: need at least three curve points for an interior k");
    }
    std::size_t best_k = ks[1];
    double best_dd = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        double dd = inertias[i - 1] - 2.0 * inertias[i] + inertias[i + 1];
        if (dd > best_dd) { // strict: ties keep the smallest k
            best_dd = dd;
            best_k = ks[i];
        }
    }
    return best_k;
}

ElbowResult elbow_select_k(const ProfileMatrix& pm, std::uint64_t seed, std::size_t k_min,
                           std::size_t k_max, const KMeansParams& params) {
    if (k_min < 1 || k_max < k_min) {
        throw Error(ErrorKind::Param, "elbow_select_k: invalid k range");
    }
    if (k_max > pm.n_users()) {
        std::ostringstream msg;
        msg << "elbow_select_k: k_max " << k_max << " exceeds user count " << pm.n_users();
        throw Error(ErrorKind::Param, msg.str());
    }
    ElbowResult result;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        result.ks.push_back(k);
        result.inertias.push_back(kmeans_fit(pm, k, seed, params).inertia);
    }
    result.chosen_k = elbow_from_curve(result.ks, result.inertias);
    return result;
}

RobustPartition intersect_partitions(const Partition& p_orig, const Partition& p_pca,
                                     const Partition& p_corr) {
    // All three partitions must cover the identical user set.
    for (const Partition* p : {&p_pca, &p_corr}) {
        if (p->users != p_orig.users) {
            std::set<std::int64_t> a(p_orig.users.begin(), p_orig.users.end());
            std::set<std::int64_t> b(p->users.begin(), p->users.end());
            std::vector<std::int64_t> diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                          std::back_inserter(diff));
            std::ostringstream msg;
            msg << "intersect_partitions: user sets differ; symmetric difference:";
            for (auto u : diff) msg << ' ' << u;
            throw Error(ErrorKind::Shape, msg.str());
        }
    }

    // Users traversed in ascending order, so cells are created in order of
    // their smallest member.
    std::map<std::array<int, 3>, int> cell_ids;
    RobustPartition rp;
    std::vector<int> labels(p_orig.users.size());
    for (std::size_t i = 0; i < p_orig.users.size(); ++i) {
        std::int64_t user = p_orig.users[i];
        std::array<int, 3> sig = {p_orig.labels[i], p_pca.label_of(user),
                                  p_corr.label_of(user)};
        auto [it, inserted] = cell_ids.emplace(sig, static_cast<int>(cell_ids.size()));
        if (inserted) {
            rp.cell_signatures.push_back(sig);
            rp.member_lists.emplace_back();
        }
        labels[i] = it->second;
        rp.member_lists[static_cast<std::size_t>(it->second)].push_back(user);
    }
    rp.partition = Partition::from_labels(p_orig.users, labels);
    return rp;
}

} // namespace profilecast
