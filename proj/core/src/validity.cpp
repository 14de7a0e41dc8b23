#include "profilecast/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "profilecast/errors.hpp"
#include "profilecast/numeric.hpp"

namespace profilecast {

namespace {

// Labels remapped to dense 0..k-1 ids so arbitrary label values are accepted.
struct LabelView {
    std::size_t k = 0;
    std::vector<std::size_t> dense;    // per row
    std::vector<std::size_t> counts;   // per dense id
    std::vector<int> original;         // dense id -> input label
};

LabelView remap_labels(const Matrix& points, std::span<const int> labels) {
    if (labels.size() != points.rows) {
        throw Error(ErrorKind::Shape, "validity: labels/points length mismatch");
    }
    if (points.rows == 0) {
        throw Error(ErrorKind::EmptyInput, "validity: no points");
    }
    LabelView view;
    view.dense.reserve(labels.size());
    std::map<int, std::size_t> ids;
    for (int lab : labels) {
        auto [it, inserted] = ids.emplace(lab, ids.size());
        if (inserted) {
            view.original.push_back(lab);
            view.counts.push_back(0);
        }
        view.dense.push_back(it->second);
        ++view.counts[it->second];
    }
    view.k = ids.size();
    return view;
}

Matrix cluster_centroids(const Matrix& points, const LabelView& view) {
    Matrix centroids(view.k, points.cols);
    for (std::size_t i = 0; i < points.rows; ++i) {
        for (std::size_t j = 0; j < points.cols; ++j) {
            centroids.at(view.dense[i], j) += points.at(i, j);
        }
    }
    for (std::size_t c = 0; c < view.k; ++c) {
        for (std::size_t j = 0; j < points.cols; ++j) {
            centroids.at(c, j) /= static_cast<double>(view.counts[c]);
        }
    }
    return centroids;
}

void check_same_users(const ProfileMatrix& pm, const Partition& p, const char* metric) {
    if (p.users != pm.user_ids) {
        throw Error(ErrorKind::Shape,
                    std::string(metric) + ": partition users do not match profile users");
    }
}

} // namespace

double silhouette_score(const Matrix& points, std::span<const int> labels) {
    LabelView view = remap_labels(points, labels);
    const std::size_t n = points.rows;
    if (view.k < 2 || view.k > n - 1) {
        std::ostringstream msg;
        msg << "silhouette: k=" << view.k << " outside [2, " << n - 1 << "] for n=" << n;
        throw Error(ErrorKind::UndefinedMetric, msg.str());
    }

    // One pass accumulates each point's distance sum to every cluster.
    std::vector<double> sums(n * view.k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = numeric::euclidean_distance(points.row(i), points.row(j));
            sums[i * view.k + view.dense[j]] += d;
            sums[j * view.k + view.dense[i]] += d;
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t own = view.dense[i];
        if (view.counts[own] == 1) continue; // singleton: s(i) = 0
        double a = sums[i * view.k + own] / static_cast<double>(view.counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < view.k; ++c) {
            if (c == own) continue;
            b = std::min(b, sums[i * view.k + c] / static_cast<double>(view.counts[c]));
        }
        double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double davies_bouldin_index(const Matrix& points, std::span<const int> labels) {
    LabelView view = remap_labels(points, labels);
    if (view.k < 2) {
        throw Error(ErrorKind::UndefinedMetric,
                    "davies_bouldin: needs at least two clusters, got " + std::to_string(view.k));
    }

    Matrix centroids = cluster_centroids(points, view);
    std::vector<double> dispersion(view.k, 0.0);
    for (std::size_t i = 0; i < points.rows; ++i) {
        dispersion[view.dense[i]] +=
            numeric::euclidean_distance(points.row(i), centroids.row(view.dense[i]));
    }
    for (std::size_t c = 0; c < view.k; ++c) {
        dispersion[c] /= static_cast<double>(view.counts[c]);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < view.k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < view.k; ++j) {
            if (j == i) continue;
            double d = numeric::euclidean_distance(centroids.row(i), centroids.row(j));
            if (d == 0.0) {
                std::ostringstream msg;
                msg << "davies_bouldin: clusters " << view.original[i] << " and "
                    << view.original[j] << " have coincident centroids";
                throw Error(ErrorKind::DivisionByZero, msg.str());
            }
            worst = std::max(worst, (dispersion[i] + dispersion[j]) / d);
        }
        total += worst;
    }
    return total / static_cast<double>(view.k);
}

double calinski_harabasz_index(const Matrix& points, std::span<const int> labels) {
    LabelView view = remap_labels(points, labels);
    const std::size_t n = points.rows;
    if (view.k < 2 || view.k >= n) {
        std::ostringstream msg;
        msg << "calinski_harabasz: k=" << view.k << " outside [2, " << n - 1
            << "] for n=" << n;
        throw Error(ErrorKind::UndefinedMetric, msg.str());
    }

    Matrix centroids = cluster_centroids(points, view);
    std::vector<double> grand(points.cols, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < points.cols; ++j) grand[j] += points.at(i, j);
    }
    for (double& g : grand) g /= static_cast<double>(n);

    double trace_b = 0.0;
    for (std::size_t c = 0; c < view.k; ++c) {
        trace_b += static_cast<double>(view.counts[c]) *
                   numeric::squared_euclidean_distance(centroids.row(c), grand);
    }
    double trace_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        trace_w +=
            numeric::squared_euclidean_distance(points.row(i), centroids.row(view.dense[i]));
    }
    if (trace_w == 0.0) {
        throw Error(ErrorKind::InfiniteIndex,
                    "calinski_harabasz: zero within-cluster dispersion");
    }
    return (trace_b / static_cast<double>(view.k - 1)) /
           (trace_w / static_cast<double>(n - view.k));
}

double silhouette_score(const ProfileMatrix& pm, const Partition& p) {
    check_same_users(pm, p, "silhouette");
    return silhouette_score(pm.standardized_values, p.labels);
}

double davies_bouldin_index(const ProfileMatrix& pm, const Partition& p) {
    check_same_users(pm, p, "davies_bouldin");
    return davies_bouldin_index(pm.standardized_values, p.labels);
}

double calinski_harabasz_index(const ProfileMatrix& pm, const Partition& p) {
    check_same_users(pm, p, "calinski_harabasz");
    return calinski_harabasz_index(pm.standardized_values, p.labels);
}

ValidityScores score_partition(const ProfileMatrix& pm, const Partition& p) {
    return {silhouette_score(pm, p), davies_bouldin_index(pm, p),
            calinski_harabasz_index(pm, p)};
}

ValidityReport score_all(const std::array<const ProfileMatrix*, 3>& profiles,
                         const std::array<const Partition*, 3>& kmeans_partitions,
                         const Partition* robust) {
    using MetricFn = double (*)(const ProfileMatrix&, const Partition&);
    constexpr std::array<MetricFn, 3> fns = {
        static_cast<MetricFn>(&silhouette_score),
        static_cast<MetricFn>(&davies_bouldin_index),
        static_cast<MetricFn>(&calinski_harabasz_index),
    };

    ValidityReport report;
    for (std::size_t metric = 0; metric < 3; ++metric) {
        for (std::size_t alg = 0; alg < 2; ++alg) {
            for (std::size_t mod = 0; mod < 3; ++mod) {
                MetricCell& cell = report.cells[metric][alg][mod];
                const ProfileMatrix* pm = profiles[mod];
                const Partition* part = alg == 0 ? kmeans_partitions[mod] : robust;
                if (!pm || !part) {
                    cell.error_kind = "skipped";
                    cell.error = !pm ? "feature module not selected"
                                     : "robust clustering not computed";
                    continue;
                }
                try {
                    cell.value = fns[metric](*pm, *part);
                    cell.ok = true;
                } catch (const Error& e) {
                    cell.error_kind = error_kind_name(e.kind());
                    cell.error = e.what();
                }
            }
        }
    }
    return report;
}

} // namespace profilecast
