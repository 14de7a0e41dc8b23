#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oracle {

namespace {

// Input labels may be arbitrary ints; gather them into a stable cluster map.
std::map<int, std::vector<std::size_t>> members_by_label(const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        members[labels[i]].push_back(i);
    }
    return members;
}

Point centroid_of(const Points& pts, const std::vector<std::size_t>& members) {
    Point c(pts[members[0]].size(), 0.0);
    for (std::size_t i : members) {
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += pts[i][j];
    }
    for (double& v : c) v /= static_cast<double>(members.size());
    return c;
}

} // namespace

double distance(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw std::runtime_error("oracle: length mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        sum += (a[j] - b[j]) * (a[j] - b[j]);
    }
    return std::sqrt(sum);
}

double silhouette(const Points& pts, const std::vector<int>& labels) {
    auto members = members_by_label(labels);
    const std::size_t n = pts.size();

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& own = members.at(labels[i]);
        if (own.size() == 1) continue;

        double a = 0.0;
        for (std::size_t j : own) {
            if (j != i) a += distance(pts[i], pts[j]);
        }
        a /= static_cast<double>(own.size() - 1);

        bool have_b = false;
        double b = 0.0;
        for (const auto& [label, other] : members) {
            if (label == labels[i]) continue;
            double mean = 0.0;
            for (std::size_t j : other) mean += distance(pts[i], pts[j]);
            mean /= static_cast<double>(other.size());
            if (!have_b || mean < b) {
                b = mean;
                have_b = true;
            }
        }

        double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double davies_bouldin(const Points& pts, const std::vector<int>& labels) {
    auto members = members_by_label(labels);

    std::vector<Point> centroids;
    std::vector<double> dispersion;
    for (const auto& [label, rows] : members) {
        Point c = centroid_of(pts, rows);
        double s = 0.0;
        for (std::size_t i : rows) s += distance(pts[i], c);
        dispersion.push_back(s / static_cast<double>(rows.size()));
        centroids.push_back(std::move(c));
    }

    const std::size_t k = centroids.size();
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            double d = distance(centroids[i], centroids[j]);
            if (d == 0.0) throw std::runtime_error("oracle: coincident centroids");
            worst = std::max(worst, (dispersion[i] + dispersion[j]) / d);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

double calinski_harabasz(const Points& pts, const std::vector<int>& labels) {
    auto members = members_by_label(labels);
    const std::size_t n = pts.size();
    const std::size_t k = members.size();

    std::vector<std::size_t> everyone(n);
    for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
    Point grand = centroid_of(pts, everyone);

    double trace_b = 0.0;
    double trace_w = 0.0;
    for (const auto& [label, rows] : members) {
        Point c = centroid_of(pts, rows);
        double db = distance(c, grand);
        trace_b += static_cast<double>(rows.size()) * db * db;
        for (std::size_t i : rows) {
            double dw = distance(pts[i], c);
            trace_w += dw * dw;
        }
    }
    if (trace_w == 0.0) throw std::runtime_error("oracle: zero within-cluster dispersion");
    return (trace_b / static_cast<double>(k - 1)) /
           (trace_w / static_cast<double>(n - k));
}

std::vector<std::vector<double>> covariance(const Points& rows) {
    const std::size_t n = rows.size();
    const std::size_t d = rows[0].size();

    std::vector<double> mean(d, 0.0);
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    for (double& m : mean) m /= static_cast<double>(n);

    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            double sum = 0.0;
            for (const auto& row : rows) {
                sum += (row[a] - mean[a]) * (row[b] - mean[b]);
            }
            cov[a][b] = sum / static_cast<double>(n - 1);
        }
    }
    return cov;
}

std::vector<std::vector<double>> correlation(const Points& rows) {
    auto cov = covariance(rows);
    const std::size_t d = cov.size();
    std::vector<std::vector<double>> r(d, std::vector<double>(d, 0.0));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            double denom = std::sqrt(cov[a][a] * cov[b][b]);
            r[a][b] = denom > 0.0 ? cov[a][b] / denom : 0.0;
        }
    }
    return r;
}

SixStats six_stats(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    SixStats s;
    s.min = values.front();
    s.max = values.back();
    s.range = s.max - s.min;
    s.median = n % 2 == 1 ? values[n / 2]
                          : (values[n / 2 - 1] + values[n / 2]) / 2.0;

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);

    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(sq / static_cast<double>(n));
    return s;
}

std::vector<int> nearest_centroid(const Points& pts, const Points& centroids) {
    std::vector<int> labels(pts.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = distance(pts[i], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            double d = distance(pts[i], centroids[c]);
            if (d < best) {
                best = d;
                labels[i] = static_cast<int>(c);
            }
        }
    }
    return labels;
}

double inertia(const Points& pts, const Points& centroids, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d = distance(pts[i], centroids[static_cast<std::size_t>(labels[i])]);
        total += d * d;
    }
    return total;
}

} // namespace oracle
