#include "profilecast/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "profilecast/errors.hpp"
#include "profilecast/numeric.hpp"

namespace profilecast {

const char* module_name(FeatureModuleId id) {
    switch (id) {
    case FeatureModuleId::Original: return "Original";
    case FeatureModuleId::Pca: return "PCA";
    case FeatureModuleId::Correlation: return "Correlation";
    }
    return "?";
}

FeatureModuleId module_from_name(const std::string& name) {
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "original") return FeatureModuleId::Original;
    if (lower == "pca") return FeatureModuleId::Pca;
    if (lower == "correlation") return FeatureModuleId::Correlation;
    throw Error(ErrorKind::Param, "unknown feature module: " + name);
}

namespace {

std::vector<RowKey> row_keys_of(const Dataset& ds) {
    std::vector<RowKey> keys;
    keys.reserve(ds.records.size());
    for (const auto& rec : ds.records) keys.push_back({rec.user_id, rec.activity_date});
    return keys;
}

} // namespace

FeatureMatrix select_original(const Dataset& ds) {
    FeatureMatrix fm;
    fm.module = FeatureModuleId::Original;
    fm.row_keys = row_keys_of(ds);
    fm.values = ds.feature_matrix();
    return fm;
}

PcaProjection project_pca(const Dataset& ds, std::size_t n_components,
                          bool standardize_features) {
    if (ds.records.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "project_pca: requires at least two records");
    }
    const std::size_t n_features = ds.feature_names.size();
    if (n_components < 1 || n_components > n_features) {
        std::ostringstream msg;
        msg << "project_pca: n_components " << n_components << " out of range [1, "
            << n_features << "]";
        throw Error(ErrorKind::Param, msg.str());
    }

    Matrix x = ds.feature_matrix();
    Matrix z;
    if (standardize_features) {
        z = numeric::standardize(x).values;
    } else {
        // Center only; PCA is undefined without at least that.
        z = x;
        std::vector<double> means(x.cols, 0.0);
        for (std::size_t r = 0; r < x.rows; ++r) {
            for (std::size_t c = 0; c < x.cols; ++c) means[c] += x.at(r, c);
        }
        for (auto& m : means) m /= static_cast<double>(x.rows);
        for (std::size_t r = 0; r < x.rows; ++r) {
            for (std::size_t c = 0; c < x.cols; ++c) z.at(r, c) -= means[c];
        }
    }

    Matrix cov = numeric::covariance_matrix(z);
    numeric::EigenDecomposition eig = numeric::eigh_symmetric(cov);

    double total_variance = 0.0;
    for (double ev : eig.eigenvalues) total_variance += std::max(ev, 0.0);

    PcaProjection out;
    out.matrix.module = FeatureModuleId::Pca;
    out.matrix.row_keys = row_keys_of(ds);
    out.matrix.values = Matrix(z.rows, n_components);
    for (std::size_t c = 0; c < n_components; ++c) {
        out.matrix.values.col_names.push_back("PC" + std::to_string(c + 1));
        double ev = eig.eigenvalues[c];
        out.explained_variance.push_back(ev);
        out.explained_variance_ratio.push_back(
            total_variance > 0.0 ? std::max(ev, 0.0) / total_variance : 0.0);
    }
    for (std::size_t r = 0; r < z.rows; ++r) {
        for (std::size_t c = 0; c < n_components; ++c) {
            double s = 0.0;
            for (std::size_t f = 0; f < n_features; ++f) {
                s += z.at(r, f) * eig.eigenvectors.at(f, c);
            }
            out.matrix.values.at(r, c) = s;
        }
    }
    return out;
}

CorrelationSelection select_by_correlation(const Dataset& ds, double threshold) {
    if (threshold <= 0.0 || threshold > 1.0) {
        std::ostringstream msg;
        msg << "select_by_correlation: threshold " << threshold << " outside (0, 1]";
        throw Error(ErrorKind::Param, msg.str());
    }
    if (ds.records.size() < 2) {
        throw Error(ErrorKind::InsufficientData,
                    "select_by_correlation: requires at least two records");
    }

    Matrix x = ds.feature_matrix();
    Matrix corr = numeric::pearson_correlation_matrix(x).values;
    const std::size_t n = x.cols;

    // Correlations among survivors do not change when a column is removed,
    // so recomputation on survivors is a mask over the full matrix.
    std::vector<bool> alive(n, true);
    CorrelationSelection out;

    for (;;) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                double a = std::abs(corr.at(i, j));
                if (a >= threshold && a > best) {
                    best = a;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best < 0.0) break;

        auto mean_abs_corr = [&](std::size_t col) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (!alive[k] || k == col) continue;
                sum += std::abs(corr.at(col, k));
                ++count;
            }
            return count ? sum / static_cast<double>(count) : 0.0;
        };
        double mi = mean_abs_corr(bi);
        double mj = mean_abs_corr(bj);
        std::size_t drop = bj; // tie: the later column in input order
        if (mi > mj) drop = bi;
        std::size_t kept = drop == bi ? bj : bi;

        out.dropped.push_back(ds.feature_names[drop]);
        out.trigger_pairs.push_back(
            {ds.feature_names[drop], ds.feature_names[kept], corr.at(bi, bj)});
        alive[drop] = false;
    }

    std::vector<std::size_t> keep_idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (alive[i]) keep_idx.push_back(i);
    }

    out.matrix.module = FeatureModuleId::Correlation;
    out.matrix.row_keys = row_keys_of(ds);
    out.matrix.values = Matrix(x.rows, keep_idx.size());
    for (std::size_t i : keep_idx) out.matrix.values.col_names.push_back(ds.feature_names[i]);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < keep_idx.size(); ++c) {
            out.matrix.values.at(r, c) = x.at(r, keep_idx[c]);
        }
    }
    return out;
}

} // namespace profilecast
