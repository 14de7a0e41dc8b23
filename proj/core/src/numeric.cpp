#include "profilecast/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "profilecast/errors.hpp"

namespace profilecast {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows_in) {
    Matrix m;
    m.rows = rows_in.size();
    m.cols = rows_in.empty() ? 0 : rows_in.front().size();
    m.data.reserve(m.rows * m.cols);
    for (const auto& r : rows_in) {
        if (r.size() != m.cols) {
            throw Error(ErrorKind::Shape, "from_rows: ragged row lengths");
        }
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
}

void Matrix::validate() const {
    if (data.size() != rows * cols) {
        throw Error(ErrorKind::Shape, "matrix: data length != rows * cols");
    }
    if (!col_names.empty() && col_names.size() != cols) {
        throw Error(ErrorKind::Shape, "matrix: col_names length != cols");
    }
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::Shape, "matrix: non-finite entry");
        }
    }
}

namespace numeric {

namespace {

std::vector<double> column_means(const Matrix& m) {
    std::vector<double> means(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) means[c] += m.at(r, c);
    }
    for (auto& v : means) v /= static_cast<double>(m.rows);
    return means;
}

bool is_constant_std(double stddev, double mean) {
    return stddev <= 1e-15 * std::max(1.0, std::abs(mean));
}

} // namespace

StandardizeResult standardize(const Matrix& m) {
    if (m.rows < 1) {
        throw Error(ErrorKind::InsufficientData, "standardize: requires at least one row");
    }
    StandardizeResult out;
    out.means = column_means(m);
    out.stddevs.assign(m.cols, 0.0);
    out.constant_cols.assign(m.cols, false);

    for (std::size_t c = 0; c < m.cols; ++c) {
        double ss = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) {
            double d = m.at(r, c) - out.means[c];
            ss += d * d;
        }
        out.stddevs[c] = std::sqrt(ss / static_cast<double>(m.rows));
        out.constant_cols[c] = is_constant_std(out.stddevs[c], out.means[c]);
    }

    out.values = Matrix(m.rows, m.cols);
    out.values.col_names = m.col_names;
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            out.values.at(r, c) = out.constant_cols[c]
                ? 0.0
                : (m.at(r, c) - out.means[c]) / out.stddevs[c];
        }
    }
    return out;
}

Matrix covariance_matrix(const Matrix& m) {
    if (m.rows < 2) {
        throw Error(ErrorKind::InsufficientData, "covariance_matrix: requires at least two rows");
    }
    auto means = column_means(m);
    Matrix cov(m.cols, m.cols);
    cov.col_names = m.col_names;
    for (std::size_t i = 0; i < m.cols; ++i) {
        for (std::size_t j = i; j < m.cols; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < m.rows; ++r) {
                s += (m.at(r, i) - means[i]) * (m.at(r, j) - means[j]);
            }
            double v = s / static_cast<double>(m.rows - 1);
            cov.at(i, j) = v;
            cov.at(j, i) = v;
        }
    }
    return cov;
}

CorrelationResult pearson_correlation_matrix(const Matrix& m) {
    if (m.rows < 2) {
        throw Error(ErrorKind::InsufficientData,
                    "pearson_correlation_matrix: requires at least two rows");
    }
    auto means = column_means(m);
    std::vector<double> ss(m.cols, 0.0);
    CorrelationResult out;
    out.constant_cols.assign(m.cols, false);
    for (std::size_t c = 0; c < m.cols; ++c) {
        for (std::size_t r = 0; r < m.rows; ++r) {
            double d = m.at(r, c) - means[c];
            ss[c] += d * d;
        }
        double stddev = std::sqrt(ss[c] / static_cast<double>(m.rows));
        out.constant_cols[c] = is_constant_std(stddev, means[c]);
    }

    out.values = Matrix(m.cols, m.cols);
    out.values.col_names = m.col_names;
    for (std::size_t i = 0; i < m.cols; ++i) {
        for (std::size_t j = i; j < m.cols; ++j) {
            double r_ij;
            if (out.constant_cols[i] || out.constant_cols[j]) {
                r_ij = 0.0;
            } else if (i == j) {
                r_ij = 1.0;
            } else {
                double s = 0.0;
                for (std::size_t r = 0; r < m.rows; ++r) {
                    s += (m.at(r, i) - means[i]) * (m.at(r, j) - means[j]);
                }
                r_ij = s / std::sqrt(ss[i] * ss[j]);
                r_ij = std::clamp(r_ij, -1.0, 1.0);
            }
            out.values.at(i, j) = r_ij;
            out.values.at(j, i) = r_ij;
        }
    }
    return out;
}

namespace {

double max_offdiagonal(const Matrix& a) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < a.cols; ++p) {
        for (std::size_t q = p + 1; q < a.cols; ++q) {
            off = std::max(off, std::abs(a.at(p, q)));
        }
    }
    return off;
}

// One Jacobi rotation zeroing a[p][q], accumulated into v.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    double apq = a.at(p, q);
    if (apq == 0.0) return;
    double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
    double t = (theta >= 0.0 ? 1.0 : -1.0) /
               (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    double c = 1.0 / std::sqrt(t * t + 1.0);
    double s = t * c;
    double tau = s / (1.0 + c);

    double app = a.at(p, p);
    double aqq = a.at(q, q);
    a.at(p, p) = app - t * apq;
    a.at(q, q) = aqq + t * apq;
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;

    const std::size_t n = a.cols;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        double aip = a.at(i, p);
        double aiq = a.at(i, q);
        a.at(i, p) = aip - s * (aiq + tau * aip);
        a.at(i, q) = aiq + s * (aip - tau * aiq);
        a.at(p, i) = a.at(i, p);
        a.at(q, i) = a.at(i, q);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double vip = v.at(i, p);
        double viq = v.at(i, q);
        v.at(i, p) = vip - s * (viq + tau * vip);
        v.at(i, q) = viq + s * (vip - tau * viq);
    }
}

} // namespace

EigenDecomposition eigh_symmetric(const Matrix& input) {
    if (input.rows != input.cols) {
        throw Error(ErrorKind::Shape, "eigh_symmetric: matrix is not square");
    }
    const std::size_t n = input.cols;
    double scale = 0.0;
    for (double v : input.data) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(input.at(i, j) - input.at(j, i)) > 1e-9) {
                std::ostringstream msg;
                msg << "eigh_symmetric: input not symmetric at (" << i << "," << j
                    << "): " << input.at(i, j) << " vs " << input.at(j, i);
                throw Error(ErrorKind::Shape, msg.str());
            }
        }
    }

    Matrix a = input;
    // Work on the exactly symmetrized copy.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double avg = 0.5 * (a.at(i, j) + a.at(j, i));
            a.at(i, j) = avg;
            a.at(j, i) = avg;
        }
    }
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    constexpr int kMaxSweeps = 100;
    const double tol = 1e-12 * std::max(1.0, scale);
    bool converged = (n <= 1) || max_offdiagonal(a) <= tol;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a.at(p, q)) > tol) jacobi_rotate(a, v, p, q);
            }
        }
        converged = max_offdiagonal(a) <= tol;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "eigh_symmetric: no convergence after " << kMaxSweeps
            << " sweeps, off-diagonal residual " << max_offdiagonal(a);
        throw Error(ErrorKind::Convergence, msg.str());
    }

    // Sort eigenpairs by descending eigenvalue; stable so equal values keep
    // their sweep order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a.at(x, x) > a.at(y, y);
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t src = order[k];
        out.eigenvalues[k] = a.at(src, src);
        // Fix the sign: largest-magnitude component positive.
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double mag = std::abs(v.at(i, src));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        double sign = v.at(pivot, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors.at(i, k) = sign * v.at(i, src);
        }
    }
    return out;
}

double squared_euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::Shape, "euclidean_distance: vector length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    return std::sqrt(squared_euclidean_distance(x, y));
}

} // namespace numeric
} // namespace profilecast
