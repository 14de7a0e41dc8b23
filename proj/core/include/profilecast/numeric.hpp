#pragma once

#include <span>
#include <vector>

#include "profilecast/matrix.hpp"

// Self-contained numerical kernel shared by every downstream module:
// z-score standardization, covariance, Pearson correlation, symmetric
// eigendecomposition (cyclic Jacobi), and the Euclidean metric.
//
// Conventions, stated once so tests and oracles agree:
//   - standardization uses the population denominator (n),
//   - covariance uses the sample denominator (n - 1),
//   - all reductions run in fixed order, so identical inputs give
//     bit-identical outputs.

namespace profilecast::numeric {

struct StandardizeResult {
    Matrix values;
    std::vector<double> means;
    std::vector<double> stddevs;     // population std per column
    std::vector<bool> constant_cols; // constant columns map to all-zeros
};

// Each non-constant output column has mean 0 and population std 1
// (within 1e-12). Requires rows >= 1.
StandardizeResult standardize(const Matrix& m);

// cols x cols symmetric sample covariance. Requires rows >= 2.
Matrix covariance_matrix(const Matrix& m);

struct CorrelationResult {
    Matrix values;                   // symmetric, entries in [-1, 1]
    std::vector<bool> constant_cols; // constant columns correlate 0 with everything
};

// Requires rows >= 2. Non-constant diagonal entries are exactly 1.
CorrelationResult pearson_correlation_matrix(const Matrix& m);

struct EigenDecomposition {
    std::vector<double> eigenvalues; // descending
    Matrix eigenvectors;             // orthonormal; column i pairs with eigenvalues[i]
};

// Cyclic Jacobi rotations: iteration cap 100 sweeps, off-diagonal
// tolerance 1e-12 (scaled by the input magnitude). Input must be
// symmetric within 1e-9. Sign convention: the largest-magnitude
// component of each eigenvector is positive (ties: first such index).
EigenDecomposition eigh_symmetric(const Matrix& a);

double euclidean_distance(std::span<const double> x, std::span<const double> y);
double squared_euclidean_distance(std::span<const double> x, std::span<const double> y);

} // namespace profilecast::numeric
