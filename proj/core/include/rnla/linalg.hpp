#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/sparse_matrix.hpp"

namespace rnla {

// Deterministic dense/sparse products and decompositions, plus the exact
// brute-force quantities (leverage scores, pseudo-inverse solves) that the
// pipeline and the test oracles both rely on.

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul(const SparseMatrix& a, const DenseMatrix& b);

struct SvdFactors {
    DenseMatrix u;               // n x k, orthonormal columns
    std::vector<double> sigma;   // length k, nonincreasing, positive
    DenseMatrix v;               // d x k, orthonormal columns
    std::size_t rank() const { return sigma.size(); }
};

// Thin SVD with factors truncated at the rank tolerance
// tol_factor * max(n,d) * eps * sigma_max.
SvdFactors svd_thin(const DenseMatrix& a, double tol_factor = 10.0);

struct QrPreconditioner {
    DenseMatrix q;  // p x d, orthonormal columns
    DenseMatrix r;  // d x d upper triangular with M * r = q
};

// QR-derived preconditioner: returns Q and the inverse of the triangular
// factor, so that M * R = Q. Throws Error("rank-deficient") if M does not
// have full column rank.
QrPreconditioner qr_preconditioner(const DenseMatrix& m);

std::vector<double> exact_leverage_scores(const DenseMatrix& a);

std::size_t numerical_rank(const DenseMatrix& a, double tol_factor = 10.0);

// Singular values above a caller-supplied absolute threshold; used when a
// residual matrix must be ranked against the scale of its source, not its
// own (possibly pure-noise) top singular value.
std::size_t rank_above(const DenseMatrix& a, double abs_threshold);

struct SpectralEstimate {
    double value = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
};

// Power-iteration estimate of sigma_max; deterministic for a fixed seed.
SpectralEstimate spectral_norm(const DenseMatrix& a, double tol = 1e-6,
                               std::size_t max_iter = 1000,
                               std::uint64_t seed = 0);

// Condition number sigma_max/sigma_min of a sketched orthonormal basis.
// Returns +infinity when the input is numerically rank-deficient.
double distortion(const DenseMatrix& sketched_basis);

inline constexpr double kInfDistortion = std::numeric_limits<double>::infinity();

// Minimum-norm least-squares solve via the thin SVD.
std::vector<double> pseudo_inverse_apply(const DenseMatrix& m,
                                         const std::vector<double>& v);

// Orthonormal basis of the column space (U factor of the thin SVD).
DenseMatrix column_basis(const DenseMatrix& a);

}  // namespace rnla
