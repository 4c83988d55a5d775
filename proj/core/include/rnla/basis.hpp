#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/sparse_matrix.hpp"

namespace rnla {

// Maximal independent row selection: a rank-preserving column sketch, a
// leverage-sampled row reduction, then iterative basis growing against a
// running orthonormal complement.

struct RankSketch {
    SparseMatrix s;   // m x d with m = ceil(c * k_target)
    double c = 11.0;
    std::uint64_t seed = 0;
};

// Sketch with exactly two +-1 entries per column, rows balanced so no row
// carries more than ~2d/m columns.
RankSketch rank_preserving_sketch(std::size_t d, std::size_t k_target,
                                  std::uint64_t seed);

// Orthonormal rows spanning the orthogonal complement of the row space;
// (c - rank) x c, empty for full-row-rank input.
DenseMatrix orthogonal_complement(const DenseMatrix& rows);

// Maximal independent subset via column-pivoted QR of rows^T; returns the
// corresponding entries of global_indices, ascending. Earlier rows win ties.
// abs_threshold > 0 ranks the rows against that absolute singular-value
// cutoff (for residual matrices whose own scale is untrustworthy).
std::vector<std::size_t> independent_subset(
    const DenseMatrix& rows, const std::vector<std::size_t>& global_indices,
    double abs_threshold = 0.0);

struct BasisIteration {
    std::size_t iteration = 0;
    std::size_t residual_rank = 0;
    std::size_t sampled = 0;
    std::size_t gained = 0;
};

struct BasisResult {
    std::vector<std::size_t> indices;  // ascending, rows of the input
    std::size_t k = 0;                 // rank achieved = indices.size()
    std::size_t iterations = 0;
    std::vector<BasisIteration> trace;
    bool fallback = false;  // deterministic completion was needed

    std::string trace_json() const;
};

// Algorithm: repeat { leverage-sample ~10r rows of B * Z^T, extend the
// selection by an independent subset, shrink the complement Z } until the
// residual rank hits zero or the iteration cap 10*log2(N)+20 fires; a
// pivoted-QR sweep completes the basis deterministically after the cap.
BasisResult grow_basis(const DenseMatrix& b, std::uint64_t seed);

// Full pipeline on the original matrix: rank estimation by doubling,
// rank-preserving sketch, leverage reduction, grow_basis; indices refer to
// rows of A and always satisfy rank(A[indices]) = |indices| = rank(A).
BasisResult select_independent_rows(const DenseMatrix& a, std::uint64_t seed,
                                    double alpha = 0.25);

// Column selection via the transpose.
BasisResult select_independent_cols(const DenseMatrix& a, std::uint64_t seed,
                                    double alpha = 0.25);

}  // namespace rnla
