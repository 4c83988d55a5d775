#pragma once

#include <cstdint>
#include <vector>

#include "rnla/dense_matrix.hpp"

namespace rnla {

// Deterministic benchmark/test instance generators; every entry is a pure
// function of (shape, seed).

DenseMatrix gaussian_instance(std::size_t n, std::size_t d, std::uint64_t seed);

// Rank-k factor product G1 (n x k) * G2 (k x d).
DenseMatrix rank_deficient_instance(std::size_t n, std::size_t d,
                                    std::size_t k, std::uint64_t seed);

// Gaussian base with every row duplicated (output has 2n rows).
DenseMatrix duplicated_rows_instance(std::size_t n, std::size_t d,
                                     std::uint64_t seed);

// Gaussian base with row 0 scaled by `weight` (leverage close to 1).
DenseMatrix single_heavy_row_instance(std::size_t n, std::size_t d,
                                      std::uint64_t seed,
                                      double weight = 1000.0);

// Gaussian directions with singular values geometrically spaced in
// [1, kappa].
DenseMatrix ill_conditioned_instance(std::size_t n, std::size_t d,
                                     double kappa, std::uint64_t seed);

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed);

}  // namespace rnla
