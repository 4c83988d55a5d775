#pragma once

#include <cstdint>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/report.hpp"

namespace rnla {

// Leverage-score approximation through a constant-factor embedding, and the
// (1+eps)-subspace embedding built by two-stage row sampling.

struct LevSampleConfig {
    double epsilon = 0.25;          // target distortion, in (0,1)
    double alpha = 0.25;            // passed through to the embedding pipeline
    double sample_const = 8.0;      // c_s in s = (1/eps^2) * d * c_s * log d
    double stage1_oversample = 4.0; // beta: stage-1 inclusion inflation
    std::size_t jl_cols_stage1 = 8;
    std::uint64_t seed = 0;
};

struct SampledRows {
    std::vector<std::size_t> indices;  // distinct, increasing
    std::vector<double> probs;         // f_i per kept index, each in (0, 1]
    bool scaled = false;               // rows divided by sqrt(f_i)
};

struct QrLevFactors {
    DenseMatrix r;      // d x d; ||a_i r||^2 approximates the i-th leverage
    double xi_est = 0;  // measured distortion of the underlying embedding
};

// R from the QR of a constant-factor embedding of A. Throws
// Error("rank-deficient") when the sketch loses column rank.
QrLevFactors qr_lev_factors(const DenseMatrix& a, const LevSampleConfig& cfg);

// Bernoulli row sample with inclusion probabilities f_i built from two
// rounds of Gaussian norm estimation: a cheap stage-1 pass that oversamples
// and a stage-2 refinement that rejection-samples back down. Each f_i lands
// in [min(1, (s/16) g_i / G), min(1, s g_i / G)] w.h.p., where
// g_i = ||a_i R||^2 and G = ||A R||_F^2.
SampledRows two_stage_sample(const DenseMatrix& a, const DenseMatrix& r,
                             double s, double alpha, std::uint64_t seed,
                             std::size_t jl_cols_stage1 = 8,
                             double stage1_oversample = 4.0);

struct EpsEmbedResult {
    DenseMatrix sketched;  // sampled rows of A scaled by 1/sqrt(f_i)
    SampledRows rows;
    RunReport report;
};

// Algorithm: leverage factors from the constant embedding, two-stage sample
// with budget s = (1/eps^2) * d * c_s * log d, rows scaled by 1/sqrt(f_i).
EpsEmbedResult eps_subspace_embed(const DenseMatrix& a,
                                  const LevSampleConfig& cfg);

// r with-replacement draws proportional to squared row norms, each drawn
// row scaled by 1/sqrt(r * p_i); the approximate-matrix-product primitive.
DenseMatrix row_norm_sample(const DenseMatrix& m, std::size_t r,
                            std::uint64_t seed);

}  // namespace rnla
