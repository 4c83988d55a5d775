#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/report.hpp"
#include "rnla/sdp.hpp"
#include "rnla/sketch.hpp"
#include "rnla/sparse_matrix.hpp"

namespace rnla {

// Composition of the subspace-embedding pipeline:
// OSNAP stack -> stacked SRHT -> uniform row sample -> (optional) SDP
// reweighting. Distortion is always measured against an orthonormal basis
// of the input's column space.

struct EmbedConfig {
    double alpha = 0.25;            // OSNAP dimension/sparsity tradeoff, in (0,1]
    double osnap_s2_rows_const = 4.0;
    double osnap_s1_rows_const = 2.0;
    std::size_t srht_blocks = 8;    // m
    double sample_const = 10.0;     // p = ceil(C * d)
    bool sdp = true;
    std::uint64_t seed = 0;

    // SDP solver knobs (used only when sdp is on).
    double sdp_accuracy = 0.25;
    std::size_t sdp_max_iter = 60;

    // 0 means "use the full column dimension"; set via rank_adaptive_dims
    // to run the pipeline at the rank instead.
    std::size_t effective_dim = 0;
};

struct EmbedResult {
    DenseMatrix sketched;            // final (reweighted, zero rows dropped)
    SketchOperator op;               // full composite, all p rows
    std::optional<WeightVector> weights;
    std::vector<std::size_t> kept_rows;  // rows of op's output present in sketched
    RunReport report;
};

EmbedResult polylog_embed(const DenseMatrix& a, const EmbedConfig& cfg);
EmbedResult polylog_embed(const SparseMatrix& a, const EmbedConfig& cfg);

EmbedResult constant_embed(const DenseMatrix& a, const EmbedConfig& cfg);
EmbedResult constant_embed(const SparseMatrix& a, const EmbedConfig& cfg);

struct EffectiveDims {
    std::size_t k = 0;
    bool clamped = false;  // k_hint exceeded the column dimension
};

// Pipeline dimensions for a rank-k input; k_hint = 0 estimates the rank
// from a cheap OSNAP sketch.
EffectiveDims rank_adaptive_dims(const DenseMatrix& a, std::size_t k_hint = 0);

}  // namespace rnla
