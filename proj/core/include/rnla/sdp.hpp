#pragma once

#include <cstdint>
#include <vector>

#include "rnla/dense_matrix.hpp"

namespace rnla {

// Packing SDP over row weights: find w in
//   W = { w : sum_i w_i = 1, 0 <= w_i <= 2/p }
// minimizing lambda_max(sum_i w_i y_i y_i^T), where the y_i are sampled
// SRHT rows projected onto the span of the OSNAP-compressed input.

struct PackingInstance {
    DenseMatrix projected_rows;  // p x d, row i = coordinates of the
                                 // projection of x_i in the orthonormal basis
    std::size_t p() const { return projected_rows.rows(); }
    double cap() const { return 2.0 / static_cast<double>(p()); }
};

struct WeightVector {
    std::vector<double> w;

    // Box and simplex constraints: 0 <= w_i <= (2/p)(1+1e-6),
    // |sum w_i - 1| <= 1e-6. Throws Error("weights") on violation.
    void validate(std::size_t p) const;
};

// Projects the sampled rows onto the span of the compressed input.
// basis_q must have orthonormal columns (from qr_preconditioner of the
// sampled sketch); r is the matching preconditioner, used only on the
// gradient-descent projection path.
PackingInstance build_packing_instance(const DenseMatrix& sampled_rows,
                                       const DenseMatrix& basis_q,
                                       const DenseMatrix& r,
                                       bool use_gradient_projection = false,
                                       double gd_accuracy = 1e-8);

struct SdpResult {
    WeightVector weights;
    double lambda_max = 0.0;         // certified objective at the returned w
    bool converged = true;
    std::size_t iterations = 0;
    std::vector<double> objective_trace;  // best-so-far lambda_max per iteration
};

// First-order solver on the simplex-with-box W: Frank-Wolfe steps against a
// softmax-smoothed lambda_max, with a line search that never lets the
// incumbent objective increase.
SdpResult solve_packing_sdp(const PackingInstance& inst, double target_c,
                            double accuracy, std::size_t max_iter,
                            std::uint64_t seed);

// lambda_max(sum_i w_i y_i y_i^T) via power iteration on the weighted Gram
// matrix; read-only check.
double verify_weights(const WeightVector& w, const PackingInstance& inst);

// Instance-adaptive default target: twice the uniform-weight objective after
// dropping the heaviest 1% of rows.
double default_sdp_target(const PackingInstance& inst);

}  // namespace rnla
