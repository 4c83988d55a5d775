#pragma once

#include <cstdint>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/report.hpp"

namespace rnla {

// (1+eps)-approximate least squares: (1+sqrt(eps))-embedding of [A b],
// QR preconditioner from a constant-factor embedding, closed-form warm
// start, gradient descent on the preconditioned sketched problem.

struct LsqOracle {
    std::vector<double> x;    // minimum-norm solution
    double residual = 0.0;    // ||A x - b||_2
};

LsqOracle exact_lsq_oracle(const DenseMatrix& a, const std::vector<double>& b);

struct GdResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    std::vector<double> objective_trace;  // ||M x_t - c||^2, nonincreasing
    bool cap_hit = false;
};

// Fixed-step gradient descent on ||M x - c||^2 with eta = 1/lambda_max(M^T M);
// exits early when the objective plateaus (relative change < eps/10 over 5
// consecutive steps) and always returns the best iterate seen.
GdResult gd_lsq(const DenseMatrix& m, const std::vector<double>& c,
                std::vector<double> x0, double eps, std::size_t cap);

struct RegressionResult {
    std::vector<double> y;               // length d, in original coordinates
    double residual = 0.0;               // ||A y - b||_2 on the original data
    std::size_t iterations = 0;
    double warm_start_residual = 0.0;
    double oracle_ratio = -1.0;          // negative = oracle not computed
    std::vector<double> objective_trace; // GD objective per step, nonincreasing
    RunReport report;
};

RegressionResult solve_regression(const DenseMatrix& a,
                                  const std::vector<double>& b, double eps,
                                  double alpha, std::uint64_t seed,
                                  bool with_oracle = true);

}  // namespace rnla
