#include "rnla/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnla/error.hpp"
#include "rnla/linalg.hpp"

namespace rnla {

namespace {

Eigen::MatrixXd weighted_gram(const DenseMatrix& y, const std::vector<double>& w) {
    const Eigen::Index d = static_cast<Eigen::Index>(y.cols());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        if (w[i] == 0.0) continue;
        Eigen::Map<const Eigen::VectorXd> yi(y.row_ptr(i), d);
        g.noalias() += w[i] * yi * yi.transpose();
    }
    return g;
}

double top_eigenvalue(const Eigen::MatrixXd& g) {
    if (g.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

// Softmax-smoothed spectral norm: mu * log tr exp(G / mu), shifted for
// numerical stability. Upper-bounds lambda_max by at most mu * log d.
double smoothed_objective(const Eigen::MatrixXd& g, double mu) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        s += std::exp((ev(i) - lmax) / mu);
    return lmax + mu * std::log(s);
}

// Gradient of the smoothed objective w.r.t. the weights:
// g_i = y_i^T P y_i with P = exp(G/mu) / tr exp(G/mu).
std::vector<double> smoothed_gradient(const DenseMatrix& y,
                                      const Eigen::MatrixXd& g, double mu) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    Eigen::VectorXd expv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        expv(i) = std::exp((ev(i) - lmax) / mu);
    expv /= expv.sum();
    const Eigen::MatrixXd p =
        es.eigenvectors() * expv.asDiagonal() * es.eigenvectors().transpose();

    std::vector<double> grad(y.rows());
    const Eigen::Index d = static_cast<Eigen::Index>(y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i) {
        Eigen::Map<const Eigen::VectorXd> yi(y.row_ptr(i), d);
        grad[i] = yi.dot(p * yi);
    }
    return grad;
}

// Linear minimization over W: put the 2/p cap on the smallest-gradient
// coordinates until the simplex mass is spent.
std::vector<double> box_simplex_argmin(const std::vector<double>& grad, double cap) {
    std::vector<std::size_t> order(grad.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return grad[a] < grad[b]; });
    std::vector<double> u(grad.size(), 0.0);
    double mass = 1.0;
    for (std::size_t k : order) {
        const double take = std::min(cap, mass);
        u[k] = take;
        mass -= take;
        if (mass <= 0.0) break;
    }
    return u;
}

}  // namespace

void WeightVector::validate(std::size_t p) const {
    require(w.size() == p, "weights", "weight vector length mismatch");
    const double cap = 2.0 / static_cast<double>(p);
    double sum = 0.0;
    for (double wi : w) {
        require(wi >= 0.0, "weights", "negative weight");
        require(wi <= cap * (1.0 + 1e-6), "weights", "weight exceeds box cap");
        sum += wi;
    }
    require(std::abs(sum - 1.0) <= 1e-6, "weights", "weights do not sum to 1");
}

PackingInstance build_packing_instance(const DenseMatrix& sampled_rows,
                                       const DenseMatrix& basis_q,
                                       const DenseMatrix& r,
                                       bool use_gradient_projection,
                                       double gd_accuracy) {
    require(sampled_rows.cols() == basis_q.rows(), "shape",
            "build_packing_instance: sampled rows vs basis dims");
    require(r.rows() == r.cols() && r.cols() == basis_q.cols(), "shape",
            "build_packing_instance: preconditioner dims");

    // basis_q must have orthonormal columns.
    const std::size_t d = basis_q.cols();
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < basis_q.rows(); ++i)
                s += basis_q(i, a) * basis_q(i, b);
            const double want = (a == b) ? 1.0 : 0.0;
            require(std::abs(s - want) <= 1e-6, "basis",
                    "build_packing_instance: basis is not orthonormal");
        }
    }

    PackingInstance inst;
    if (!use_gradient_projection) {
        // Exact projection coordinates: y_i = Q^T x_i.
        inst.projected_rows = matmul(sampled_rows, basis_q);
        return inst;
    }

    // Preconditioned-gradient path: minimize ||Q z - x||^2 per row. Since Q
    // has orthonormal columns the Hessian is the identity and each step is a
    // residual correction; iterate until the gradient is below gd_accuracy.
    const std::size_t p = sampled_rows.rows();
    inst.projected_rows = DenseMatrix(p, d);
    for (std::size_t i = 0; i < p; ++i) {
        std::vector<double> z(d, 0.0);
        for (std::size_t iter = 0; iter < 64; ++iter) {
            // grad = Q^T (Q z - x)
            std::vector<double> qz(basis_q.rows(), 0.0);
            for (std::size_t rr = 0; rr < basis_q.rows(); ++rr) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) s += basis_q(rr, j) * z[j];
                qz[rr] = s - sampled_rows(i, rr);
            }
            std::vector<double> grad(d, 0.0);
            for (std::size_t rr = 0; rr < basis_q.rows(); ++rr)
                for (std::size_t j = 0; j < d; ++j) grad[j] += basis_q(rr, j) * qz[rr];
            double gn = norm2(grad);
            for (std::size_t j = 0; j < d; ++j) z[j] -= grad[j];
            if (gn <= gd_accuracy) break;
        }
        for (std::size_t j = 0; j < d; ++j) inst.projected_rows(i, j) = z[j];
    }
    return inst;
}

SdpResult solve_packing_sdp(const PackingInstance& inst, double target_c,
                            double accuracy, std::size_t max_iter,
                            std::uint64_t seed) {
    require(target_c > 0.0, "param", "solve_packing_sdp: target_c must be > 0");
    require(accuracy > 0.0 && accuracy < 1.0, "param",
            "solve_packing_sdp: accuracy in (0,1)");
    const std::size_t p = inst.p();
    require(p >= 1, "infeasible", "solve_packing_sdp: empty instance");
    (void)seed;  // solver is deterministic; seed kept for interface stability

    const DenseMatrix& y = inst.projected_rows;
    const std::size_t d = y.cols();

    SdpResult res;
    std::vector<double> w(p, 1.0 / static_cast<double>(p));
    Eigen::MatrixXd gram = weighted_gram(y, w);
    double best_lambda = top_eigenvalue(gram);
    std::vector<double> best_w = w;
    res.objective_trace.push_back(best_lambda);

    if (best_lambda <= 0.0 || d == 0) {
        res.weights.w = std::move(best_w);
        res.lambda_max = std::max(best_lambda, 0.0);
        return res;
    }
    // Uniform weights already meet the target: return them untouched so
    // the caller's reweighting degenerates to the identity.
    if (best_lambda <= (1.0 + accuracy) * target_c) {
        res.weights.w = std::move(best_w);
        res.lambda_max = best_lambda;
        return res;
    }

    const double mu =
        accuracy * best_lambda / (4.0 * std::log(static_cast<double>(d) + 2.0));

    for (std::size_t it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        const std::vector<double> grad = smoothed_gradient(y, gram, mu);
        const std::vector<double> u = box_simplex_argmin(grad, inst.cap());

        // Frank-Wolfe gap; also the optimality certificate.
        double gap = 0.0;
        for (std::size_t i = 0; i < p; ++i) gap += grad[i] * (w[i] - u[i]);

        Eigen::MatrixXd gram_u = weighted_gram(y, u);

        // Backtracking from the classic 2/(t+2) step on the smoothed
        // objective; accept the best candidate.
        const double f_cur = smoothed_objective(gram, mu);
        double gamma0 = 2.0 / (static_cast<double>(it) + 2.0);
        double best_gamma = 0.0, best_f = f_cur;
        for (double gamma = gamma0; gamma > 1e-6; gamma *= 0.5) {
            const double f_try =
                smoothed_objective((1.0 - gamma) * gram + gamma * gram_u, mu);
            if (f_try < best_f) {
                best_f = f_try;
                best_gamma = gamma;
            }
        }
        if (best_gamma > 0.0) {
            for (std::size_t i = 0; i < p; ++i)
                w[i] = (1.0 - best_gamma) * w[i] + best_gamma * u[i];
            gram = (1.0 - best_gamma) * gram + best_gamma * gram_u;
        }

        const double lambda = top_eigenvalue(gram);
        if (lambda < best_lambda) {
            best_lambda = lambda;
            best_w = w;
        }
        res.objective_trace.push_back(best_lambda);

        if (best_lambda <= (1.0 + accuracy) * target_c) break;
        if (gap <= accuracy * std::max(best_lambda, 1e-300) && best_gamma == 0.0)
            break;  // stationary within accuracy
    }

    res.weights.w = std::move(best_w);
    res.weights.validate(p);
    res.lambda_max = verify_weights(res.weights, inst);
    res.converged = res.lambda_max <= (1.0 + accuracy) * target_c ||
                    res.iterations < max_iter;
    return res;
}

double verify_weights(const WeightVector& w, const PackingInstance& inst) {
    require(w.w.size() == inst.p(), "shape", "verify_weights: length mismatch");
    const Eigen::MatrixXd gram = weighted_gram(inst.projected_rows, w.w);
    DenseMatrix g(inst.projected_rows.cols(), inst.projected_rows.cols());
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            g(i, j) = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return spectral_norm(g, 1e-6, 10000, 0).value;
}

double default_sdp_target(const PackingInstance& inst) {
    const std::size_t p = inst.p();
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return inst.projected_rows.row_sq_norm(a) < inst.projected_rows.row_sq_norm(b);
    });
    const std::size_t keep = p - std::max<std::size_t>(1, p / 100);
    std::vector<double> w(p, 0.0);
    for (std::size_t k = 0; k < keep; ++k) w[order[k]] = 1.0;
    for (double& x : w) x /= static_cast<double>(keep);
    WeightVector wv{std::move(w)};
    // Box cap may be mildly violated here; this is only a target estimate.
    const double lambda = [&] {
        PackingInstance tmp = inst;
        return verify_weights(wv, tmp);
    }();
    return std::max(2.0 * lambda, 1e-12);
}

}  // namespace rnla
