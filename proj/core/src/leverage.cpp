#include "rnla/leverage.hpp"

#include <algorithm>
#include <cmath>

#include "rnla/embed.hpp"
#include "rnla/error.hpp"
#include "rnla/linalg.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

void validate_config(const LevSampleConfig& cfg) {
    require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, "config",
            "leverage: epsilon must lie in (0,1)");
    require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "config",
            "leverage: alpha must lie in (0,1]");
    require(cfg.sample_const > 0.0 && cfg.stage1_oversample > 0.0, "config",
            "leverage: constants must be positive");
    require(cfg.jl_cols_stage1 >= 1, "config",
            "leverage: need at least one stage-1 column");
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed) {
    DenseMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        RngStream rng(seed, ModuleId::Leverage, i);
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.next_gaussian();
    }
    return g;
}

// Mean of squared entries per row of A * (R * G) with G Gaussian d x j:
// an unbiased estimate of ||a_i R||^2.
std::vector<double> jl_row_norms(const DenseMatrix& a, const DenseMatrix& r,
                                 std::size_t j, std::uint64_t seed) {
    const DenseMatrix rg = matmul(r, gaussian_matrix(r.cols(), j, seed));
    const DenseMatrix t = matmul(a, rg);
    std::vector<double> est(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        est[i] = t.row_sq_norm(i) / static_cast<double>(j);
    return est;
}

}  // namespace

QrLevFactors qr_lev_factors(const DenseMatrix& a, const LevSampleConfig& cfg) {
    validate_config(cfg);
    EmbedConfig ecfg;
    ecfg.alpha = cfg.alpha;
    ecfg.seed = cfg.seed;
    EmbedResult emb = constant_embed(a, ecfg);
    QrLevFactors out;
    out.r = qr_preconditioner(emb.sketched).r;
    out.xi_est = emb.report.metrics.at("distortion");
    // The sketch fixes R only up to the embedding's overall scale. Normalize
    // so sigma_max(A R) = 1, which pins ||a_i R||^2 into [tau_i/xi^2, tau_i]
    // against the exact leverage scores; downstream sampling uses ratios and
    // is unaffected.
    const double smax = spectral_norm(matmul(a, out.r)).value;
    require(smax > 0.0, "rank-deficient", "qr_lev_factors: A R vanished");
    for (double& v : out.r.data()) v /= smax;
    return out;
}

SampledRows two_stage_sample(const DenseMatrix& a, const DenseMatrix& r,
                             double s, double alpha, std::uint64_t seed,
                             std::size_t jl_cols_stage1,
                             double stage1_oversample) {
    require(s > 0.0, "config", "two_stage_sample: s must be positive");
    require(alpha > 0.0 && alpha <= 1.0, "config",
            "two_stage_sample: alpha must lie in (0,1]");
    require(a.cols() == r.rows(), "shape",
            "two_stage_sample: A and R dimensions do not match");
    const std::size_t n = a.rows();

    // Budget past 16 n saturates every f_i at 1 regardless of the norms.
    if (s >= 16.0 * static_cast<double>(n)) {
        SampledRows all;
        all.indices.resize(n);
        for (std::size_t i = 0; i < n; ++i) all.indices[i] = i;
        all.probs.assign(n, 1.0);
        return all;
    }

    const std::uint64_t seed_jl1 = mix64(seed ^ 0x1e71ULL);
    const std::uint64_t seed_jl2 = mix64(seed ^ 0x1e72ULL);
    const std::uint64_t seed_draw = mix64(seed ^ 0x1e73ULL);

    // Stage 1: cheap norm estimates, inflated envelope q_i.
    const std::vector<double> est1 = jl_row_norms(a, r, jl_cols_stage1, seed_jl1);
    double fhat = 0.0;
    for (double e : est1) fhat += e;
    SampledRows out;
    if (fhat <= 0.0) return out;  // zero matrix: nothing to sample

    const std::size_t jl2 = static_cast<std::size_t>(
        std::ceil(4.0 * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
    const std::vector<double> est2 = jl_row_norms(a, r, jl2, seed_jl2);
    double fhat2 = 0.0;
    for (double e : est2) fhat2 += e;
    if (fhat2 <= 0.0) return out;

    for (std::size_t i = 0; i < n; ++i) {
        const double q = std::min(1.0, stage1_oversample * s * est1[i] / fhat);
        if (q <= 0.0) continue;
        RngStream rng(seed_draw, ModuleId::Leverage, i);
        if (rng.next_uniform() >= q) continue;
        // Stage 2: refined target f_i <= q_i normalized by its own total;
        // thin by accepting w.p. f_i / q_i.
        const double f =
            std::min(q, std::min(1.0, (s / 4.0) * est2[i] / fhat2));
        if (f <= 0.0) continue;
        if (f < q && rng.next_uniform() >= f / q) continue;
        out.indices.push_back(i);
        out.probs.push_back(f);
    }
    return out;
}

EpsEmbedResult eps_subspace_embed(const DenseMatrix& a,
                                  const LevSampleConfig& cfg) {
    validate_config(cfg);
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    require(n >= d && d >= 1, "shape", "eps_subspace_embed: need n >= d >= 1");

    EpsEmbedResult res;
    res.report.task = "levscore";
    res.report.seed = cfg.seed;
    res.report.rows_in = n;
    res.report.cols_in = d;
    res.report.params["epsilon"] = cfg.epsilon;
    res.report.params["alpha"] = cfg.alpha;
    res.report.params["sample_const"] = cfg.sample_const;
    res.report.params["jl_cols_stage1"] =
        static_cast<double>(cfg.jl_cols_stage1);

    const QrLevFactors lev = qr_lev_factors(a, cfg);
    res.report.metrics["xi_est"] = lev.xi_est;

    const double s = (1.0 / (cfg.epsilon * cfg.epsilon)) *
                     static_cast<double>(d) * cfg.sample_const *
                     std::log(static_cast<double>(std::max<std::size_t>(d, 2)));
    res.report.metrics["sample_budget"] = s;

    res.rows = two_stage_sample(a, lev.r, s, cfg.alpha,
                                mix64(cfg.seed ^ 0x2e7aULL),
                                cfg.jl_cols_stage1, cfg.stage1_oversample);
    const std::size_t kept = res.rows.indices.size();
    res.sketched = DenseMatrix(kept, d);
    for (std::size_t k = 0; k < kept; ++k) {
        const double scale = 1.0 / std::sqrt(res.rows.probs[k]);
        const double* src = a.row_ptr(res.rows.indices[k]);
        for (std::size_t j = 0; j < d; ++j) res.sketched(k, j) = scale * src[j];
    }
    res.rows.scaled = true;
    res.report.rows_out = kept;

    // Max relative deviation of the singular values of S * U from 1.
    const DenseMatrix u = column_basis(a);
    DenseMatrix su(std::max<std::size_t>(kept, 1), u.cols());
    for (std::size_t k = 0; k < kept; ++k) {
        const double scale = 1.0 / std::sqrt(res.rows.probs[k]);
        const double* src = u.row_ptr(res.rows.indices[k]);
        for (std::size_t j = 0; j < u.cols(); ++j) su(k, j) = scale * src[j];
    }
    const SvdFactors f = svd_thin(su);
    double dev = 1.0;  // rank loss counts as full deviation
    if (f.rank() == u.cols()) {
        dev = 0.0;
        for (double sv : f.sigma) dev = std::max(dev, std::abs(sv - 1.0));
    }
    res.report.metrics["sing_dev"] = dev;
    res.report.pass = dev <= cfg.epsilon;
    return res;
}

DenseMatrix row_norm_sample(const DenseMatrix& m, std::size_t r,
                            std::uint64_t seed) {
    require(r >= 1, "config", "row_norm_sample: need r >= 1");
    const std::size_t n = m.rows();
    DenseMatrix out(r, m.cols());
    std::vector<double> cdf(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += m.row_sq_norm(i);
        cdf[i] = total;
    }
    if (total <= 0.0) return out;  // zero matrix samples to zero

    RngStream rng(seed, ModuleId::Leverage, 0xA33ULL);
    for (std::size_t k = 0; k < r; ++k) {
        const double u = rng.next_uniform() * total;
        const std::size_t i = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const double pi = m.row_sq_norm(i) / total;
        const double scale = 1.0 / std::sqrt(static_cast<double>(r) * pi);
        const double* src = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols(); ++j) out(k, j) = scale * src[j];
    }
    return out;
}

}  // namespace rnla
