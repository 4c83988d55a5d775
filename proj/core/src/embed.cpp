#include "rnla/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnla/error.hpp"
#include "rnla/linalg.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

struct PipelineDims {
    std::size_t rows2 = 0;  // first OSNAP output
    std::size_t s2 = 0;
    std::size_t rows1 = 0;  // second OSNAP output = SRHT input length
    std::size_t s1 = 0;
    std::size_t p = 0;      // uniform sample size
};

std::size_t ceil_pos(double x) {
    return static_cast<std::size_t>(std::ceil(std::max(x, 1.0)));
}

void validate_config(const EmbedConfig& cfg) {
    require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "config",
            "embed: alpha must lie in (0,1]");
    require(cfg.srht_blocks >= 1, "config", "embed: need at least one SRHT block");
    require(cfg.osnap_s2_rows_const > 0.0 && cfg.osnap_s1_rows_const > 0.0 &&
                cfg.sample_const > 0.0,
            "config", "embed: pipeline constants must be positive");
}

PipelineDims compute_dims(std::size_t d_eff, const EmbedConfig& cfg) {
    const double d = static_cast<double>(d_eff);
    const double ld = std::log(d);
    PipelineDims dm;
    dm.rows2 = std::max<std::size_t>(
        ceil_pos(cfg.osnap_s2_rows_const * std::pow(d, 1.0 + cfg.alpha) * ld),
        d_eff);
    dm.s2 = std::clamp<std::size_t>(ceil_pos(2.0 / cfg.alpha), 1, dm.rows2);
    dm.rows1 = std::max<std::size_t>(
        ceil_pos(cfg.osnap_s1_rows_const * d * ld), d_eff);
    dm.s1 = std::clamp<std::size_t>(ceil_pos(2.0 * ld), 1, dm.rows1);
    dm.p = ceil_pos(cfg.sample_const * d);
    return dm;
}

const DenseMatrix& as_dense(const DenseMatrix& a) { return a; }
DenseMatrix as_dense(const SparseMatrix& a) { return a.to_dense(); }

bool is_nonzero(const DenseMatrix& a) { return a.frobenius_norm() > 0.0; }
bool is_nonzero(const SparseMatrix& a) { return a.nnz() > 0; }

// Stage seeds are decorrelated from one another; two OSNAP stages with the
// same raw seed would otherwise share column streams.
std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage) {
    return mix64(seed ^ (0x5eedULL + stage));
}

template <class Mat>
EmbedResult embed_impl(const Mat& a, const EmbedConfig& cfg, bool with_sdp) {
    validate_config(cfg);
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    require(n >= d && d >= 1, "shape", "embed: need n >= d >= 1");
    require(is_nonzero(a), "input", "embed: input matrix is zero");

    EmbedResult res;
    res.report.task = "embed";
    res.report.seed = cfg.seed;
    res.report.rows_in = n;
    res.report.cols_in = d;
    res.report.params["alpha"] = cfg.alpha;
    res.report.params["osnap_s2_rows_const"] = cfg.osnap_s2_rows_const;
    res.report.params["osnap_s1_rows_const"] = cfg.osnap_s1_rows_const;
    res.report.params["srht_blocks"] = static_cast<double>(cfg.srht_blocks);
    res.report.params["sample_const"] = cfg.sample_const;
    res.report.params["sdp"] = with_sdp ? 1.0 : 0.0;

    std::size_t d_eff = cfg.effective_dim == 0 ? d : cfg.effective_dim;
    if (d_eff > d) {
        d_eff = d;
        res.report.flags.push_back("effective-dim-clamped");
    }
    res.report.params["effective_dim"] = static_cast<double>(d_eff);

    if (d < 2) {
        // Degenerate single-column input: passthrough with the identity.
        res.sketched = as_dense(a);
        res.op = diagonal_weights_build(std::vector<double>(n, 1.0));
        res.kept_rows.resize(n);
        std::iota(res.kept_rows.begin(), res.kept_rows.end(), 0);
        res.report.rows_out = n;
        res.report.metrics["distortion"] = 1.0;
        res.report.flags.push_back("degenerate");
        res.report.pass = true;
        return res;
    }

    const PipelineDims dm = compute_dims(d_eff, cfg);
    SketchOperator s2 = osnap_build(n, dm.rows2, dm.s2, stage_seed(cfg.seed, 1));
    SketchOperator s1 =
        osnap_build(dm.rows2, dm.rows1, dm.s1, stage_seed(cfg.seed, 2));
    SketchOperator srht =
        srht_build(dm.rows1, cfg.srht_blocks, stage_seed(cfg.seed, 3));
    SketchOperator samp =
        uniform_sample_build(srht.out_dim(), dm.p, stage_seed(cfg.seed, 4));

    DenseMatrix b2 = s2.apply(a);
    DenseMatrix compressed = s1.apply(b2);  // SRHT input, span of interest
    DenseMatrix pre = samp.apply(srht.apply(compressed));  // p x d, unweighted

    res.report.metrics["rows_s2"] = static_cast<double>(dm.rows2);
    res.report.metrics["rows_s1"] = static_cast<double>(dm.rows1);
    res.report.metrics["rows_srht"] = static_cast<double>(srht.out_dim());
    res.report.metrics["nnz_per_col_s2"] = static_cast<double>(dm.s2);
    res.report.metrics["nnz_per_col_s1"] = static_cast<double>(dm.s1);

    std::vector<SketchOperator> chain;
    chain.push_back(std::move(s2));
    chain.push_back(std::move(s1));

    if (!with_sdp) {
        chain.push_back(std::move(srht));
        chain.push_back(std::move(samp));
        res.op = composite_build(std::move(chain));
        res.sketched = std::move(pre);
        res.kept_rows.resize(dm.p);
        std::iota(res.kept_rows.begin(), res.kept_rows.end(), 0);
    } else {
        // Reweighting: project the sampled (unscaled) SRHT rows onto the
        // span of the compressed input and solve the packing SDP.
        const std::vector<std::size_t>& picks = samp.sampled_indices();
        DenseMatrix xs(dm.p, dm.rows1);
        for (std::size_t i = 0; i < dm.p; ++i) {
            const std::vector<double> row = srht.srht_row_unscaled(picks[i]);
            std::copy(row.begin(), row.end(), xs.row_ptr(i));
        }
        DenseMatrix q = column_basis(compressed);
        PackingInstance inst = build_packing_instance(
            xs, q, DenseMatrix::identity(q.cols()));
        const double target = default_sdp_target(inst);
        SdpResult sdp = solve_packing_sdp(inst, target, cfg.sdp_accuracy,
                                          cfg.sdp_max_iter,
                                          stage_seed(cfg.seed, 5));
        if (!sdp.converged) res.report.flags.push_back("not-converged");
        res.report.metrics["sdp_lambda_max"] = sdp.lambda_max;
        res.report.metrics["sdp_target"] = target;
        res.report.metrics["sdp_iterations"] =
            static_cast<double>(sdp.iterations);

        // Final scale sqrt(p * w_i): uniform weights reduce to the exact
        // identity (no roundoff), so an untouched solve leaves the polylog
        // sketch bit-identical.
        std::vector<double> diag(dm.p);
        for (std::size_t i = 0; i < dm.p; ++i) {
            const double pw = static_cast<double>(dm.p) * sdp.weights.w[i];
            diag[i] = std::abs(pw - 1.0) <= 1e-12 ? 1.0 : std::sqrt(pw);
        }

        chain.push_back(std::move(srht));
        chain.push_back(std::move(samp));
        chain.push_back(diagonal_weights_build(diag));
        res.op = composite_build(std::move(chain));

        res.kept_rows.clear();
        for (std::size_t i = 0; i < dm.p; ++i)
            if (diag[i] > 0.0) res.kept_rows.push_back(i);
        res.sketched = DenseMatrix(res.kept_rows.size(), d);
        for (std::size_t k = 0; k < res.kept_rows.size(); ++k) {
            const std::size_t i = res.kept_rows[k];
            for (std::size_t j = 0; j < d; ++j)
                res.sketched(k, j) = diag[i] * pre(i, j);
        }
        res.weights = std::move(sdp.weights);
    }

    res.report.rows_out = res.sketched.rows();
    // Distortion against an orthonormal basis of col(A); zero-weight rows
    // contribute nothing, so the full operator gives the same value.
    const double xi = distortion(res.op.apply(column_basis(as_dense(a))));
    res.report.metrics["distortion"] = xi;
    res.report.pass = std::isfinite(xi);
    return res;
}

}  // namespace

EmbedResult polylog_embed(const DenseMatrix& a, const EmbedConfig& cfg) {
    return embed_impl(a, cfg, false);
}

EmbedResult polylog_embed(const SparseMatrix& a, const EmbedConfig& cfg) {
    return embed_impl(a, cfg, false);
}

EmbedResult constant_embed(const DenseMatrix& a, const EmbedConfig& cfg) {
    return embed_impl(a, cfg, true);
}

EmbedResult constant_embed(const SparseMatrix& a, const EmbedConfig& cfg) {
    return embed_impl(a, cfg, true);
}

EffectiveDims rank_adaptive_dims(const DenseMatrix& a, std::size_t k_hint) {
    const std::size_t d = a.cols();
    require(d >= 1 && a.rows() >= 1, "shape", "rank_adaptive_dims: empty input");
    EffectiveDims out;
    if (k_hint > 0) {
        out.k = k_hint;
        if (k_hint > d) {
            out.k = d;
            out.clamped = true;
        }
        return out;
    }
    // Rank of a cheap row-compression; equals rank(A) with high probability
    // and never exceeds it.
    const std::size_t rows = std::min(a.rows(), 4 * d + 8);
    const std::size_t s = std::min<std::size_t>(rows, 4);
    SketchOperator op = osnap_build(a.rows(), rows, s, 0x5eedULL);
    out.k = std::max<std::size_t>(numerical_rank(op.apply(a)), 1);
    return out;
}

}  // namespace rnla
