#include "rnla/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>

#include "rnla/embed.hpp"
#include "rnla/error.hpp"
#include "rnla/leverage.hpp"
#include "rnla/linalg.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(p[i - 1], p[rng.next_below(i)]);
    return p;
}

// Right-side leverage factor V * diag(1/sigma); rank-deficiency safe.
DenseMatrix inverse_sigma_factor(const SvdFactors& f) {
    DenseMatrix r(f.v.rows(), f.rank());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            r(i, j) = f.v(i, j) / f.sigma[j];
    return r;
}

// Leverage factor for sampling rows of b; uses the constant-factor
// embedding when b is tall enough for the pipeline, b itself otherwise.
DenseMatrix residual_lev_factor(const DenseMatrix& b, std::size_t rank_hint,
                                double alpha, std::uint64_t seed) {
    if (b.rows() >= 2 * b.cols() && b.cols() >= 2) {
        EmbedConfig cfg;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.effective_dim = std::max<std::size_t>(rank_hint, 1);
        return inverse_sigma_factor(svd_thin(constant_embed(b, cfg).sketched));
    }
    return inverse_sigma_factor(svd_thin(b));
}

}  // namespace

RankSketch rank_preserving_sketch(std::size_t d, std::size_t k_target,
                                  std::uint64_t seed) {
    require(d >= 1, "shape", "rank_preserving_sketch: need d >= 1");
    require(k_target >= 1 && k_target <= d, "config",
            "rank_preserving_sketch: need 1 <= k_target <= d");
    RankSketch rs;
    rs.seed = seed;
    const std::size_t m =
        static_cast<std::size_t>(std::ceil(rs.c * static_cast<double>(k_target)));

    // Two balanced layers: each assigns every column one target row by
    // walking a shuffled cycle over all m rows, so rows carry at most
    // ceil(d/m) columns per layer and every row is reachable; the second
    // layer shifts on collision to keep 2 distinct rows per column.
    std::vector<std::size_t> ri, ci;
    std::vector<double> vv;
    std::vector<std::size_t> row_of(d);
    for (std::size_t layer = 0; layer < 2; ++layer) {
        RngStream rng(seed, ModuleId::Basis, layer);
        const std::vector<std::size_t> perm = random_permutation(d, rng);
        const std::vector<std::size_t> rows = random_permutation(m, rng);
        for (std::size_t pos = 0; pos < d; ++pos) {
            const std::size_t col = perm[pos];
            std::size_t row = rows[pos % m];
            if (layer == 1 && row == row_of[col]) row = (row + 1) % m;
            if (layer == 0) row_of[col] = row;
            ri.push_back(row);
            ci.push_back(col);
            vv.push_back(rng.next_signed_unit());
        }
    }
    rs.s = SparseMatrix::from_triplets(m, d, std::move(ri), std::move(ci),
                                       std::move(vv));
    return rs;
}

DenseMatrix orthogonal_complement(const DenseMatrix& rows) {
    require(rows.rows() >= 1, "shape", "orthogonal_complement: empty input");
    const std::size_t c = rows.cols();
    const SvdFactors f = svd_thin(rows);
    if (f.rank() == c) return DenseMatrix(0, c);
    // Basis of the projector onto the null space.
    DenseMatrix p = DenseMatrix::identity(c);
    const DenseMatrix vvt = matmul(f.v, f.v.transposed());
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) p(i, j) -= vvt(i, j);
    return column_basis(p).transposed();
}

std::vector<std::size_t> independent_subset(
    const DenseMatrix& rows, const std::vector<std::size_t>& global_indices,
    double abs_threshold) {
    require(rows.rows() == global_indices.size(), "shape",
            "independent_subset: index list length mismatch");
    const std::size_t n = rows.rows();
    const std::size_t c = rows.cols();
    if (n == 0) return {};
    const std::size_t rank = abs_threshold > 0.0
                                 ? rank_above(rows, abs_threshold)
                                 : numerical_rank(rows);
    if (rank == 0) return {};

    // Greedy modified Gram-Schmidt in index order so earlier rows win every
    // tie (parallel rows included), unlike norm-greedy column pivoting.
    const double thresh =
        abs_threshold > 0.0
            ? abs_threshold
            : 10.0 * static_cast<double>(std::max(n, c)) *
                  std::numeric_limits<double>::epsilon() *
                  spectral_norm(rows).value;

    std::vector<std::vector<double>> basis;  // orthonormal residual directions
    std::vector<std::size_t> out;
    out.reserve(rank);
    for (std::size_t i = 0; i < n && out.size() < rank; ++i) {
        std::vector<double> v = rows.row(i);
        for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize for stability
            for (const std::vector<double>& q : basis) {
                const double proj = dot(v, q);
                for (std::size_t j = 0; j < c; ++j) v[j] -= proj * q[j];
            }
        const double nv = norm2(v);
        if (nv <= thresh) continue;
        for (double& x : v) x /= nv;
        basis.push_back(std::move(v));
        out.push_back(global_indices[i]);
    }
    return out;
}

std::string BasisResult::trace_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const BasisIteration& it : trace) {
        arr.push_back({{"iteration", it.iteration},
                       {"residual_rank", it.residual_rank},
                       {"sampled", it.sampled},
                       {"gained", it.gained}});
    }
    return arr.dump();
}

BasisResult grow_basis(const DenseMatrix& b, std::uint64_t seed) {
    const std::size_t n = b.rows();
    const std::size_t c = b.cols();
    require(n >= 1 && c >= 1, "shape", "grow_basis: empty input");

    BasisResult res;
    const std::size_t cap = static_cast<std::size_t>(
        10.0 * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))) + 20;

    // Residual ranks are judged against the scale of b itself: once the
    // selection spans b, the residual is numerical noise and must read as
    // rank zero even though its own top singular value is nonzero.
    const double thresh = 10.0 * static_cast<double>(std::max(n, c)) *
                          std::numeric_limits<double>::epsilon() *
                          spectral_norm(b).value;
    if (thresh <= 0.0) return res;  // zero matrix

    DenseMatrix z = DenseMatrix::identity(c);  // complement of the selection
    for (std::size_t t = 1; t <= cap; ++t) {
        if (z.rows() == 0) break;
        const DenseMatrix bz = matmul(b, z.transposed());
        const std::size_t r = rank_above(bz, thresh);
        if (r == 0) break;
        res.iterations = t;

        const DenseMatrix lev =
            residual_lev_factor(bz, r, 0.25, mix64(seed ^ (0xb0ULL + t)));
        const DenseMatrix pre = matmul(bz, lev);
        std::vector<double> cdf(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += pre.row_sq_norm(i);
            cdf[i] = total;
        }
        if (total <= 0.0) break;  // numerically empty residual

        const std::size_t draws =
            static_cast<std::size_t>(std::ceil(10.0 * static_cast<double>(r)));
        RngStream rng(seed, ModuleId::Basis, 0x100ULL + t);
        std::vector<std::size_t> cand;
        for (std::size_t k = 0; k < draws; ++k) {
            const double u = rng.next_uniform() * total;
            cand.push_back(static_cast<std::size_t>(
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin()));
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

        const std::vector<std::size_t> add =
            independent_subset(bz.row_block(cand), cand, thresh);
        res.trace.push_back({t, r, draws, add.size()});
        if (add.empty()) continue;
        res.indices.insert(res.indices.end(), add.begin(), add.end());
        std::sort(res.indices.begin(), res.indices.end());
        z = orthogonal_complement(b.row_block(res.indices));
    }

    // Deterministic completion if the cap fired with residual rank left.
    if (z.rows() > 0) {
        const DenseMatrix bz = matmul(b, z.transposed());
        if (rank_above(bz, thresh) > 0) {
            std::vector<std::size_t> all(n);
            std::iota(all.begin(), all.end(), 0);
            const std::vector<std::size_t> add =
                independent_subset(bz, all, thresh);
            res.indices.insert(res.indices.end(), add.begin(), add.end());
            std::sort(res.indices.begin(), res.indices.end());
            res.indices.erase(
                std::unique(res.indices.begin(), res.indices.end()),
                res.indices.end());
            res.fallback = true;
        }
    }
    res.k = res.indices.size();
    return res;
}

BasisResult select_independent_rows(const DenseMatrix& a, std::uint64_t seed,
                                    double alpha) {
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    require(n >= 1 && d >= 1, "shape", "select_independent_rows: empty input");
    require(alpha > 0.0 && alpha <= 1.0, "config",
            "select_independent_rows: alpha must lie in (0,1]");

    BasisResult res;
    if (a.frobenius_norm() == 0.0) return res;  // zero matrix: empty basis

    // Rank estimate: double k_target until the sketched rank stabilizes
    // across two consecutive sizes.
    const std::size_t rank_cap = std::min(n, d);
    std::size_t k_est;
    if (rank_cap <= 16) {
        k_est = numerical_rank(a);
    } else {
        const DenseMatrix at = a.transposed();
        std::size_t prev = n + d + 1;
        std::size_t kt = 16;
        for (;;) {
            const RankSketch rs = rank_preserving_sketch(
                d, std::min(kt, rank_cap), mix64(seed ^ (0xC0ULL + kt)));
            const std::size_t rk = numerical_rank(matmul(rs.s, at));
            if (rk == prev || kt >= rank_cap) {
                k_est = rk;
                break;
            }
            prev = rk;
            kt *= 2;
        }
    }
    if (k_est == 0) return res;

    const RankSketch rs =
        rank_preserving_sketch(d, std::min(k_est, d), mix64(seed ^ 0xD1ULL));
    const DenseMatrix b = matmul(rs.s, a.transposed()).transposed();  // n x m

    // Leverage reduction to O(k log k) rows when that actually shrinks n.
    DenseMatrix b_work = b;
    std::vector<std::size_t> row_map(n);
    std::iota(row_map.begin(), row_map.end(), 0);
    const double budget =
        10.0 * static_cast<double>(k_est) *
        std::log(static_cast<double>(std::max<std::size_t>(k_est, 2)));
    if (static_cast<double>(n) > 2.0 * budget) {
        const DenseMatrix lev =
            residual_lev_factor(b, k_est, alpha, mix64(seed ^ 0xD2ULL));
        SampledRows sampled = two_stage_sample(b, lev, budget, alpha,
                                               mix64(seed ^ 0xD3ULL));
        if (!sampled.indices.empty()) {
            b_work = b.row_block(sampled.indices);
            row_map = sampled.indices;
        }
    }

    BasisResult grown = grow_basis(b_work, mix64(seed ^ 0xD4ULL));
    res.iterations = grown.iterations;
    res.trace = std::move(grown.trace);
    res.fallback = grown.fallback;
    for (std::size_t i : grown.indices) res.indices.push_back(row_map[i]);
    std::sort(res.indices.begin(), res.indices.end());

    // Soundness: the selected rows must be independent in A itself.
    res.indices = independent_subset(a.row_block(res.indices), res.indices);

    // Completeness: top up deterministically if the randomized passes
    // (sketch or sampling) lost rank.
    const std::size_t k_true = numerical_rank(a);
    if (res.indices.size() < k_true) {
        DenseMatrix az = a;
        if (!res.indices.empty()) {
            const DenseMatrix z = orthogonal_complement(a.row_block(res.indices));
            az = matmul(a, z.transposed());
        }
        const double thresh_a = 10.0 * static_cast<double>(std::max(n, d)) *
                                std::numeric_limits<double>::epsilon() *
                                spectral_norm(a).value;
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        const std::vector<std::size_t> add =
            independent_subset(az, all, thresh_a);
        res.indices.insert(res.indices.end(), add.begin(), add.end());
        std::sort(res.indices.begin(), res.indices.end());
        res.indices.erase(std::unique(res.indices.begin(), res.indices.end()),
                          res.indices.end());
        res.fallback = true;
    }
    res.k = res.indices.size();
    return res;
}

BasisResult select_independent_cols(const DenseMatrix& a, std::uint64_t seed,
                                    double alpha) {
    return select_independent_rows(a.transposed(), seed, alpha);
}

}  // namespace rnla
