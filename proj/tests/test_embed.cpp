#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/embed.hpp"
#include "rnla/error.hpp"
#include "rnla/instances.hpp"
#include "rnla/linalg.hpp"
#include "rnla/sparse_matrix.hpp"

using namespace rnla;

namespace {

EmbedConfig config(std::uint64_t seed) {
    EmbedConfig cfg;
    cfg.seed = seed;
    return cfg;
}

std::vector<double> mat_vec(const DenseMatrix& m, const std::vector<double>& x) {
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * x[j];
    return out;
}

}  // namespace

TEST_CASE("embed is deterministic per seed") {
    const DenseMatrix a = gaussian_instance(256, 8, 1);
    const EmbedResult r1 = constant_embed(a, config(7));
    const EmbedResult r2 = constant_embed(a, config(7));
    CHECK(r1.sketched == r2.sketched);
    CHECK(r1.report.to_json() == r2.report.to_json());

    const EmbedResult r3 = constant_embed(a, config(8));
    CHECK(r1.sketched.data() != r3.sketched.data());
}

TEST_CASE("sketched equals the operator applied to A") {
    const DenseMatrix a = gaussian_instance(300, 8, 2);
    const EmbedResult res = constant_embed(a, config(3));
    const DenseMatrix full = res.op.apply(a);
    REQUIRE(res.kept_rows.size() == res.sketched.rows());
    for (std::size_t k = 0; k < res.kept_rows.size(); ++k)
        for (std::size_t j = 0; j < a.cols(); ++j)
            CHECK(res.sketched(k, j) ==
                  doctest::Approx(full(res.kept_rows[k], j)).epsilon(1e-9));
}

TEST_CASE("embedding operator is linear on the column space") {
    const DenseMatrix a = gaussian_instance(300, 8, 4);
    const EmbedResult res = constant_embed(a, config(5));
    const std::vector<double> x = gaussian_vector(8, 9);
    // op(A x) must equal sketched * x on the kept rows.
    const std::vector<double> gax = res.op.apply(mat_vec(a, x));
    const std::vector<double> sx = mat_vec(res.sketched, x);
    double scale = 0.0;
    for (double v : sx) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < res.kept_rows.size(); ++k)
        CHECK(std::abs(sx[k] - gax[res.kept_rows[k]]) <= 1e-8 * (1.0 + scale));
}

TEST_CASE("row budget and distortion are reported") {
    const DenseMatrix a = gaussian_instance(600, 12, 6);
    const EmbedConfig cfg = config(11);
    const EmbedResult res = constant_embed(a, cfg);
    CHECK(res.sketched.rows() <=
          static_cast<std::size_t>(std::ceil(cfg.sample_const * 12)));
    const double xi = res.report.metrics.at("distortion");
    CHECK(std::isfinite(xi));
    CHECK(xi >= 1.0);
    // Distortion metric equals the oracle recomputation.
    CHECK(xi == doctest::Approx(distortion(res.op.apply(column_basis(a))))
                    .epsilon(1e-9));
}

TEST_CASE("rank never increases and is typically preserved") {
    int preserved = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const DenseMatrix a = gaussian_instance(256, 8, 100 + s);
        const EmbedResult res = constant_embed(a, config(s));
        const std::size_t rs = numerical_rank(res.sketched);
        CHECK(rs <= numerical_rank(a));
        if (rs == 8) ++preserved;
    }
    CHECK(preserved >= 9);
}

TEST_CASE("rank-1 input keeps rank 1") {
    const DenseMatrix a = rank_deficient_instance(200, 6, 1, 12);
    const EmbedResult res = constant_embed(a, config(13));
    CHECK(numerical_rank(res.sketched) == 1);
}

TEST_CASE("polylog embed skips the reweighting") {
    const DenseMatrix a = gaussian_instance(256, 8, 14);
    const EmbedResult res = polylog_embed(a, config(15));
    CHECK(!res.weights.has_value());
    CHECK(res.sketched.rows() ==
          static_cast<std::size_t>(std::ceil(10.0 * 8)));
    CHECK(std::isfinite(res.report.metrics.at("distortion")));
}

TEST_CASE("sparse and dense inputs give identical sketches") {
    DenseMatrix a = gaussian_instance(300, 8, 16);
    for (std::size_t i = 0; i < a.data().size(); ++i)
        if (i % 4) a.data()[i] = 0.0;
    const SparseMatrix sp = SparseMatrix::from_dense(a);
    const EmbedResult rd = constant_embed(a, config(17));
    const EmbedResult rs = constant_embed(sp, config(17));
    REQUIRE(rd.sketched.rows() == rs.sketched.rows());
    for (std::size_t i = 0; i < rd.sketched.data().size(); ++i)
        CHECK(rd.sketched.data()[i] ==
              doctest::Approx(rs.sketched.data()[i]).epsilon(1e-12));
}

TEST_CASE("degenerate single column passes through") {
    DenseMatrix a(50, 1);
    for (std::size_t i = 0; i < 50; ++i) a(i, 0) = 1.0 + static_cast<double>(i);
    const EmbedResult res = constant_embed(a, config(18));
    CHECK(res.sketched == a);
    CHECK(res.report.metrics.at("distortion") == 1.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(constant_embed(DenseMatrix::zeros(30, 4), config(0)), Error);
    CHECK_THROWS_AS(constant_embed(gaussian_instance(3, 5, 0), config(0)),
                    Error);  // n < d
    EmbedConfig bad = config(0);
    bad.alpha = 0.0;
    CHECK_THROWS_AS(constant_embed(gaussian_instance(30, 4, 0), bad), Error);
}

TEST_CASE("rank_adaptive_dims") {
    const DenseMatrix full = gaussian_instance(100, 10, 19);
    const EffectiveDims fd = rank_adaptive_dims(full);
    CHECK(fd.k == 10);
    CHECK(!fd.clamped);

    const EffectiveDims hint = rank_adaptive_dims(full, 1);
    CHECK(hint.k == 1);

    const EffectiveDims clamped = rank_adaptive_dims(full, 25);
    CHECK(clamped.k == 10);
    CHECK(clamped.clamped);

    const DenseMatrix low = rank_deficient_instance(100, 10, 5, 20);
    CHECK(rank_adaptive_dims(low).k == 5);
}

TEST_CASE("effective dim shrinks the output for low-rank inputs") {
    const std::size_t d = 16, k = 8;
    const DenseMatrix a = rank_deficient_instance(400, d, k, 21);
    EmbedConfig cfg = config(22);
    cfg.effective_dim = rank_adaptive_dims(a).k;
    const EmbedResult res = constant_embed(a, cfg);
    // Row count scales with the rank, not the column dimension.
    CHECK(res.sketched.rows() <=
          static_cast<std::size_t>(std::ceil(cfg.sample_const * k)));
    CHECK(numerical_rank(res.sketched) == k);
    CHECK(std::isfinite(res.report.metrics.at("distortion")));
}

TEST_CASE("constant embed reweighting stays on the weight polytope") {
    const DenseMatrix a = single_heavy_row_instance(300, 8, 23);
    const EmbedResult res = constant_embed(a, config(24));
    REQUIRE(res.weights.has_value());
    res.weights->validate(res.weights->w.size());
}
