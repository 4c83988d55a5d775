#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "rnla/basis.hpp"
#include "rnla/dense_matrix.hpp"
#include "rnla/error.hpp"
#include "rnla/instances.hpp"
#include "rnla/linalg.hpp"

using namespace rnla;

namespace {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_CASE("rank sketch structure") {
    const std::size_t d = 50, k = 6;
    const RankSketch rs = rank_preserving_sketch(d, k, 3);
    const std::size_t m =
        static_cast<std::size_t>(std::ceil(rs.c * static_cast<double>(k)));
    CHECK(rs.s.rows() == m);
    CHECK(rs.s.cols() == d);

    // Exactly two +-1 entries per column, on distinct rows.
    std::vector<std::set<std::size_t>> col_rows(d);
    const DenseMatrix dense = rs.s.to_dense();
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const double v = dense(r, c);
            if (v == 0.0) continue;
            CHECK(std::abs(v) == 1.0);
            col_rows[c].insert(r);
        }
    for (std::size_t c = 0; c < d; ++c) CHECK(col_rows[c].size() == 2);

    // Row loads stay balanced: no row carries more than ~2d/m columns.
    std::vector<std::size_t> load(m, 0);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r : col_rows[c]) ++load[r];
    const std::size_t cap = static_cast<std::size_t>(
        std::ceil(2.0 * static_cast<double>(d) / static_cast<double>(m))) + 1;
    for (std::size_t r = 0; r < m; ++r) CHECK(load[r] <= cap);
}

TEST_CASE("rank sketch preserves rank on random input") {
    int preserved = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const DenseMatrix a = gaussian_instance(80, 30, 400 + s);
        const RankSketch rs = rank_preserving_sketch(30, 30, s);
        if (numerical_rank(matmul(rs.s, a.transposed())) == 30) ++preserved;
    }
    CHECK(preserved >= 18);

    // Zero matrix maps to zero.
    const RankSketch rs = rank_preserving_sketch(10, 4, 0);
    CHECK(matmul(rs.s, DenseMatrix::zeros(10, 7)).frobenius_norm() == 0.0);
}

TEST_CASE("orthogonal_complement") {
    CHECK(orthogonal_complement(DenseMatrix::identity(4)).rows() == 0);

    DenseMatrix e1(1, 3);
    e1(0, 0) = 1.0;
    const DenseMatrix z = orthogonal_complement(e1);
    REQUIRE(z.rows() == 2);
    // Projector oracle: Z^T Z = I - e1 e1^T.
    const DenseMatrix ztz = matmul(z.transposed(), z);
    DenseMatrix expect = DenseMatrix::identity(3);
    expect(0, 0) = 0.0;
    CHECK(max_abs_diff(ztz, expect) < 1e-10);

    // Random rank-r rows: complement has c - r orthonormal rows and
    // annihilates the input.
    const DenseMatrix rows = rank_deficient_instance(6, 9, 4, 5);
    const DenseMatrix zc = orthogonal_complement(rows);
    CHECK(zc.rows() == 5);
    CHECK(max_abs_diff(matmul(zc, zc.transposed()), DenseMatrix::identity(5)) <
          1e-10);
    const DenseMatrix prod = matmul(rows, zc.transposed());
    CHECK(prod.frobenius_norm() < 1e-8);
}

TEST_CASE("independent_subset") {
    // Two identical rows: the earlier one wins.
    DenseMatrix dup{{1, 2, 3}, {1, 2, 3}};
    const std::vector<std::size_t> kept = independent_subset(dup, {4, 9});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == 4);

    // Identity rows all kept.
    std::vector<std::size_t> all{0, 1, 2};
    CHECK(independent_subset(DenseMatrix::identity(3), all) == all);

    // {v, 2v, w}: rank 2, earlier index preferred for the duplicate pair.
    DenseMatrix mix{{1, 1, 0}, {2, 2, 0}, {0, 0, 1}};
    const std::vector<std::size_t> two = independent_subset(mix, {0, 1, 2});
    REQUIRE(two.size() == 2);
    CHECK(two[0] == 0);
    CHECK(two[1] == 2);
}

TEST_CASE("grow_basis on a full-rank square matrix keeps every row") {
    const DenseMatrix b = gaussian_instance(12, 12, 7);
    const BasisResult res = grow_basis(b, 8);
    CHECK(res.k == 12);
    std::vector<std::size_t> expect(12);
    for (std::size_t i = 0; i < 12; ++i) expect[i] = i;
    CHECK(res.indices == expect);
}

TEST_CASE("grow_basis on stacked copies finds the block rank") {
    const DenseMatrix blk = gaussian_instance(4, 10, 9);
    DenseMatrix b(12, 10);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 10; ++j) b(i, j) = blk(i % 4, j);
    const BasisResult res = grow_basis(b, 10);
    CHECK(res.k == 4);
    CHECK(numerical_rank(b.row_block(res.indices)) == 4);
}

TEST_CASE("grow_basis on the zero matrix") {
    const BasisResult res = grow_basis(DenseMatrix::zeros(6, 4), 11);
    CHECK(res.k == 0);
    CHECK(res.indices.empty());
}

TEST_CASE("grow_basis trace is well-formed") {
    const DenseMatrix b = gaussian_instance(60, 8, 12);
    const BasisResult res = grow_basis(b, 13);
    CHECK(res.k == 8);
    CHECK(!res.trace.empty());
    std::size_t gained_total = 0;
    for (const BasisIteration& it : res.trace) {
        CHECK(it.residual_rank >= 1);
        CHECK(it.sampled >= it.residual_rank);
        gained_total += it.gained;
    }
    if (!res.fallback) CHECK(gained_total == res.k);
    // The JSON trace parses back to the same length.
    const std::string js = res.trace_json();
    CHECK(std::count(js.begin(), js.end(), '{') ==
          static_cast<long>(res.trace.size()));
}

TEST_CASE("select_independent_rows full rank square") {
    const DenseMatrix a = gaussian_instance(15, 15, 14);
    const BasisResult res = select_independent_rows(a, 15);
    CHECK(res.k == 15);
    CHECK(res.indices.size() == 15);
}

TEST_CASE("select_independent_rows on a rank-deficient factor product") {
    const std::size_t d = 20, k = 10, n = 400;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DenseMatrix a = rank_deficient_instance(n, d, k, 100 + seed);
        const BasisResult res = select_independent_rows(a, seed);
        CHECK(res.k == k);
        CHECK(res.indices.size() == k);
        CHECK(numerical_rank(a.row_block(res.indices)) == k);
        std::set<std::size_t> uniq(res.indices.begin(), res.indices.end());
        CHECK(uniq.size() == k);
        for (std::size_t i : res.indices) CHECK(i < n);
    }
}

TEST_CASE("zero rows are never selected") {
    DenseMatrix a = gaussian_instance(50, 8, 16);
    for (std::size_t j = 0; j < 8; ++j) {
        a(10, j) = 0.0;
        a(31, j) = 0.0;
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BasisResult res = select_independent_rows(a, seed);
        CHECK(res.k == 8);
        for (std::size_t i : res.indices) {
            CHECK(i != 10);
            CHECK(i != 31);
        }
    }
}

TEST_CASE("zero matrix yields an empty basis") {
    const BasisResult res = select_independent_rows(DenseMatrix::zeros(20, 5), 0);
    CHECK(res.k == 0);
}

TEST_CASE("duplicated rows instance") {
    const DenseMatrix a = duplicated_rows_instance(40, 12, 17);  // 80 rows
    const BasisResult res = select_independent_rows(a, 18);
    CHECK(res.k == 12);
    CHECK(numerical_rank(a.row_block(res.indices)) == 12);
    // At most one member of each duplicate pair is selected.
    std::set<std::size_t> pairs;
    for (std::size_t i : res.indices) {
        CHECK(pairs.insert(i / 2).second);
    }
}

TEST_CASE("column selection through the transpose wrapper") {
    const DenseMatrix a = rank_deficient_instance(12, 30, 6, 19).transposed();
    // a is 30 x 12 with rank 6; select columns of its transpose = rows here.
    const BasisResult res = select_independent_cols(a.transposed(), 20);
    CHECK(res.k == 6);
}

TEST_CASE("rank sketch input validation") {
    CHECK_THROWS_AS(rank_preserving_sketch(5, 0, 0), Error);
    CHECK_THROWS_AS(rank_preserving_sketch(5, 6, 0), Error);
}
