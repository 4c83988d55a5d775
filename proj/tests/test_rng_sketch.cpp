#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rnla/dense_matrix.hpp"
#include "rnla/error.hpp"
#include "rnla/linalg.hpp"
#include "rnla/rng.hpp"
#include "rnla/sketch.hpp"

using namespace rnla;

namespace {

// Explicit unnormalized Hadamard matrix entry: H[r][c] = (-1)^popcount(r&c).
int hadamard_sign(std::size_t r, std::size_t c) {
    std::size_t x = r & c;
    int bits = 0;
    while (x) {
        bits ^= static_cast<int>(x & 1u);
        x >>= 1;
    }
    return bits ? -1 : 1;
}

// Naive O(L^2) Hadamard multiply, the oracle for fwht.
std::vector<double> naive_hadamard(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out[r] += hadamard_sign(r, c) * v[c];
    return out;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, ModuleId::Bench, 17);
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_gaussian();
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("rng streams are deterministic and decorrelated") {
    RngStream a(42, ModuleId::Osnap, 3);
    RngStream b(42, ModuleId::Osnap, 3);
    for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42, ModuleId::Osnap, 4);
    bool any_diff = false;
    RngStream a2(42, ModuleId::Osnap, 3);
    for (int i = 0; i < 20; ++i)
        if (a2.next_u64() != c.next_u64()) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("rng uniform range and gaussian moments") {
    RngStream rng(1, ModuleId::Bench, 0);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(sumsq / n == doctest::Approx(1.0 / 3.0).epsilon(0.03));

    double gsum = 0.0, gsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        gsum += g;
        gsq += g * g;
    }
    CHECK(std::abs(gsum / n) < 0.03);
    CHECK(gsq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("fwht base cases") {
    CHECK(fwht({1.0}) == std::vector<double>{1.0});
    CHECK(fwht({1.0, 0.0, 0.0, 0.0}) == std::vector<double>{1.0, 1.0, 1.0, 1.0});
    CHECK(fwht({1.0, 2.0, 3.0, 4.0}) ==
          std::vector<double>{10.0, -2.0, -4.0, 0.0});
}

TEST_CASE("fwht matches the naive Hadamard oracle") {
    for (std::size_t len = 1; len <= 256; len *= 2) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const std::vector<double> v = random_vector(len, 100 * len + s);
            CHECK(max_abs_diff(fwht(v), naive_hadamard(v)) < 1e-10);
        }
    }
}

TEST_CASE("fwht involution up to scale") {
    const std::vector<double> v = random_vector(64, 9);
    std::vector<double> w = fwht(fwht(v));
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(w[i] == doctest::Approx(64.0 * v[i]).epsilon(1e-9));
}

TEST_CASE("fwht rejects non-power-of-two lengths") {
    std::vector<double> v(3, 1.0);
    CHECK_THROWS_AS(fwht(v), Error);
    std::vector<double> empty;
    CHECK_THROWS_AS(fwht(empty), Error);
}

TEST_CASE("osnap column structure") {
    const std::size_t n = 32, rows = 16, s = 4;
    SketchOperator op = osnap_build(n, rows, s, 5);
    CHECK(op.in_dim() == n);
    CHECK(op.out_dim() == rows);

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const std::vector<double> col = op.apply(e);
        std::set<std::size_t> hit;
        for (std::size_t i = 0; i < rows; ++i) {
            if (col[i] == 0.0) continue;
            hit.insert(i);
            CHECK(std::abs(col[i]) == doctest::Approx(1.0 / std::sqrt(4.0)));
        }
        CHECK(hit.size() == s);  // s distinct rows per column
    }
}

TEST_CASE("osnap degenerate and error cases") {
    SketchOperator tiny = osnap_build(1, 1, 1, 3);
    const std::vector<double> out = tiny.apply(std::vector<double>{1.0});
    CHECK(std::abs(out[0]) == doctest::Approx(1.0));
    CHECK_THROWS_AS(osnap_build(4, 2, 3, 0), Error);  // s > rows
}

TEST_CASE("osnap apply matches materialization") {
    SketchOperator op = osnap_build(64, 24, 3, 11);
    const DenseMatrix a = [] {
        DenseMatrix m(64, 8);
        RngStream rng(2, ModuleId::Bench, 1);
        for (double& x : m.data()) x = rng.next_gaussian();
        return m;
    }();
    const DenseMatrix fast = op.apply(a);
    const DenseMatrix slow = matmul(op.materialize(), a);
    const DenseMatrix sparse = matmul(op.materialize_sparse(), a);
    for (std::size_t i = 0; i < fast.rows(); ++i)
        for (std::size_t j = 0; j < fast.cols(); ++j) {
            CHECK(fast(i, j) == doctest::Approx(slow(i, j)).epsilon(1e-12));
            CHECK(fast(i, j) == doctest::Approx(sparse(i, j)).epsilon(1e-12));
        }
    // Dense and sparse input paths agree.
    const DenseMatrix via_sparse = op.apply(SparseMatrix::from_dense(a));
    for (std::size_t i = 0; i < fast.rows(); ++i)
        for (std::size_t j = 0; j < fast.cols(); ++j)
            CHECK(fast(i, j) == doctest::Approx(via_sparse(i, j)).epsilon(1e-12));
}

TEST_CASE("osnap isometry in expectation") {
    // E||Sx||^2 = ||x||^2; check the sample mean within 3 standard errors.
    const std::size_t n = 256, rows = 64, s = 4, trials = 500;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        SketchOperator op = osnap_build(n, rows, s, 9000 + t);
        const std::vector<double> x = random_vector(n, 500 + t);
        const double nx2 = dot(x, x);
        const std::vector<double> sx = op.apply(x);
        const double ratio = dot(sx, sx) / nx2;
        sum += ratio;
        sumsq += ratio * ratio;
    }
    const double mean = sum / trials;
    const double var = sumsq / trials - mean * mean;
    const double se = std::sqrt(var / trials);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se + 1e-12);
    CHECK(mean > 0.8);
    CHECK(mean < 1.2);
}

TEST_CASE("srht zero input, determinism, shape") {
    SketchOperator op = srht_build(100, 4, 77);
    CHECK(op.in_dim() == 100);
    CHECK(op.srht_padded_len() == 128);
    CHECK(op.srht_blocks() == 4);
    CHECK(op.out_dim() == 4 * 128);

    const std::vector<double> zero(100, 0.0);
    for (double v : op.apply(zero)) CHECK(v == 0.0);

    const std::vector<double> x = random_vector(100, 3);
    CHECK(op.apply(x) == op.apply(x));  // bit-identical
    SketchOperator op2 = srht_build(100, 4, 77);
    CHECK(op.apply(x) == op2.apply(x));
}

TEST_CASE("srht scaled norm concentrates") {
    // Scaled ||h(x)|| / ||x|| lands in [0.9, 1.1] in at least 95 of 100
    // unit-vector trials.
    const std::size_t ell = 128, m = 8;
    int ok = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        SketchOperator op = srht_build(ell, m, 4000 + t);
        std::vector<double> x = random_vector(ell, 7000 + t);
        const double nx = norm2(x);
        for (double& v : x) v /= nx;
        const double r = norm2(op.apply(x));
        if (r >= 0.9 && r <= 1.1) ++ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("srht unscaled rows match the materialization") {
    SketchOperator op = srht_build(12, 2, 5);
    const DenseMatrix mat = op.materialize();
    const double scale =
        1.0 / std::sqrt(static_cast<double>(op.out_dim() / op.srht_blocks()) *
                        static_cast<double>(op.srht_blocks()));
    for (std::size_t r = 0; r < op.out_dim(); r += 7) {
        const std::vector<double> row = op.srht_row_unscaled(r);
        REQUIRE(row.size() == op.in_dim());
        for (std::size_t j = 0; j < op.in_dim(); ++j)
            CHECK(scale * row[j] == doctest::Approx(mat(r, j)).epsilon(1e-12));
    }
}

TEST_CASE("uniform sample basics") {
    SketchOperator one = uniform_sample_build(1, 1, 0);
    CHECK(one.apply(std::vector<double>{2.5})[0] == 2.5);

    // Constant column stays constant under any row sample.
    SketchOperator op = uniform_sample_build(50, 20, 3);
    DenseMatrix c(50, 1);
    for (double& v : c.data()) v = 3.25;
    const DenseMatrix out = op.apply(c);
    CHECK(out.rows() == 20);
    for (double v : out.data()) CHECK(v == 3.25);
    CHECK(op.sampled_indices().size() == 20);
}

TEST_CASE("uniform sample frequencies within 5 sigma") {
    const std::size_t src = 1000, p = 10000;
    SketchOperator op = uniform_sample_build(src, p, 99);
    std::vector<std::size_t> freq(src, 0);
    for (std::size_t i : op.sampled_indices()) {
        REQUIRE(i < src);
        ++freq[i];
    }
    const double mean = static_cast<double>(p) / src;
    const double sigma = std::sqrt(mean * (1.0 - 1.0 / src));
    for (std::size_t i = 0; i < src; ++i)
        CHECK(std::abs(static_cast<double>(freq[i]) - mean) <= 5.0 * sigma);
}

TEST_CASE("diagonal weights and composite") {
    DenseMatrix a{{1, 2}, {3, 4}, {5, 6}};
    SketchOperator ones = diagonal_weights_build({1.0, 1.0, 1.0});
    CHECK(ones.apply(a) == a);

    SketchOperator w = diagonal_weights_build({2.0, 0.0, 1.0});
    const DenseMatrix wa = w.apply(a);
    CHECK(wa(0, 0) == 2.0);
    CHECK(wa(1, 0) == 0.0);
    CHECK(wa(2, 1) == 6.0);

    // Composite([op]) behaves as op; empty composite is rejected.
    SketchOperator os = osnap_build(3, 2, 1, 8);
    std::vector<SketchOperator> single;
    single.push_back(osnap_build(3, 2, 1, 8));
    SketchOperator comp = composite_build(std::move(single));
    CHECK(comp.apply(a) == os.apply(a));
    CHECK_THROWS_AS(composite_build({}), Error);

    // Chained composite equals sequential application.
    std::vector<SketchOperator> chain;
    chain.push_back(osnap_build(3, 4, 2, 8));
    chain.push_back(diagonal_weights_build({1.0, 2.0, 3.0, 4.0}));
    SketchOperator both = composite_build(std::move(chain));
    const DenseMatrix expect =
        diagonal_weights_build({1.0, 2.0, 3.0, 4.0}).apply(
            osnap_build(3, 4, 2, 8).apply(a));
    CHECK(both.apply(a) == expect);
    CHECK(both.components().size() == 2);
}

TEST_CASE("operators are linear") {
    const std::size_t n = 40;
    std::vector<SketchOperator> ops;
    ops.push_back(osnap_build(n, 16, 3, 1));
    ops.push_back(srht_build(n, 3, 2));
    ops.push_back(uniform_sample_build(n, 25, 3));
    for (const SketchOperator& op : ops) {
        const std::vector<double> x = random_vector(n, 21);
        const std::vector<double> y = random_vector(n, 22);
        std::vector<double> axby(n);
        for (std::size_t i = 0; i < n; ++i) axby[i] = 2.0 * x[i] - 0.5 * y[i];
        const std::vector<double> lhs = op.apply(axby);
        const std::vector<double> ax = op.apply(x);
        const std::vector<double> ay = op.apply(y);
        for (std::size_t i = 0; i < lhs.size(); ++i)
            CHECK(lhs[i] ==
                  doctest::Approx(2.0 * ax[i] - 0.5 * ay[i]).epsilon(1e-10));
    }
}

TEST_CASE("srht flattening on unit vectors") {
    // A large fraction of unscaled coordinates stay bounded away from zero.
    const std::size_t ell = 128, m = 8;
    for (std::uint64_t t = 0; t < 10; ++t) {
        SketchOperator op = srht_build(ell, m, 300 + t);
        std::vector<double> x = random_vector(ell, 600 + t);
        const double nx = norm2(x);
        for (double& v : x) v /= nx;
        const double scale = std::sqrt(
            static_cast<double>(m) * static_cast<double>(op.srht_padded_len()));
        const std::vector<double> hx = op.apply(x);
        std::size_t big = 0;
        for (double v : hx)
            if (std::abs(v * scale) >= 0.1) ++big;
        CHECK(static_cast<double>(big) / static_cast<double>(hx.size()) >= 0.9);
    }
}

TEST_CASE("apply_sketch shape errors") {
    SketchOperator op = osnap_build(8, 4, 2, 0);
    DenseMatrix wrong(9, 2);
    CHECK_THROWS_AS(op.apply(wrong), Error);
}
