// Microbenchmarks for the sketching primitives and the end-to-end pipelines.
// Run with --benchmark_filter=<regex> to select a subset.

#include <benchmark/benchmark.h>

#include <vector>

#include "rnla/basis.hpp"
#include "rnla/embed.hpp"
#include "rnla/instances.hpp"
#include "rnla/leverage.hpp"
#include "rnla/linalg.hpp"
#include "rnla/regression.hpp"
#include "rnla/sketch.hpp"

using namespace rnla;

namespace {

void bm_fwht(benchmark::State& state) {
    const std::size_t len = static_cast<std::size_t>(state.range(0));
    std::vector<double> v = gaussian_vector(len, 1);
    for (auto _ : state) {
        fwht_inplace(v);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(len));
}
BENCHMARK(bm_fwht)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 16);

void bm_osnap_apply(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 32;
    const DenseMatrix a = gaussian_instance(n, d, 2);
    const SketchOperator op = osnap_build(n, 4 * d, 4, 3);
    for (auto _ : state) {
        DenseMatrix s = apply_sketch(op, a);
        benchmark::DoNotOptimize(s.data().data());
    }
}
BENCHMARK(bm_osnap_apply)->Arg(1 << 12)->Arg(1 << 14)->Arg(1 << 16);

void bm_srht_apply(benchmark::State& state) {
    const std::size_t ell = static_cast<std::size_t>(state.range(0));
    const SketchOperator op = srht_build(ell, 8, 4);
    const std::vector<double> x = gaussian_vector(ell, 5);
    for (auto _ : state) {
        std::vector<double> y = op.apply(x);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(bm_srht_apply)->Arg(1 << 8)->Arg(1 << 10)->Arg(1 << 12);

void bm_constant_embed(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 32;
    const DenseMatrix a = gaussian_instance(n, d, 6);
    for (auto _ : state) {
        EmbedConfig cfg;
        cfg.seed = 7;
        EmbedResult res = constant_embed(a, cfg);
        benchmark::DoNotOptimize(res.sketched.data().data());
    }
}
BENCHMARK(bm_constant_embed)->Arg(1 << 12)->Arg(1 << 13)
    ->Unit(benchmark::kMillisecond);

void bm_eps_embed(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 24;
    const DenseMatrix a = gaussian_instance(n, d, 8);
    for (auto _ : state) {
        LevSampleConfig cfg;
        cfg.seed = 9;
        cfg.epsilon = 0.25;
        EpsEmbedResult res = eps_subspace_embed(a, cfg);
        benchmark::DoNotOptimize(res.sketched.data().data());
    }
}
BENCHMARK(bm_eps_embed)->Arg(1 << 12)->Arg(1 << 13)
    ->Unit(benchmark::kMillisecond);

void bm_select_rows(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 40;
    const DenseMatrix a = rank_deficient_instance(n, d, d / 2, 10);
    for (auto _ : state) {
        BasisResult res = select_independent_rows(a, 11);
        benchmark::DoNotOptimize(res.indices.data());
    }
}
BENCHMARK(bm_select_rows)->Arg(1 << 10)->Arg(1 << 11)
    ->Unit(benchmark::kMillisecond);

void bm_regression(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 32;
    const DenseMatrix a = gaussian_instance(n, d, 12);
    const std::vector<double> xhat = gaussian_vector(d, 13);
    std::vector<double> b = gaussian_vector(n, 14);
    for (std::size_t i = 0; i < n; ++i) {
        double ai = 0.0;
        for (std::size_t j = 0; j < d; ++j) ai += a(i, j) * xhat[j];
        b[i] = ai + 0.1 * b[i];
    }
    for (auto _ : state) {
        RegressionResult res = solve_regression(a, b, 0.1, 0.25, 15);
        benchmark::DoNotOptimize(res.y.data());
    }
}
BENCHMARK(bm_regression)->Arg(1 << 12)->Arg(1 << 13)
    ->Unit(benchmark::kMillisecond);

void bm_exact_svd(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_instance(n, 32, 16);
    for (auto _ : state) {
        SvdFactors f = svd_thin(a);
        benchmark::DoNotOptimize(f.sigma.data());
    }
}
BENCHMARK(bm_exact_svd)->Arg(1 << 12)->Arg(1 << 13)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
