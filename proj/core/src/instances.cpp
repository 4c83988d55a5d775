#include "rnla/instances.hpp"

#include <cmath>

#include "rnla/error.hpp"
#include "rnla/linalg.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

DenseMatrix gaussian(std::size_t n, std::size_t d, std::uint64_t seed,
                     std::uint64_t salt) {
    DenseMatrix a(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(mix64(seed ^ salt), ModuleId::Bench, i);
        for (std::size_t j = 0; j < d; ++j) a(i, j) = rng.next_gaussian();
    }
    return a;
}

}  // namespace

DenseMatrix gaussian_instance(std::size_t n, std::size_t d,
                              std::uint64_t seed) {
    require(n >= 1 && d >= 1, "shape", "gaussian_instance: empty shape");
    return gaussian(n, d, seed, 0x61ULL);
}

DenseMatrix rank_deficient_instance(std::size_t n, std::size_t d,
                                    std::size_t k, std::uint64_t seed) {
    require(k >= 1 && k <= std::min(n, d), "config",
            "rank_deficient_instance: need 1 <= k <= min(n,d)");
    return matmul(gaussian(n, k, seed, 0x62ULL), gaussian(k, d, seed, 0x63ULL));
}

DenseMatrix duplicated_rows_instance(std::size_t n, std::size_t d,
                                     std::uint64_t seed) {
    const DenseMatrix base = gaussian(n, d, seed, 0x64ULL);
    DenseMatrix out(2 * n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out(2 * i, j) = out(2 * i + 1, j) = base(i, j);
    return out;
}

DenseMatrix single_heavy_row_instance(std::size_t n, std::size_t d,
                                      std::uint64_t seed, double weight) {
    DenseMatrix a = gaussian(n, d, seed, 0x65ULL);
    for (std::size_t j = 0; j < d; ++j) a(0, j) *= weight;
    return a;
}

DenseMatrix ill_conditioned_instance(std::size_t n, std::size_t d,
                                     double kappa, std::uint64_t seed) {
    require(kappa >= 1.0, "config", "ill_conditioned_instance: kappa >= 1");
    DenseMatrix a = gaussian(n, d, seed, 0x66ULL);
    const SvdFactors f = svd_thin(a);
    // Replace the spectrum with a geometric ramp from kappa down to 1.
    DenseMatrix scaled_u(f.u.rows(), f.rank());
    for (std::size_t j = 0; j < f.rank(); ++j) {
        const double t = f.rank() == 1
                             ? 0.0
                             : static_cast<double>(j) /
                                   static_cast<double>(f.rank() - 1);
        const double sv = kappa * std::pow(1.0 / kappa, t);
        for (std::size_t i = 0; i < f.u.rows(); ++i)
            scaled_u(i, j) = f.u(i, j) * sv;
    }
    return matmul(scaled_u, f.v.transposed());
}

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
    RngStream rng(mix64(seed ^ 0x67ULL), ModuleId::Bench, 0);
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_gaussian();
    return v;
}

}  // namespace rnla
