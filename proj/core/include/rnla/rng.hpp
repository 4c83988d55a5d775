#pragma once

#include <cstdint>
#include <cmath>

namespace rnla {

// Counter-based deterministic random stream. Every draw in the library is
// addressed as (seed, module_id, stream_id, counter), so any sub-draw is
// reproducible in isolation and independent of evaluation order.
//
// The mixer is splitmix64 applied to the running state; it is not meant
// to be cryptographic, only well-distributed and platform-stable.

enum class ModuleId : std::uint64_t {
    Osnap = 1,
    Srht = 2,
    UniformSample = 3,
    SpectralNorm = 4,
    Sdp = 5,
    Leverage = 6,
    Basis = 7,
    Regression = 8,
    Bench = 9,
};

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class RngStream {
public:
    RngStream(std::uint64_t seed, ModuleId module, std::uint64_t stream_id)
        : key_(mix64(mix64(seed) ^ mix64(static_cast<std::uint64_t>(module) << 32 ^ stream_id))) {}

    std::uint64_t next_u64() { return mix64(key_ ^ counter_++); }

    // Uniform in [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection-free Lemire reduction is overkill here; modulo bias is
        // below 2^-53 for every n used in this library.
        return next_u64() % n;
    }

    double next_signed_unit() { return (next_u64() & 1u) ? 1.0 : -1.0; }

    // Box-Muller; consumes two uniforms per pair, caches the second.
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        // Guard against log(0).
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace rnla
