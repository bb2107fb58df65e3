#ifndef MIXLAB_RNG_HPP
#define MIXLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mixlab {

/// Seeded random stream. All primitive draws are built from the raw
/// mt19937_64 output so that sequences are bit-identical across platforms
/// (the standard does not pin down std::*_distribution, so we do not use
/// them). Gaussians come from Box-Muller, Gammas from Marsaglia-Tsang.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    // Derives an independent substream; used to partition draws between
    // shuffling, pairing, lambda sampling etc. so that turning one consumer
    // off does not shift the others.
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : eng_(mix(seed, stream_id)) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0,1]; safe as a log() argument.
    double uniform_open01() { return 1.0 - uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal() {
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Gamma(shape, 1). Marsaglia-Tsang for shape >= 1, boosted otherwise.
    double gamma(double shape);

    /// Uniform index in [0, n). Modulo bias is < 2^-50 for desk-scale n.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(eng_() % static_cast<std::uint64_t>(n));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_id);

  private:
    std::mt19937_64 eng_;
};

}  // namespace mixlab

#endif
