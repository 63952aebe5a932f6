#pragma once

#include <complex>
#include <cstdint>

namespace sumrate {

// Finalizer of splitmix64 (Steele/Lea/Vigna); full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive an independent substream key, e.g. one per SNR grid point.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t label) {
    return mix64(seed ^ mix64(label + 0x632be59bd9b4e019ULL));
}

/// Counter-based per-trial generator: the state is a hash of
/// (master_seed, trial_index), so trial t produces the same draws no matter
/// which thread runs it or in what order.  Output sequence is splitmix64.
class TrialRng {
  public:
    TrialRng(std::uint64_t master_seed, std::uint64_t trial_index)
        : state_(derive_stream(master_seed, trial_index)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0,1]; never returns 0 so logs are safe.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (cosine branch).
    double next_normal();

    /// Circularly-symmetric complex Gaussian, E|z|^2 = 1
    /// (real and imaginary parts each have variance 1/2).
    std::complex<double> next_complex_gaussian();

    /// Gamma(shape, 1) variate, shape >= 1, Marsaglia-Tsang rejection.
    double next_gamma(double shape);

  private:
    std::uint64_t state_;
};

}  // namespace sumrate
