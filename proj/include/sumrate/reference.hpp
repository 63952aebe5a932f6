#pragma once

// Serial reference implementations of the parallel Monte Carlo kernels.
// Plain loops, no OpenMP; kept for testing (results must match the parallel
// versions bit for bit) and for the benchmark comparison.

#include "sumrate/capacity.hpp"
#include "sumrate/maxchi.hpp"
#include "sumrate/precoder.hpp"

namespace sumrate::serial_ref {

Estimate estimate_equal_power_rate(std::size_t num_antennas, std::size_t num_users,
                                   double rho, std::uint64_t trials, std::uint64_t seed);

Estimate estimate_optimized_rate(std::size_t num_antennas, std::size_t num_users,
                                 double rho, std::uint64_t trials, std::uint64_t seed,
                                 double tol = 1e-7);

MaxChiStats empirical_max_stats(int m, std::uint64_t trials, std::uint64_t seed,
                                std::span<const double> zetas);

std::vector<BerPoint> simulate_ber(const PrecoderConfig& cfg, std::span<const double> rho_grid_db,
                                   std::uint64_t symbols_per_point, bool enable_perturbation = true);

}  // namespace sumrate::serial_ref
