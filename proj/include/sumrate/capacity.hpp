#pragma once

#include <cstdint>
#include <vector>

#include "sumrate/estimate.hpp"
#include "sumrate/matrix.hpp"

namespace sumrate {

/// Per-user transmit power weights; nonnegative, summing to one.
struct PowerAllocation {
    std::vector<double> weights;
};

struct PowerOptResult {
    PowerAllocation allocation;
    double objective_bits = 0.0;  // log2 det(I + rho H^* diag(w) H) at the reported weights
    double kkt_gap = 0.0;         // max_k g_k - g.w  (bits); upper-bounds suboptimality
    int iterations = 0;
    bool converged = false;
};

/// Maximize log2 det(I + rho H^* diag(w) H) over the probability simplex.
/// Projected gradient ascent with Barzilai-Borwein steps, then an active-set
/// Newton polish on the optimal face.  The objective is concave, so a KKT
/// point is the global maximum; kkt_gap certifies the remaining
/// suboptimality in bits.  Always starts from uniform weights and only
/// accepts improving steps, hence objective_bits >= the equal-power value.
PowerOptResult optimize_power_allocation(const ComplexMatrix& h, double rho,
                                         double tol = 1e-7, int max_iterations = 500);

/// Mean of log2 det(I + (rho/K) H^* H) over `trials` independent K x M
/// draws.  Trials run in parallel; identical results for any thread count.
Estimate estimate_equal_power_rate(std::size_t num_antennas, std::size_t num_users,
                                   double rho, std::uint64_t trials, std::uint64_t seed);

/// Same draws, but each realization maximized over the power allocation.
Estimate estimate_optimized_rate(std::size_t num_antennas, std::size_t num_users,
                                 double rho, std::uint64_t trials, std::uint64_t seed,
                                 double tol = 1e-7);

/// log2(1 + rho * g) where g is the largest squared row norm of H
/// (the best one-hot power allocation).
double best_single_user_rate(const ComplexMatrix& h, double rho);

/// (log2 e) * rho * M, the linear-in-antennas low-SNR floor.
double low_snr_linear_bound(std::size_t num_antennas, double rho);

}  // namespace sumrate
