#pragma once

#include <cstdint>

#include "sumrate/matrix.hpp"

namespace sumrate {

/// Coordinates of one Monte Carlo channel draw.  Each (master_seed,
/// trial_index) pair deterministically identifies one num_users x
/// num_antennas matrix, independent of thread count or evaluation order.
struct ChannelEnsemble {
    std::size_t num_users = 0;
    std::size_t num_antennas = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

/// K x M matrix of i.i.d. circularly-symmetric complex Gaussian gains with
/// unit variance per entry (Rayleigh fading).  Throws std::invalid_argument
/// on zero dimensions.
ComplexMatrix sample_channel(const ChannelEnsemble& ensemble);

}  // namespace sumrate
