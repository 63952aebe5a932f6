#include "sumrate/channel.hpp"

#include <stdexcept>

#include "sumrate/rng.hpp"

namespace sumrate {

ComplexMatrix sample_channel(const ChannelEnsemble& ensemble) {
    if (ensemble.num_users == 0 || ensemble.num_antennas == 0)
        throw std::invalid_argument("sample_channel: dimensions must be at least 1x1");
    TrialRng rng(ensemble.master_seed, ensemble.trial_index);
    ComplexMatrix h(ensemble.num_users, ensemble.num_antennas);
    for (cplx& z : h.entries()) z = rng.next_complex_gaussian();
    return h;
}

}  // namespace sumrate
