#include "sumrate/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace sumrate {

Estimate reduce_trials(std::span<const double> values) {
    const std::uint64_t n = values.size();
    if (n == 0) throw std::invalid_argument("reduce_trials: need at least one trial");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0, n};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {mean, sd / std::sqrt(static_cast<double>(n)), n};
}

}  // namespace sumrate
