#pragma once

#include <cstdint>
#include <span>

namespace sumrate {

/// Monte Carlo estimate: sample mean, standard error of the mean
/// (sample standard deviation / sqrt(trials)), trial count.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Reduce per-trial values in index order (two-pass mean/variance).  The
/// fixed order makes the result identical no matter how many threads filled
/// the buffer.
Estimate reduce_trials(std::span<const double> values);

}  // namespace sumrate
