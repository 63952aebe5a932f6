#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sumrate {

/// Regularized lower incomplete gamma P(a, x): series for x < a+1,
/// Lentz continued fraction otherwise.  Absolute accuracy ~1e-12.
double regularized_gamma_p(double a, double x);

/// CDF of the maximum of m i.i.d. Gamma(m,1) variates (each equal in law to
/// a chi-square with 2m degrees of freedom scaled by 1/2):  P(m, x)^m.
double cdf_max_chisq(int m, double x);

/// Upper bound on the single-variate tail (1/Gamma(m)) int_x^inf e^-t t^(m-1) dt:
///   e^-x x^m / (Gamma(m) (x - (m-1))),  valid for x > m-1 (else
/// std::domain_error).  Evaluated in log space.
double tail_upper_bound(int m, double x);

/// Stirling approximation of ln Gamma(m):
///   (m-1) ln(m-1) - (m-1) + ln(2 pi (m-1))/2,  m >= 2.
double stirling_log_gamma(int m);

/// Log-domain margin certifying that the maximum concentrates below
/// (1+zeta) m:  m (zeta - ln(1+zeta)) + ln(m)/2 + ln(2 pi)/2 + ln(zeta).
/// Increasing in m for any zeta > 0.
double concentration_margin(int m, double zeta);

struct MaxChiStats {
    double mean_max = 0.0;       // E[max of m i.i.d. Gamma(m,1)]
    double mean_std_error = 0.0;
    std::vector<double> prob_below;  // Pr{max <= m (1+zeta)} per requested zeta
    std::uint64_t trials = 0;
};

/// Monte Carlo for the maximum statistics; deterministic under (seed),
/// trials parallelized by index.
MaxChiStats empirical_max_stats(int m, std::uint64_t trials, std::uint64_t seed,
                                std::span<const double> zetas);

}  // namespace sumrate
