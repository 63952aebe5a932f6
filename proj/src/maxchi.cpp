#include "sumrate/maxchi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sumrate/estimate.hpp"
#include "sumrate/rng.hpp"

namespace sumrate {

namespace {

// Series for P(a,x), x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 2000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), x >= a+1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 2000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("regularized_gamma_p: a must be positive");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double cdf_max_chisq(int m, double x) {
    if (m < 1) throw std::invalid_argument("cdf_max_chisq: m must be >= 1");
    if (x < 0.0) return 0.0;
    return std::pow(regularized_gamma_p(static_cast<double>(m), x), m);
}

double tail_upper_bound(int m, double x) {
    if (m < 1) throw std::invalid_argument("tail_upper_bound: m must be >= 1");
    if (!(x > static_cast<double>(m - 1)))
        throw std::domain_error("tail_upper_bound: requires x > m-1");
    const double md = static_cast<double>(m);
    return std::exp(md * std::log(x) - x - std::lgamma(md) - std::log(x - (md - 1.0)));
}

double stirling_log_gamma(int m) {
    if (m < 2) throw std::invalid_argument("stirling_log_gamma: m must be >= 2");
    const double n = static_cast<double>(m - 1);
    return n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n);
}

double concentration_margin(int m, double zeta) {
    if (m < 1) throw std::invalid_argument("concentration_margin: m must be >= 1");
    if (!(zeta > 0.0)) throw std::invalid_argument("concentration_margin: zeta must be positive");
    const double md = static_cast<double>(m);
    return md * (zeta - std::log1p(zeta)) + 0.5 * std::log(md)
         + 0.5 * std::log(2.0 * std::numbers::pi) + std::log(zeta);
}

MaxChiStats empirical_max_stats(int m, std::uint64_t trials, std::uint64_t seed,
                                std::span<const double> zetas) {
    if (m < 1) throw std::invalid_argument("empirical_max_stats: m must be >= 1");
    if (trials == 0) throw std::invalid_argument("empirical_max_stats: trials must be >= 1");

    std::vector<double> maxima(trials);
    const long long n = static_cast<long long>(trials);
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < n; ++t) {
        TrialRng rng(seed, static_cast<std::uint64_t>(t));
        double best = 0.0;
        for (int i = 0; i < m; ++i) best = std::max(best, rng.next_gamma(static_cast<double>(m)));
        maxima[static_cast<std::size_t>(t)] = best;
    }

    const Estimate e = reduce_trials(maxima);
    MaxChiStats out;
    out.mean_max = e.mean;
    out.mean_std_error = e.std_error;
    out.trials = trials;
    out.prob_below.reserve(zetas.size());
    for (double z : zetas) {
        const double threshold = static_cast<double>(m) * (1.0 + z);
        std::uint64_t count = 0;
        for (double v : maxima)
            if (v <= threshold) ++count;
        out.prob_below.push_back(static_cast<double>(count) / static_cast<double>(trials));
    }
    return out;
}

}  // namespace sumrate
