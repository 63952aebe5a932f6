#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sumrate/capacity.hpp"
#include "sumrate/channel.hpp"
#include "sumrate/linalg.hpp"
#include "sumrate/maxchi.hpp"

using namespace sumrate;

namespace {

// Objective log2 det(I_K + rho D^{1/2} HH* D^{1/2}) -- same value as the
// M x M form by the determinant identity; used as an independent route.
double objective_via_gram(const ComplexMatrix& h, double rho, const std::vector<double>& w) {
    const std::size_t k = h.rows();
    const ComplexMatrix g = h.gram();
    ComplexMatrix a(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a(i, j) = rho * std::sqrt(w[i]) * g(i, j) * std::sqrt(w[j]) + (i == j ? 1.0 : 0.0);
    const ComplexMatrix l = cholesky(a);
    double f = 0.0;
    for (std::size_t i = 0; i < k; ++i) f += std::log2(l(i, i).real());
    return 2.0 * f;
}

}  // namespace

TEST_CASE("equal-power estimate vanishes with the SNR") {
    const auto e = estimate_equal_power_rate(4, 4, 1e-12, 50, 3);
    CHECK(e.mean < 1e-9);
    CHECK(e.mean > 0.0);
    CHECK(e.trials == 50);
}

TEST_CASE("optimizer trivial cases") {
    const ComplexMatrix h1 = sample_channel({1, 4, 21, 0});
    const auto r1 = optimize_power_allocation(h1, 2.0);
    REQUIRE(r1.allocation.weights.size() == 1);
    CHECK(r1.allocation.weights[0] == 1.0);
    CHECK(r1.converged);

    // user with a dead channel gets no power
    ComplexMatrix h = sample_channel({3, 4, 22, 0});
    for (std::size_t j = 0; j < 4; ++j) h(1, j) = 0.0;
    const auto r = optimize_power_allocation(h, 1.5);
    CHECK(r.allocation.weights[1] < 1e-6);
    CHECK(r.converged);
}

TEST_CASE("optimizer weights stay on the simplex") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        const ComplexMatrix h = sample_channel({4, 6, 500 + t, t});
        const auto r = optimize_power_allocation(h, 0.7);
        double sum = 0.0;
        for (double w : r.allocation.weights) {
            CHECK(w >= 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.kkt_gap < 1e-7);
    }
}

TEST_CASE("optimizer matches 2-simplex grid search at resolution 0.001") {
    const ComplexMatrix h = sample_channel({3, 4, 13579, 0});
    const double rho = 1.0;
    const auto r = optimize_power_allocation(h, rho);
    double best = -1.0;
    const int n = 1000;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n - i; ++j) {
            const std::vector<double> w{static_cast<double>(i) / n, static_cast<double>(j) / n,
                                        static_cast<double>(n - i - j) / n};
            best = std::max(best, objective_via_gram(h, rho, w));
        }
    }
    CHECK(std::abs(r.objective_bits - best) < 1e-3);
    CHECK(r.objective_bits >= best - 1e-9);  // grid is a subset of the simplex
}

TEST_CASE("optimized estimate reduces to equal power at K=1") {
    const auto eq = estimate_equal_power_rate(1, 1, 0.8, 200, 9);
    const auto op = estimate_optimized_rate(1, 1, 0.8, 200, 9);
    CHECK(eq.mean == op.mean);
    CHECK(eq.std_error == op.std_error);
}

TEST_CASE("per-realization ordering: optimized >= equal power >= 0, optimized >= single user") {
    for (std::uint64_t t = 0; t < 60; ++t) {
        const std::size_t k = 2 + t % 4;
        const std::size_t m = k + (t % 3) * 2;
        const double rho = std::pow(10.0, static_cast<double>(t % 5) - 2.0);
        const ComplexMatrix h = sample_channel({k, m, 31000 + t, t});
        const double eq = log_det_capacity(h, rho / static_cast<double>(k));
        const auto op = optimize_power_allocation(h, rho);
        const double single = best_single_user_rate(h, rho);
        CHECK(eq >= 0.0);
        CHECK(op.objective_bits >= eq - 1e-9);
        CHECK(op.objective_bits >= single - 1e-7);
    }
}

TEST_CASE("estimates nondecreasing in rho and in K") {
    const auto lo = estimate_equal_power_rate(8, 8, 0.5, 600, 4);
    const auto hi = estimate_equal_power_rate(8, 8, 1.5, 600, 4);
    CHECK(hi.mean > lo.mean);

    const auto k4 = estimate_equal_power_rate(8, 4, 1.0, 2000, 4);
    const auto k8 = estimate_equal_power_rate(8, 8, 1.0, 2000, 4);
    CHECK(k8.mean + 3.0 * (k8.std_error + k4.std_error) > k4.mean);

    const auto o4 = estimate_optimized_rate(8, 4, 1.0, 300, 4);
    const auto o8 = estimate_optimized_rate(8, 8, 1.0, 300, 4);
    CHECK(o8.mean + 3.0 * (o8.std_error + o4.std_error) > o4.mean);
}

TEST_CASE("best single user rate") {
    CHECK(best_single_user_rate(ComplexMatrix::identity(2), 1.0) == doctest::Approx(1.0));

    ComplexMatrix h(2, 2);
    h(0, 0) = 1.0;          // row norm^2 = 1
    h(1, 0) = std::sqrt(2.0);
    h(1, 1) = {0.0, std::sqrt(2.0)};  // row norm^2 = 4
    CHECK(best_single_user_rate(h, 1.0) == doctest::Approx(std::log2(5.0)).epsilon(1e-12));

    // equals the best one-hot allocation evaluated through the log-det route
    const ComplexMatrix hr = sample_channel({4, 5, 314, 0});
    double best = 0.0;
    for (std::size_t u = 0; u < 4; ++u) {
        ComplexMatrix row(1, 5);
        for (std::size_t j = 0; j < 5; ++j) row(0, j) = hr(u, j);
        best = std::max(best, log_det_capacity(row, 2.0));
    }
    CHECK(best_single_user_rate(hr, 2.0) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("low-SNR linear bound") {
    CHECK(low_snr_linear_bound(8, 0.0) == 0.0);
    CHECK(low_snr_linear_bound(1, 1.0) == doctest::Approx(std::numbers::log2e).epsilon(1e-15));

    const double rho = 1e-3;
    const auto e = estimate_equal_power_rate(8, 8, rho, 2000, 5);
    const double ratio = e.mean / low_snr_linear_bound(8, rho);
    CHECK(ratio > 0.97);
    CHECK(ratio < 1.03);
}

TEST_CASE("optimized rate at very low SNR tracks the max channel gain") {
    const double rho = 1e-3;  // -30 dB
    const auto opt = estimate_optimized_rate(8, 8, rho, 1500, 6);
    const double zetas[] = {0.5};
    const auto stats = empirical_max_stats(8, 20000, 6, zetas);
    const double predicted = std::numbers::log2e * rho * stats.mean_max;
    CHECK(opt.mean / predicted == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("low-SNR tightness: optimized within 1.5x of equal power at M=K=16") {
    const double rho = 1e-3;
    const auto eq = estimate_equal_power_rate(16, 16, rho, 400, 8);
    const auto op = estimate_optimized_rate(16, 16, rho, 400, 8);
    CHECK(op.mean / eq.mean <= 1.5);
    CHECK(op.mean >= eq.mean);
}

TEST_CASE("optimizer stationarity certificate across SNR") {
    for (double rho : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
        for (std::uint64_t t = 0; t < 20; ++t) {
            const ComplexMatrix h = sample_channel({8, 8, 60000 + t, t});
            const auto r = optimize_power_allocation(h, rho);
            CHECK(r.converged);
            CHECK(r.kkt_gap < 1e-7);
        }
    }
}
