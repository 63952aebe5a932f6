// Timing comparison: OpenMP-parallel Monte Carlo kernels vs their serial
// reference twins.  Results must agree exactly; only the wall time differs.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sumrate/capacity.hpp"
#include "sumrate/maxchi.hpp"
#include "sumrate/precoder.hpp"
#include "sumrate/reference.hpp"

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
    std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms, same ? "match" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    {
        sumrate::Estimate a, b;
        const double p = time_ms([&] { a = sumrate::estimate_equal_power_rate(8, 8, 1.2589, 20000, 7); });
        const double s = time_ms([&] { b = sumrate::serial_ref::estimate_equal_power_rate(8, 8, 1.2589, 20000, 7); });
        report("equal-power rate (8x8)", s, p, a.mean == b.mean && a.std_error == b.std_error);
    }
    {
        sumrate::Estimate a, b;
        const double p = time_ms([&] { a = sumrate::estimate_optimized_rate(8, 8, 1.2589, 500, 7); });
        const double s = time_ms([&] { b = sumrate::serial_ref::estimate_optimized_rate(8, 8, 1.2589, 500, 7); });
        report("optimized rate (8x8)", s, p, a.mean == b.mean && a.std_error == b.std_error);
    }
    {
        const double zetas[] = {0.5};
        sumrate::MaxChiStats a, b;
        const double p = time_ms([&] { a = sumrate::empirical_max_stats(64, 200000, 7, zetas); });
        const double s = time_ms([&] { b = sumrate::serial_ref::empirical_max_stats(64, 200000, 7, zetas); });
        report("max chi-square stats (M=64)", s, p,
               a.mean_max == b.mean_max && a.prob_below == b.prob_below);
    }
    {
        sumrate::PrecoderConfig cfg;
        cfg.num_users = 4;
        cfg.constellation = sumrate::Constellation::qam16();
        const double grid[] = {10.0};
        std::vector<sumrate::BerPoint> a, b;
        const double p = time_ms([&] { a = sumrate::simulate_ber(cfg, grid, 20000); });
        const double s = time_ms([&] { b = sumrate::serial_ref::simulate_ber(cfg, grid, 20000); });
        report("vp ber (K=4, 16qam)", s, p,
               a.size() == b.size() && a[0].bit_errors == b[0].bit_errors && a[0].bits_sent == b[0].bits_sent);
    }
    return 0;
}
