#include "sumrate/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sumrate/channel.hpp"
#include "sumrate/linalg.hpp"
#include "sumrate/rng.hpp"

namespace sumrate::serial_ref {

Estimate estimate_equal_power_rate(std::size_t num_antennas, std::size_t num_users, double rho,
                                   std::uint64_t trials, std::uint64_t seed) {
    const double scale = rho / static_cast<double>(num_users);
    std::vector<double> values(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ComplexMatrix h = sample_channel({num_users, num_antennas, seed, t});
        values[t] = log_det_capacity(h, scale);
    }
    return reduce_trials(values);
}

Estimate estimate_optimized_rate(std::size_t num_antennas, std::size_t num_users, double rho,
                                 std::uint64_t trials, std::uint64_t seed, double tol) {
    std::vector<double> values(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ComplexMatrix h = sample_channel({num_users, num_antennas, seed, t});
        values[t] = optimize_power_allocation(h, rho, tol).objective_bits;
    }
    return reduce_trials(values);
}

MaxChiStats empirical_max_stats(int m, std::uint64_t trials, std::uint64_t seed,
                                std::span<const double> zetas) {
    std::vector<double> maxima(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        TrialRng rng(seed, t);
        double best = 0.0;
        for (int i = 0; i < m; ++i) best = std::max(best, rng.next_gamma(static_cast<double>(m)));
        maxima[t] = best;
    }
    const Estimate e = reduce_trials(maxima);
    MaxChiStats out;
    out.mean_max = e.mean;
    out.mean_std_error = e.std_error;
    out.trials = trials;
    for (double z : zetas) {
        const double threshold = static_cast<double>(m) * (1.0 + z);
        std::uint64_t count = 0;
        for (double v : maxima)
            if (v <= threshold) ++count;
        out.prob_below.push_back(static_cast<double>(count) / static_cast<double>(trials));
    }
    return out;
}

std::vector<BerPoint> simulate_ber(const PrecoderConfig& cfg, std::span<const double> rho_grid_db,
                                   std::uint64_t symbols_per_point, bool enable_perturbation) {
    // Straight-line twin of sumrate::simulate_ber, one use at a time.
    const std::uint64_t coherence = std::max<std::uint64_t>(cfg.coherence_uses, 1);
    const std::uint64_t uses = (symbols_per_point + cfg.num_users - 1) / cfg.num_users;
    const std::uint64_t blocks = (uses + coherence - 1) / coherence;
    const Constellation& cons = cfg.constellation;
    const double tau = cons.tau(cfg.tau_factor);
    const std::size_t k = cfg.num_users, m = cfg.num_antennas;
    const std::size_t pool = std::max(cfg.pool_users, k);

    std::vector<BerPoint> out(rho_grid_db.size());
    for (std::size_t p = 0; p < rho_grid_db.size(); ++p) {
        const double rho = std::pow(10.0, rho_grid_db[p] / 10.0);
        const double noise_scale = 1.0 / std::sqrt(rho);
        const std::uint64_t stream = derive_stream(cfg.seed, p);
        std::uint64_t errors = 0, bits = 0;
        for (std::uint64_t blk = 0; blk < blocks; ++blk) {
            TrialRng rng(stream, blk);
            ComplexMatrix pool_h(pool, m);
            for (cplx& z : pool_h.entries()) z = rng.next_complex_gaussian();
            const std::uint64_t first_use = blk * coherence;
            const std::uint64_t in_block = std::min(coherence, uses - first_use);
            for (std::uint64_t use = 0; use < in_block; ++use) {
                ComplexMatrix h = pool_h;
                if (pool > k) {
                    std::vector<std::size_t> order(pool);
                    for (std::size_t i = 0; i < pool; ++i) order[i] = i;
                    for (std::size_t i = 0; i < k; ++i) {
                        const std::size_t j =
                            i + static_cast<std::size_t>(rng.next_u64() % (pool - i));
                        std::swap(order[i], order[j]);
                    }
                    h = ComplexMatrix(k, m);
                    for (std::size_t i = 0; i < k; ++i)
                        for (std::size_t j = 0; j < m; ++j) h(i, j) = pool_h(order[i], j);
                }
                std::vector<int> tx(k);
                std::vector<cplx> u(k), y(k);
                for (std::size_t i = 0; i < k; ++i) {
                    tx[i] = static_cast<int>(rng.next_u64() % cons.points.size());
                    u[i] = cons.points[tx[i]];
                }
                const TransmitResult tr = transmit(u, h, cfg, rho, enable_perturbation);
                for (std::size_t i = 0; i < k; ++i) {
                    cplx s = 0.0;
                    for (std::size_t j = 0; j < m; ++j) s += h(i, j) * tr.x[j];
                    y[i] = s + noise_scale * rng.next_complex_gaussian();
                }
                const std::vector<int> rx = receive(y, tau, tr.gamma_norm, cons);
                for (std::size_t i = 0; i < k; ++i)
                    errors += static_cast<std::uint64_t>(
                        std::popcount(static_cast<unsigned>(tx[i] ^ rx[i])));
                bits += static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(cons.bits_per_symbol);
            }
        }
        out[p] = {rho_grid_db[p], errors, bits,
                  bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0};
    }
    return out;
}

}  // namespace sumrate::serial_ref
