#include "sumrate/precoder.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "sumrate/linalg.hpp"
#include "sumrate/rng.hpp"

namespace sumrate {

namespace {

// 2-bit Gray code per axis: label -> PAM level index in {-3,-1,+1,+3} order.
constexpr int kGray4[4] = {0, 1, 3, 2};  // 00 01 11 10 -> -3 -1 +1 +3

}  // namespace

Constellation Constellation::qpsk() {
    Constellation c;
    c.name = "qpsk";
    c.bits_per_symbol = 2;
    const double s = 1.0 / std::sqrt(2.0);
    c.points.resize(4);
    for (int label = 0; label < 4; ++label) {
        const double re = (label & 0b10) ? -s : s;
        const double im = (label & 0b01) ? -s : s;
        c.points[label] = {re, im};
    }
    c.delta = 2.0 * s;
    c.c_max = 1.0;
    return c;
}

Constellation Constellation::qam16() {
    Constellation c;
    c.name = "16qam";
    c.bits_per_symbol = 4;
    const double s = 1.0 / std::sqrt(10.0);
    static constexpr double levels[4] = {-3.0, -1.0, 1.0, 3.0};
    c.points.resize(16);
    for (int label = 0; label < 16; ++label) {
        int li = 0, lq = 0;
        for (int v = 0; v < 4; ++v) {
            if (kGray4[v] == (label >> 2)) li = v;
            if (kGray4[v] == (label & 0b11)) lq = v;
        }
        c.points[label] = {levels[li] * s, levels[lq] * s};
    }
    c.delta = 2.0 * s;
    c.c_max = std::sqrt(18.0) * s;
    return c;
}

ComplexMatrix regularized_inverse(const ComplexMatrix& h, double alpha, double rho) {
    if (h.empty()) throw std::invalid_argument("regularized_inverse: empty channel");
    if (alpha < 0.0) throw std::invalid_argument("regularized_inverse: alpha must be >= 0");
    if (!(rho > 0.0)) throw std::invalid_argument("regularized_inverse: rho must be positive");
    const std::size_t k = h.rows(), m = h.cols();
    ComplexMatrix a = h.gram();
    const double ridge = alpha / rho;
    for (std::size_t i = 0; i < k; ++i) a(i, i) += ridge;
    const ComplexMatrix l = cholesky(a);  // throws if singular (alpha = 0, rank-deficient H)

    // G = H^* (H H^* + ridge I)^-1: column j of G solves against e_j.
    ComplexMatrix g(m, k);
    std::vector<cplx> e(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::fill(e.begin(), e.end(), cplx{});
        e[j] = 1.0;
        const std::vector<cplx> x = cholesky_solve(l, e);
        for (std::size_t i = 0; i < m; ++i) {
            cplx s = 0.0;
            for (std::size_t u = 0; u < k; ++u) s += std::conj(h(u, i)) * x[u];
            g(i, j) = s;
        }
    }
    return g;
}

double mod_tau(double v, double tau) {
    return v - tau * std::floor(v / tau + 0.5);
}

namespace {

struct LatticeSearch {
    std::size_t n = 0;
    std::vector<double> r;        // upper-triangular factor, row-major
    std::vector<double> center;   // target offsets c
    std::vector<double> y;        // partial sums per level
    std::vector<long> m;          // current integer point
    std::vector<long> best_m;
    double best = 0.0;
    long nodes = 0;
    long cap = 0;
    bool aborted = false;

    double& R(std::size_t i, std::size_t j) { return r[i * n + j]; }

    void descend(std::size_t level, double partial) {
        double acc = 0.0;
        for (std::size_t j = level + 1; j < n; ++j)
            acc += R(level, j) * (static_cast<double>(m[j]) + center[j]);
        y[level] = acc;
        const double diag = R(level, level);
        const double c0 = -center[level] - acc / diag;
        long cand = std::lround(c0);
        long step = (c0 >= static_cast<double>(cand)) ? 1 : -1;
        for (;;) {
            if (++nodes > cap) { aborted = true; return; }
            const double t = diag * (static_cast<double>(cand) + center[level]) + acc;
            const double d = partial + t * t;
            if (d >= best) break;  // zigzag order => every later candidate is worse
            m[level] = cand;
            if (level == 0) {
                best = d;
                best_m = m;
            } else {
                descend(level - 1, d);
                if (aborted) return;
            }
            cand += step;
            step = -step - (step > 0 ? 1 : -1);
        }
    }
};

}  // namespace

PerturbationResult find_perturbation(std::span<const cplx> symbols, const ComplexMatrix& precoder,
                                     double tau, long node_cap) {
    const std::size_t k = precoder.cols();
    if (symbols.size() != k) throw std::invalid_argument("find_perturbation: symbol count != K");
    if (!(tau > 0.0)) throw std::invalid_argument("find_perturbation: tau must be positive");

    // Hermitian form G^*G, expanded to the real interleaved 2K x 2K matrix:
    // entry a = ar + i ai becomes [[ar, -ai], [ai, ar]].
    const ComplexMatrix a = precoder.adjoint().gram();  // (G^*)(G^*)^* = G^* G
    const std::size_t n = 2 * k;
    std::vector<double> b(n * n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double ar = a(i, j).real();
            const double ai = a(i, j).imag();
            b[(2 * i) * n + 2 * j] = ar;
            b[(2 * i) * n + 2 * j + 1] = -ai;
            b[(2 * i + 1) * n + 2 * j] = ai;
            b[(2 * i + 1) * n + 2 * j + 1] = ar;
        }

    // Real Cholesky B = L L^T; R = L^T upper triangular.
    std::vector<double> lfac(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = b[j * n + j];
        for (std::size_t p = 0; p < j; ++p) d -= lfac[j * n + p] * lfac[j * n + p];
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::runtime_error("find_perturbation: quadratic form not positive definite");
        lfac[j * n + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = b[i * n + j];
            for (std::size_t p = 0; p < j; ++p) s -= lfac[i * n + p] * lfac[j * n + p];
            lfac[i * n + j] = s / lfac[j * n + j];
        }
    }

    LatticeSearch se;
    se.n = n;
    se.cap = node_cap;
    se.r.resize(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) se.r[i * n + j] = lfac[j * n + i];
    se.center.resize(n);
    for (std::size_t i = 0; i < k; ++i) {
        se.center[2 * i] = symbols[i].real() / tau;
        se.center[2 * i + 1] = symbols[i].imag() / tau;
    }
    se.y.assign(n, 0.0);
    se.m.assign(n, 0);
    se.best_m.assign(n, 0);

    // Radius from the l = 0 candidate.
    double q0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = 0.0;
        for (std::size_t j = i; j < n; ++j) t += se.r[i * n + j] * se.center[j];
        q0 += t * t;
    }
    se.best = q0;
    se.descend(n - 1, 0.0);

    PerturbationResult out;
    out.offsets.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        out.offsets[i] = {static_cast<double>(se.best_m[2 * i]),
                          static_cast<double>(se.best_m[2 * i + 1])};
    out.objective = se.best * tau * tau;
    out.optimal = !se.aborted;
    out.nodes = se.nodes;
    return out;
}

TransmitResult transmit(std::span<const cplx> symbols, const ComplexMatrix& h,
                        const PrecoderConfig& cfg, double rho, bool enable_perturbation) {
    const std::size_t k = h.rows(), m = h.cols();
    if (symbols.size() != k) throw std::invalid_argument("transmit: symbol count != K");
    const ComplexMatrix g = regularized_inverse(h, cfg.effective_alpha(), rho);
    const double tau = cfg.constellation.tau(cfg.tau_factor);

    TransmitResult out;
    if (enable_perturbation) {
        out.perturbation = find_perturbation(symbols, g, tau, cfg.node_cap);
    } else {
        out.perturbation.offsets.assign(k, cplx{});
        out.perturbation.optimal = true;
    }

    std::vector<cplx> shifted(k);
    for (std::size_t i = 0; i < k; ++i) shifted[i] = symbols[i] + tau * out.perturbation.offsets[i];
    out.x.assign(m, cplx{});
    double energy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += g(i, j) * shifted[j];
        out.x[i] = s;
        energy += std::norm(s);
    }
    if (energy == 0.0) {
        out.gamma_norm = 1.0;
        return out;
    }
    out.gamma_norm = energy;
    const double inv = 1.0 / std::sqrt(energy);
    for (cplx& z : out.x) z *= inv;
    return out;
}

std::vector<int> receive(std::span<const cplx> y, double tau, double gamma_norm,
                         const Constellation& constellation) {
    if (!(gamma_norm > 0.0)) throw std::invalid_argument("receive: gamma_norm must be positive");
    const double scale = std::sqrt(gamma_norm);
    std::vector<int> labels(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const cplx folded{mod_tau(scale * y[i].real(), tau), mod_tau(scale * y[i].imag(), tau)};
        int best = 0;
        double bd = std::norm(folded - constellation.points[0]);
        for (std::size_t p = 1; p < constellation.points.size(); ++p) {
            const double d = std::norm(folded - constellation.points[p]);
            if (d < bd) {
                bd = d;
                best = static_cast<int>(p);
            }
        }
        labels[i] = best;
    }
    return labels;
}

namespace {

struct BlockTally {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

// One coherence block: one channel draw, cfg.coherence_uses channel uses.
// All randomness comes from the per-block counter-based stream, so any
// partition of blocks across threads gives identical totals.
BlockTally run_block(const PrecoderConfig& cfg, double rho, std::uint64_t stream,
                     std::uint64_t block_index, std::uint64_t uses, bool enable_perturbation) {
    const std::size_t k = cfg.num_users;
    const std::size_t m = cfg.num_antennas;
    const std::size_t pool = std::max(cfg.pool_users, k);
    const Constellation& cons = cfg.constellation;
    const int bps = cons.bits_per_symbol;
    const double tau = cons.tau(cfg.tau_factor);
    const double noise_scale = 1.0 / std::sqrt(rho);

    TrialRng rng(stream, block_index);
    ComplexMatrix pool_h(pool, m);
    for (cplx& z : pool_h.entries()) z = rng.next_complex_gaussian();

    BlockTally tally;
    std::vector<std::size_t> order(pool);
    std::vector<int> tx_labels(k);
    std::vector<cplx> u(k), y(k);
    for (std::uint64_t use = 0; use < uses; ++use) {
        ComplexMatrix h = pool_h;
        if (pool > k) {
            // random user subset, without replacement (partial Fisher-Yates)
            for (std::size_t i = 0; i < pool; ++i) order[i] = i;
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (pool - i));
                std::swap(order[i], order[j]);
            }
            h = ComplexMatrix(k, m);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < m; ++j) h(i, j) = pool_h(order[i], j);
        }

        for (std::size_t i = 0; i < k; ++i) {
            tx_labels[i] = static_cast<int>(rng.next_u64() % cons.points.size());
            u[i] = cons.points[tx_labels[i]];
        }
        const TransmitResult tr = transmit(u, h, cfg, rho, enable_perturbation);
        for (std::size_t i = 0; i < k; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += h(i, j) * tr.x[j];
            y[i] = s + noise_scale * rng.next_complex_gaussian();
        }
        const std::vector<int> rx_labels = receive(y, tau, tr.gamma_norm, cons);
        for (std::size_t i = 0; i < k; ++i)
            tally.bit_errors += static_cast<std::uint64_t>(
                std::popcount(static_cast<unsigned>(tx_labels[i] ^ rx_labels[i])));
        tally.bits += static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(bps);
    }
    return tally;
}

}  // namespace

std::vector<BerPoint> simulate_ber(const PrecoderConfig& cfg, std::span<const double> rho_grid_db,
                                   std::uint64_t symbols_per_point, bool enable_perturbation) {
    if (cfg.num_users == 0 || cfg.num_antennas == 0 || cfg.num_users > cfg.num_antennas)
        throw std::invalid_argument("simulate_ber: need 1 <= K <= M");
    if (cfg.pool_users != 0 && cfg.pool_users < cfg.num_users)
        throw std::invalid_argument("simulate_ber: pool smaller than K");
    if (symbols_per_point == 0) throw std::invalid_argument("simulate_ber: need symbols >= 1");
    const std::uint64_t coherence = std::max<std::uint64_t>(cfg.coherence_uses, 1);
    const std::uint64_t uses =
        (symbols_per_point + cfg.num_users - 1) / cfg.num_users;  // user-symbols -> channel uses
    const std::uint64_t blocks = (uses + coherence - 1) / coherence;

    std::vector<BerPoint> out(rho_grid_db.size());
    for (std::size_t p = 0; p < rho_grid_db.size(); ++p) {
        const double rho = std::pow(10.0, rho_grid_db[p] / 10.0);
        const std::uint64_t stream = derive_stream(cfg.seed, p);
        std::uint64_t errors = 0, bits = 0;
        std::atomic<bool> failed{false};
        std::string message;
        const long long nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static) reduction(+ : errors, bits)
        for (long long blk = 0; blk < nb; ++blk) {
            if (failed.load(std::memory_order_relaxed)) continue;
            const std::uint64_t first_use = static_cast<std::uint64_t>(blk) * coherence;
            const std::uint64_t in_block = std::min(coherence, uses - first_use);
            try {
                const BlockTally t = run_block(cfg, rho, stream, static_cast<std::uint64_t>(blk),
                                               in_block, enable_perturbation);
                errors += t.bit_errors;
                bits += t.bits;
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed.store(true, std::memory_order_relaxed);
                    message = e.what();
                }
            }
        }
        if (failed.load()) throw std::runtime_error("simulate_ber: " + message);
        out[p] = {rho_grid_db[p], errors, bits,
                  bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0};
    }
    return out;
}

}  // namespace sumrate
