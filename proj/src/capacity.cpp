#include "sumrate/capacity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sumrate/channel.hpp"
#include "sumrate/linalg.hpp"

namespace sumrate {

namespace {

constexpr double kLog2E = std::numbers::log2e;

std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& x : v) x = std::max(x - theta, 0.0);
    return v;
}

// Objective / gradient / optional row-coupling matrix B[j][k] = h_j A^-1 h_k^*
// with A = I + rho H^* diag(w) H.  Everything in bits.
struct Evaluation {
    double f = 0.0;
    std::vector<double> g;
    std::vector<std::vector<cplx>> coupling;  // filled only when requested
};

Evaluation evaluate(const ComplexMatrix& h, double rho, const std::vector<double>& w,
                    bool want_coupling) {
    const std::size_t k = h.rows(), m = h.cols();
    ComplexMatrix a = ComplexMatrix::identity(m);
    for (std::size_t u = 0; u < k; ++u) {
        if (w[u] == 0.0) continue;
        const double s = rho * w[u];
        for (std::size_t i = 0; i < m; ++i) {
            const cplx hi = std::conj(h(u, i));
            for (std::size_t j = 0; j < m; ++j) a(i, j) += s * hi * h(u, j);
        }
    }
    const ComplexMatrix l = cholesky(a);

    Evaluation ev;
    for (std::size_t i = 0; i < m; ++i) ev.f += std::log2(l(i, i).real());
    ev.f *= 2.0;

    std::vector<std::vector<cplx>> y(k);  // y[u] = A^-1 h_u^*
    std::vector<cplx> rhs(m);
    for (std::size_t u = 0; u < k; ++u) {
        for (std::size_t i = 0; i < m; ++i) rhs[i] = std::conj(h(u, i));
        y[u] = cholesky_solve(l, rhs);
    }
    ev.g.resize(k);
    for (std::size_t u = 0; u < k; ++u) {
        cplx dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += h(u, i) * y[u][i];
        ev.g[u] = kLog2E * rho * dot.real();
    }
    if (want_coupling) {
        ev.coupling.assign(k, std::vector<cplx>(k));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t u = 0; u < k; ++u) {
                cplx dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += h(j, i) * y[u][i];
                ev.coupling[j][u] = dot;
            }
    }
    return ev;
}

double kkt_gap(const std::vector<double>& w, const std::vector<double>& g) {
    const double lambda = *std::max_element(g.begin(), g.end());
    double gw = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) gw += g[i] * w[i];
    return lambda - gw;
}

// Real symmetric positive-definite solve (tiny systems), for the face Newton
// step.  Returns false if the factorization breaks down.
bool spd_solve(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& rhs_cols) {
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j][j];
        for (std::size_t p = 0; p < j; ++p) d -= a[j][p] * a[j][p];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        a[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i][j];
            for (std::size_t p = 0; p < j; ++p) s -= a[i][p] * a[j][p];
            a[i][j] = s / a[j][j];
        }
    }
    for (auto& b : rhs_cols) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t p = 0; p < i; ++p) b[i] -= a[i][p] * b[p];
            b[i] /= a[i][i];
        }
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t p = i + 1; p < n; ++p) b[i] -= a[p][i] * b[p];
            b[i] /= a[i][i];
        }
    }
    return true;
}

}  // namespace

PowerOptResult optimize_power_allocation(const ComplexMatrix& h, double rho, double tol,
                                         int max_iterations) {
    if (h.empty()) throw std::invalid_argument("optimize_power_allocation: empty channel");
    if (!(rho > 0.0)) throw std::invalid_argument("optimize_power_allocation: rho must be positive");
    if (!h.all_finite()) throw std::runtime_error("optimize_power_allocation: non-finite entry");

    const std::size_t k = h.rows();
    PowerOptResult res;
    if (k == 1) {
        res.allocation.weights = {1.0};
        res.objective_bits = log_det_capacity(h, rho);
        res.kkt_gap = 0.0;
        res.converged = true;
        return res;
    }

    std::vector<double> w(k, 1.0 / static_cast<double>(k));
    Evaluation ev = evaluate(h, rho, w, false);
    int iters = 0;

    // Phase 1: projected gradient ascent, Barzilai-Borwein step with Armijo
    // backtracking (halving).
    double step = 1.0;
    std::vector<double> w_prev, g_prev;
    const double coarse = std::max(tol, 1e-5);
    while (iters < max_iterations && kkt_gap(w, ev.g) >= coarse) {
        ++iters;
        if (!w_prev.empty()) {
            double dwdw = 0.0, dwdg = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double dw = w[i] - w_prev[i];
                dwdw += dw * dw;
                dwdg += dw * (ev.g[i] - g_prev[i]);
            }
            step = (-dwdg > 1e-300) ? dwdw / -dwdg : 1e14;
            step = std::clamp(step, 1e-12, 1e14);
        }
        bool accepted = false;
        double s = step;
        for (int back = 0; back < 100; ++back) {
            std::vector<double> cand(k);
            for (std::size_t i = 0; i < k; ++i) cand[i] = w[i] + s * ev.g[i];
            cand = project_simplex(std::move(cand));
            double gd = 0.0;
            for (std::size_t i = 0; i < k; ++i) gd += ev.g[i] * (cand[i] - w[i]);
            Evaluation ev2 = evaluate(h, rho, cand, false);
            if (ev2.f > ev.f + 1e-4 * gd) {
                w_prev = std::move(w);
                g_prev = std::move(ev.g);
                w = std::move(cand);
                ev.f = ev2.f;
                ev.g = std::move(ev2.g);
                step = s;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) break;
    }

    // Phase 2: Newton polish on the active face; the coordinate holding the
    // largest gradient joins the face if it is currently inactive.
    for (int polish = 0; polish < 50 && iters < max_iterations; ++polish) {
        const double gap = kkt_gap(w, ev.g);
        if (gap < tol) break;
        ++iters;

        std::vector<std::size_t> face;
        const auto argmax = static_cast<std::size_t>(
            std::distance(ev.g.begin(), std::max_element(ev.g.begin(), ev.g.end())));
        for (std::size_t i = 0; i < k; ++i)
            if (w[i] > 0.0 || i == argmax) face.push_back(i);
        const std::size_t nf = face.size();
        if (nf < 2) break;

        Evaluation evh = evaluate(h, rho, w, true);
        // P = -Hessian restricted to the face (positive definite):
        // P[j][u] = log2e rho^2 |coupling[j][u]|^2
        std::vector<std::vector<double>> p(nf, std::vector<double>(nf));
        for (std::size_t j = 0; j < nf; ++j)
            for (std::size_t u = 0; u < nf; ++u)
                p[j][u] = kLog2E * rho * rho * std::norm(evh.coupling[face[j]][face[u]]);
        std::vector<std::vector<double>> cols(2, std::vector<double>(nf));
        for (std::size_t j = 0; j < nf; ++j) {
            cols[0][j] = ev.g[face[j]];
            cols[1][j] = 1.0;
        }
        if (!spd_solve(p, cols)) break;
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < nf; ++j) {
            num += cols[0][j];
            den += cols[1][j];
        }
        if (den == 0.0 || !std::isfinite(num / den)) break;
        const double nu = num / den;
        std::vector<double> dir(nf);
        bool finite = true;
        for (std::size_t j = 0; j < nf; ++j) {
            dir[j] = cols[0][j] - nu * cols[1][j];
            finite = finite && std::isfinite(dir[j]);
        }
        if (!finite) break;

        double alpha = 1.0;
        for (std::size_t j = 0; j < nf; ++j)
            if (dir[j] < 0.0) alpha = std::min(alpha, -w[face[j]] / dir[j]);
        bool accepted = false;
        for (int back = 0; back < 60; ++back) {
            std::vector<double> cand = w;
            for (std::size_t j = 0; j < nf; ++j)
                cand[face[j]] = std::max(w[face[j]] + alpha * dir[j], 0.0);
            const double total = std::accumulate(cand.begin(), cand.end(), 0.0);
            if (total <= 0.0) { alpha *= 0.5; continue; }
            for (double& x : cand) x /= total;
            Evaluation ev2 = evaluate(h, rho, cand, false);
            const double gap2 = kkt_gap(cand, ev2.g);
            if (ev2.f > ev.f || (ev2.f >= ev.f - 1e-12 * (1.0 + std::abs(ev.f)) && gap2 < 0.9 * gap)) {
                w = std::move(cand);
                ev.f = ev2.f;
                ev.g = std::move(ev2.g);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }

    res.allocation.weights = w;
    res.objective_bits = ev.f;
    res.kkt_gap = kkt_gap(w, ev.g);
    res.iterations = iters;
    res.converged = res.kkt_gap < tol;
    return res;
}

namespace {

template <typename Fn>
Estimate run_trials(std::uint64_t trials, Fn&& per_trial) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    std::vector<double> values(trials);
    std::atomic<bool> failed{false};
    std::string message;
    const long long n = static_cast<long long>(trials);
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < n; ++t) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            values[static_cast<std::size_t>(t)] = per_trial(static_cast<std::uint64_t>(t));
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed.store(true, std::memory_order_relaxed);
                message = e.what();
            }
        }
    }
    if (failed.load()) throw std::runtime_error("monte carlo trial failed: " + message);
    return reduce_trials(values);
}

}  // namespace

Estimate estimate_equal_power_rate(std::size_t num_antennas, std::size_t num_users, double rho,
                                   std::uint64_t trials, std::uint64_t seed) {
    if (num_antennas == 0 || num_users == 0)
        throw std::invalid_argument("estimate_equal_power_rate: dimensions must be >= 1");
    if (!(rho > 0.0)) throw std::invalid_argument("estimate_equal_power_rate: rho must be positive");
    const double scale = rho / static_cast<double>(num_users);
    return run_trials(trials, [&](std::uint64_t t) {
        const ComplexMatrix h = sample_channel({num_users, num_antennas, seed, t});
        return log_det_capacity(h, scale);
    });
}

Estimate estimate_optimized_rate(std::size_t num_antennas, std::size_t num_users, double rho,
                                 std::uint64_t trials, std::uint64_t seed, double tol) {
    if (num_antennas == 0 || num_users == 0)
        throw std::invalid_argument("estimate_optimized_rate: dimensions must be >= 1");
    if (!(rho > 0.0)) throw std::invalid_argument("estimate_optimized_rate: rho must be positive");
    return run_trials(trials, [&](std::uint64_t t) {
        const ComplexMatrix h = sample_channel({num_users, num_antennas, seed, t});
        return optimize_power_allocation(h, rho, tol).objective_bits;
    });
}

double best_single_user_rate(const ComplexMatrix& h, double rho) {
    if (h.empty()) throw std::invalid_argument("best_single_user_rate: empty channel");
    if (!(rho > 0.0)) throw std::invalid_argument("best_single_user_rate: rho must be positive");
    double best = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        double gain = 0.0;
        for (std::size_t j = 0; j < h.cols(); ++j) gain += std::norm(h(i, j));
        best = std::max(best, gain);
    }
    return std::log2(1.0 + rho * best);
}

double low_snr_linear_bound(std::size_t num_antennas, double rho) {
    if (num_antennas == 0) throw std::invalid_argument("low_snr_linear_bound: need M >= 1");
    if (rho < 0.0) throw std::invalid_argument("low_snr_linear_bound: rho must be nonnegative");
    return kLog2E * rho * static_cast<double>(num_antennas);
}

}  // namespace sumrate
