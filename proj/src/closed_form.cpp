#include "sumrate/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sumrate {

namespace {

constexpr double kLog2E = std::numbers::log2e;

void check_domain(double beta, double rho) {
    if (!(beta >= 1.0)) throw std::domain_error("beta must be >= 1 (serve-fewer-users regime)");
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
}

}  // namespace

MPParams MPParams::from(double beta, double rho) {
    check_domain(beta, rho);
    const double sb = std::sqrt(beta);
    const double up = 1.0 + rho * (sb + 1.0) * (sb + 1.0);   // 1 + rho l+
    const double dn = 1.0 + rho * (sb - 1.0) * (sb - 1.0);   // 1 + rho l-
    const double a = 4.0 * rho * sb / up;
    const double s = std::sqrt(dn / up);                     // sqrt(1-a), exact ratio form
    const double g = (sb - 1.0) / (sb + 1.0);
    const double onePlusS2 = (1.0 + s) * (1.0 + s);
    const double d = (beta - 1.0) / (2.0 * s * up * (g + s))
                   - (sb + 1.0) * (sb + 1.0) / (2.0 * s * up * onePlusS2)
                   - (beta + 1.0) / (2.0 * up * onePlusS2);
    return {beta, rho, a, g, s, d};
}

double mp_rate(double beta, double rho) {
    const MPParams p = MPParams::from(beta, rho);
    const double sb = std::sqrt(beta);
    const double s = p.sqrt_one_minus_a;
    const double g = p.gamma_mp;
    double f = std::log2(1.0 + rho * (sb + 1.0) * (sb + 1.0))
             + (beta + 1.0) * std::log2(0.5 * (1.0 + s))
             - kLog2E * sb * (1.0 - s) / (1.0 + s);
    if (beta != 1.0) f += (beta - 1.0) * std::log2((1.0 + g) / (g + s));
    return f;
}

namespace {

// Integrand after lambda = l- cos^2 t + l+ sin^2 t; the square-root edge
// factors cancel into sin(t)cos(t), leaving a smooth function of t.
double mp_integrand(double t, double lo, double hi, double rho) {
    const double st = std::sin(t);
    const double ct = std::cos(t);
    const double lam = lo * ct * ct + hi * st * st;
    const double w = (hi - lo) * (hi - lo) * st * st * ct * ct / std::numbers::pi;
    // log2(1 + rho lam)/lam -> rho log2(e) as lam -> 0
    const double q = (lam > 0.0) ? std::log1p(rho * lam) * kLog2E / lam : rho * kLog2E;
    return w * q;
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, double lo, double hi, double rho) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = mp_integrand(lm, lo, hi, rho);
    const double frm = mp_integrand(rm, lo, hi, rho);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw std::runtime_error("mp_rate_quadrature: did not converge");
    return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, lo, hi, rho)
         + adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, lo, hi, rho);
}

}  // namespace

double mp_rate_quadrature(double beta, double rho) {
    check_domain(beta, rho);
    const double sb = std::sqrt(beta);
    const double lo = (sb - 1.0) * (sb - 1.0);
    const double hi = (sb + 1.0) * (sb + 1.0);
    const double a = 0.0;
    const double b = 0.5 * std::numbers::pi;
    const double m = 0.5 * (a + b);
    const double fa = mp_integrand(a, lo, hi, rho);
    const double fm = mp_integrand(m, lo, hi, rho);
    const double fb = mp_integrand(b, lo, hi, rho);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(a, b, fa, fm, fb, whole, 1e-8, 48, lo, hi, rho);
}

double coeff_d(double beta, double rho) { return MPParams::from(beta, rho).d; }

double coeff_c1(double beta, double rho) {
    const MPParams p = MPParams::from(beta, rho);
    const double sb = std::sqrt(beta);
    return p.a * kLog2E * ((sb + 1.0) * (sb + 1.0) / (4.0 * sb) + p.d);
}

double coeff_c2(double beta, double rho) {
    const MPParams p = MPParams::from(beta, rho);
    const double sb = std::sqrt(beta);
    const double s = p.sqrt_one_minus_a;
    const double g = p.gamma_mp;
    const double onePlusS2 = (1.0 + s) * (1.0 + s);
    return beta * std::log2((1.0 + g) * (1.0 + s) / (2.0 * (g + s)))
         - kLog2E * (sb - 1.0) * (1.0 - s) / (2.0 * (g + s))
         - 0.25 * p.a * kLog2E
               * (-(sb + 1.0) + 2.0 * p.d * (rho * beta - rho - 1.0) + 2.0 * sb / onePlusS2);
}

SensitivityPoint sensitivity(double beta, double rho) {
    const double f = mp_rate(beta, rho);
    const double c1 = coeff_c1(beta, rho);
    const double c2 = coeff_c2(beta, rho);
    if (!(c1 > 0.0)) throw std::runtime_error("sensitivity: nonpositive c1");
    return {beta, rho, (f - c2) / c1};
}

double sensitivity_beta1(double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    const double b = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * rho));
    return std::log(b) * (1.0 + b / rho) - (1.0 / b) * (1.0 + rho / b);
}

AsymptoteValue sensitivity_asymptote(double beta, double rho, SnrRegime regime) {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    if (regime == SnrRegime::low) return {0.5 * beta * rho, true};
    const double v = (beta == 1.0) ? 0.5 * std::log(rho) - 1.0
                                   : std::log(rho) + std::log(beta - 1.0) - 1.0;
    return {v, v > 0.0};
}

double db_penalty(double delta) {
    if (!(delta > -1.0)) throw std::domain_error("db_penalty: delta must exceed -1");
    return 10.0 * std::log10(1.0 + delta);
}

double complexity_reduction(double beta_from, double beta_to) {
    if (!(beta_from >= 1.0) || !(beta_to >= beta_from))
        throw std::domain_error("complexity_reduction: need beta_to >= beta_from >= 1");
    return (beta_to - beta_from) / beta_from;
}

double solve_operating_point(double beta, double target_sensitivity) {
    if (!(target_sensitivity > 0.0))
        throw std::invalid_argument("solve_operating_point: target must be positive");
    const double lo_exp = -8.0, hi_exp = 8.0;
    const int steps = 320;  // 0.05-decade scan for sign changes
    double prev_rho = std::pow(10.0, lo_exp);
    double prev_val = sensitivity(beta, prev_rho).value - target_sensitivity;
    double blo = 0.0, bhi = 0.0;
    int crossings = 0;
    if (prev_val == 0.0) return prev_rho;
    for (int i = 1; i <= steps; ++i) {
        const double r = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / steps);
        const double v = sensitivity(beta, r).value - target_sensitivity;
        if (v == 0.0) return r;
        if ((prev_val < 0.0) != (v < 0.0)) {
            ++crossings;
            blo = prev_rho;
            bhi = r;
        }
        prev_rho = r;
        prev_val = v;
    }
    if (crossings == 0)
        throw std::out_of_range("solve_operating_point: target not bracketed in [1e-8, 1e8]");
    if (crossings > 1)
        throw std::runtime_error("solve_operating_point: multiple brackets; curve not monotone");
    const bool rising = sensitivity(beta, bhi).value > sensitivity(beta, blo).value;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(blo * bhi);
        const double v = sensitivity(beta, mid).value - target_sensitivity;
        if (std::abs(v) <= 1e-8 * target_sensitivity || (bhi - blo) <= 1e-14 * mid) return mid;
        if ((v < 0.0) == rising) blo = mid; else bhi = mid;
    }
    return std::sqrt(blo * bhi);
}

double finite_diff_sensitivity(double beta, double rho, double dbeta) {
    check_domain(beta, rho);
    if (dbeta <= 0.0) dbeta = 1e-5 * beta;
    const double beta2 = beta + dbeta;
    const double target = mp_rate(beta, rho) / beta;  // per-user rate scaled by 1/beta = K/M

    auto shifted = [&](double r) { return mp_rate(beta2, r) / beta2 - target; };

    double lo = rho, hi = rho;
    double flo = shifted(lo);
    if (flo == 0.0) return 0.0;
    if (flo > 0.0) throw std::runtime_error("finite_diff_sensitivity: rate not reduced by dbeta");
    for (int i = 0; i < 200 && shifted(hi) < 0.0; ++i) hi *= 1.0 + std::max(dbeta, 1e-4);
    if (shifted(hi) < 0.0) throw std::out_of_range("finite_diff_sensitivity: root not bracketed");
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (shifted(mid) < 0.0) lo = mid; else hi = mid;
        if ((hi - lo) <= 1e-16 * mid) break;
    }
    const double rho2 = 0.5 * (lo + hi);
    return ((rho2 - rho) / rho) / (dbeta / beta);
}

}  // namespace sumrate
