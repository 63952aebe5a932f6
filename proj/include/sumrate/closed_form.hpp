#pragma once

namespace sumrate {

/// Intermediates of the Marchenko-Pastur closed form at (beta, rho):
///   a        = 4 rho sqrt(beta) / (1 + rho (sqrt(beta)+1)^2)
///   gamma_mp = (sqrt(beta)-1) / (sqrt(beta)+1)
///   d        = the shared derivative helper entering c1 and c2.
/// sqrt_one_minus_a is computed from the exact identity
///   1 - a = (1 + rho (sqrt(beta)-1)^2) / (1 + rho (sqrt(beta)+1)^2),
/// which never cancels, so a -> 1 (beta = 1, large rho) costs no accuracy.
struct MPParams {
    double beta;
    double rho;
    double a;
    double gamma_mp;
    double sqrt_one_minus_a;
    double d;

    static MPParams from(double beta, double rho);
};

/// Asymptotic per-user spectral efficiency F(beta, rho) in bits: the mean of
/// log2(1 + rho*lambda) under the Marchenko-Pastur eigenvalue law with ratio
/// beta = M/K >= 1.  Closed form; throws std::domain_error for beta < 1 and
/// std::invalid_argument for rho <= 0.
double mp_rate(double beta, double rho);

/// Independent oracle for mp_rate: adaptive Simpson quadrature of
///   (1/pi) integral of log2(1+rho*lambda) sqrt(beta/lambda - (1+(beta-1)/lambda)^2/4)
/// over the support [(sqrt(beta)-1)^2, (sqrt(beta)+1)^2], after the
/// square-root edge singularities are removed by the substitution
/// lambda = l- cos^2(t) + l+ sin^2(t).  Absolute tolerance 1e-8.
double mp_rate_quadrature(double beta, double rho);

/// c1 = rho * dF/drho and c2 = beta * dF/dbeta, in bits, plus their shared
/// helper d.  Exact closed forms (validated against central differences).
double coeff_c1(double beta, double rho);
double coeff_c2(double beta, double rho);
double coeff_d(double beta, double rho);

/// Sensitivity delta/epsilon at (beta, rho): fractional SNR increase per
/// fractional reduction in served users at constant sum-rate.
struct SensitivityPoint {
    double beta;
    double rho;
    double value;
};

/// (F - c2) / c1; nonnegative for beta >= 1, rho > 0.
SensitivityPoint sensitivity(double beta, double rho);

/// Specialized beta = 1 form:  (ln b)(1 + b/rho) - (1/b)(1 + rho/b)
/// with b = (1 + sqrt(1+4 rho))/2.
double sensitivity_beta1(double rho);

enum class SnrRegime { low, high };

struct AsymptoteValue {
    double value;
    bool in_range;  // false when the high-SNR form is evaluated below its validity (value <= 0)
};

/// First-order asymptotes: low -> beta*rho/2;
/// high -> ln(rho)/2 - 1 for beta = 1, ln(rho) + ln(beta-1) - 1 otherwise.
AsymptoteValue sensitivity_asymptote(double beta, double rho, SnrRegime regime);

/// 10 log10(1 + delta) dB; throws std::domain_error for delta <= -1.
double db_penalty(double delta);

/// epsilon = (beta_to - beta_from) / beta_from for beta_to >= beta_from >= 1.
double complexity_reduction(double beta_from, double beta_to);

/// Invert the sensitivity curve: the rho in [1e-8, 1e8] with
/// sensitivity(beta, rho) = target.  A log-spaced scan locates the bracket
/// first (monotonicity in rho is not taken on faith); multiple sign changes
/// throw std::runtime_error, an unbracketed target std::out_of_range.
double solve_operating_point(double beta, double target_sensitivity);

/// Definitional oracle for the sensitivity: solve
/// F(beta + dbeta, rho') / (beta + dbeta) = F(beta, rho) / beta for rho'
/// (constant sum-rate at fixed M) and return ((rho'-rho)/rho)/(dbeta/beta).
/// dbeta <= 0 selects the default 1e-5 * beta.
double finite_diff_sensitivity(double beta, double rho, double dbeta = 0.0);

}  // namespace sumrate
