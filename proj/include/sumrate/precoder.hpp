#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sumrate/matrix.hpp"

namespace sumrate {

/// Square QAM constellation, unit average energy, Gray-labeled: the index of
/// a point is its label, adjacent points differ in exactly one bit.
struct Constellation {
    std::string name;
    std::vector<cplx> points;
    double delta = 0.0;   // spacing between adjacent points
    double c_max = 0.0;   // magnitude of the outermost point
    int bits_per_symbol = 0;

    /// Modulo spacing tau = factor * (c_max + delta/2).
    double tau(double factor = 2.5) const { return factor * (c_max + 0.5 * delta); }

    static Constellation qpsk();
    static Constellation qam16();
};

struct PrecoderConfig {
    std::size_t num_antennas = 8;
    std::size_t num_users = 8;
    std::size_t pool_users = 0;  // 0 -> num_users; else draw num_users rows of a pool channel
    double alpha = -1.0;         // regularization; < 0 -> default K (MMSE-style)
    Constellation constellation = Constellation::qpsk();
    std::uint64_t seed = 1;
    double tau_factor = 2.5;
    std::size_t coherence_uses = 1;  // channel uses per fading block (1 = fast fading)
    long node_cap = 1'000'000;       // lattice search node budget

    double effective_alpha() const {
        return alpha < 0.0 ? static_cast<double>(num_users) : alpha;
    }
};

/// Precoding matrix G = H^*(H H^* + (alpha/rho) I)^-1 (M x K), so that H G
/// is the K x K effective channel (identity when alpha = 0 and H has full
/// row rank).
ComplexMatrix regularized_inverse(const ComplexMatrix& h, double alpha, double rho);

struct PerturbationResult {
    std::vector<cplx> offsets;  // Gaussian-integer vector l
    double objective = 0.0;     // (u+tau l)^* (G^*G) (u+tau l) at the returned l
    bool optimal = true;        // false only if the node cap aborted the search
    long nodes = 0;
};

/// Exact minimizer of (u + tau l)^* (G^*G) (u + tau l) over Gaussian-integer
/// vectors l: Schnorr-Euchner enumeration on the Cholesky factor of the
/// real 2K-dimensional form (real/imaginary parts interleaved), radius
/// initialized at the l = 0 candidate.
PerturbationResult find_perturbation(std::span<const cplx> symbols, const ComplexMatrix& precoder,
                                     double tau, long node_cap = 1'000'000);

struct TransmitResult {
    std::vector<cplx> x;      // unit-norm transmit vector (M)
    double gamma_norm = 1.0;  // ||G(u + tau l)||^2 before normalization
    PerturbationResult perturbation;
};

TransmitResult transmit(std::span<const cplx> symbols, const ComplexMatrix& h,
                        const PrecoderConfig& cfg, double rho, bool enable_perturbation = true);

/// Centered modulo: v reduced into [-tau/2, tau/2).
double mod_tau(double v, double tau);

/// Scale by sqrt(gamma_norm), fold each axis mod tau, slice to the nearest
/// constellation point; returns the Gray labels.
std::vector<int> receive(std::span<const cplx> y, double tau, double gamma_norm,
                         const Constellation& constellation);

struct BerPoint {
    double rho_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_sent = 0;
    double ber = 0.0;
};

/// Uncoded BER of the full chain at each SNR point.  rho is the ratio of
/// total transmit power (normalized to 1) to per-user receive noise power,
/// so the unit-variance noise draw is scaled by 1/sqrt(rho).  Fresh channel
/// per coherence block; users drawn without replacement from the pool when
/// pool_users > num_users.  symbols_per_point counts user-symbols.
std::vector<BerPoint> simulate_ber(const PrecoderConfig& cfg, std::span<const double> rho_grid_db,
                                   std::uint64_t symbols_per_point, bool enable_perturbation = true);

}  // namespace sumrate
