#include "sumrate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sumrate {

ComplexMatrix cholesky(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();
    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l(j, k));
        if (!(diag > 0.0) || !std::isfinite(diag))
            throw std::runtime_error("cholesky: matrix not positive definite");
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

std::vector<cplx> cholesky_solve(const ComplexMatrix& l, std::span<const cplx> b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
    std::vector<cplx> y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {                 // L y = b
        for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
        y[i] /= l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {                 // L^H x = y
        for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= std::conj(l(k, ii)) * y[k];
        y[ii] /= l(ii, ii);
    }
    return y;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix a, double tol, int max_sweeps) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigenvalues: not square");
    const std::size_t n = a.rows();
    if (n == 0) throw std::invalid_argument("hermitian_eigenvalues: empty matrix");

    double frob = 0.0;
    for (const cplx& z : a.entries()) frob += std::norm(z);
    frob = std::sqrt(frob);
    const double threshold = tol * std::max(frob, 1e-300);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= threshold) {
            std::vector<double> ev(n);
            for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
            std::sort(ev.begin(), ev.end());
            return ev;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-300) continue;
                // Phase out a(p,q), then a real Jacobi rotation:
                //   U = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
                const cplx phase = apq / m;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * m, app - aqq);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                // U = [[c, -s], [s e^{-i phi}, c e^{-i phi}]]

                // columns p,q: A <- A U
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip + s * std::conj(phase) * aiq;
                    a(i, q) = -s * aip + c * std::conj(phase) * aiq;
                }
                // rows p,q: A <- U^H A
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = c * apj + s * phase * aqj;
                    a(q, j) = -s * apj + c * phase * aqj;
                }
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                a(p, q) = std::conj(a(q, p));
            }
        }
    }
    throw std::runtime_error("hermitian_eigenvalues: Jacobi sweeps did not converge");
}

double log_det_capacity(const ComplexMatrix& h, double scale) {
    if (h.empty()) throw std::invalid_argument("log_det_capacity: empty channel");
    if (!(scale > 0.0)) throw std::invalid_argument("log_det_capacity: scale must be positive");
    if (!h.all_finite()) throw std::runtime_error("log_det_capacity: non-finite channel entry");

    // det(I_M + s H^*H) = det(I_K + s H H^*); factor the smaller Gram.
    const ComplexMatrix g = (h.rows() <= h.cols()) ? h.gram() : h.adjoint().gram();
    const std::size_t n = g.rows();
    ComplexMatrix a = g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = scale * g(i, j) + (i == j ? 1.0 : 0.0);
    const ComplexMatrix l = cholesky(a);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::log2(l(i, i).real());
    return 2.0 * sum;
}

std::vector<double> gram_eigenvalues(const ComplexMatrix& h) {
    if (h.empty()) throw std::invalid_argument("gram_eigenvalues: empty channel");
    if (!h.all_finite()) throw std::runtime_error("gram_eigenvalues: non-finite channel entry");
    return hermitian_eigenvalues(h.gram());
}

}  // namespace sumrate
