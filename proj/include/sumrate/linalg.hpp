#pragma once

#include <span>
#include <vector>

#include "sumrate/matrix.hpp"

namespace sumrate {

/// Cholesky factor L (lower triangular) of a Hermitian positive-definite
/// matrix, A = L L^adjoint.  Throws std::runtime_error if A is not positive
/// definite within roundoff.
ComplexMatrix cholesky(const ComplexMatrix& a);

/// Solve A x = b given the Cholesky factor L of A.
std::vector<cplx> cholesky_solve(const ComplexMatrix& chol_lower, std::span<const cplx> b);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
/// Converged when the off-diagonal Frobenius norm falls below
/// `tol` * (Frobenius norm of the input); at most `max_sweeps` sweeps, then
/// std::runtime_error.
std::vector<double> hermitian_eigenvalues(ComplexMatrix a, double tol = 1e-12,
                                          int max_sweeps = 100);

/// log2 det(I + scale * H^adjoint H) in bits, >= 0.  Evaluated through the
/// Cholesky factor of the smaller Gram matrix of H, so the determinant never
/// overflows.  scale must be > 0, H nonempty with finite entries.
double log_det_capacity(const ComplexMatrix& h, double scale);

/// Eigenvalues of H H^adjoint (rows x rows), ascending.
std::vector<double> gram_eigenvalues(const ComplexMatrix& h);

}  // namespace sumrate
