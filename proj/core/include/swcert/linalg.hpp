#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "swcert/certificates.hpp"

namespace swcert {

// Numerical contract tolerances. Inputs are symmetrized by averaging with the
// transpose when the asymmetry is below kSymTol; positive definiteness is
// decided on the minimum eigenvalue against kPsdTol; Schur stability against
// kSpecTol; equation residuals against kLyapTol (Frobenius norm).
inline constexpr double kSymTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kSpecTol = 1e-9;
inline constexpr double kLyapTol = 1e-10;

/// Spectral radius: maximum modulus over the eigenvalues of a square matrix.
double spectral_radius(const Matrix& a);

/// Returns (m + m') / 2 after checking the relative asymmetry is within tol.
/// Throws ValidationError when the asymmetry exceeds the tolerance.
Matrix symmetrized(const Matrix& m, double tol = kSymTol);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue_sym(const Matrix& sym);

/// Throws NotPositiveDefinite unless min eigenvalue > kPsdTol.
void require_spd(const Matrix& m, const char* what);

/// Symmetric positive definite square root: returns S = S' > 0 with S*S = p.
Matrix spd_sqrt(const Matrix& p);

/// Inverse of an SPD matrix through its eigendecomposition.
Matrix spd_inverse(const Matrix& p);

/// Weighted matrix norm of an SPD pair: || P^{-1/2} Q P^{-1/2} ||, the largest
/// eigenvalue of the P-whitened Q. Equals sup over ||v||_P = 1 of ||v||_Q^2.
double weighted_matrix_norm(const Matrix& q, const Matrix& p);

/// Induced 2-norm of the Q-similarity transform of a square matrix:
/// || Q^{1/2} m Q^{-1/2} ||.
double weighted_operator_norm(const Matrix& m, const Matrix& q);

/// Solves the discrete Lyapunov equation A' X A - X + S = 0 for Schur-stable
/// A and SPD S by squaring (doubling) iterations, then polishes until the
/// residual is below kLyapTol (scaled by the solution size).
/// Throws Unstable when rho(A) >= 1 - kSpecTol, NoConvergence on stagnation.
Matrix solve_discrete_lyapunov(const Matrix& a, const Matrix& s);

/// Smallest rho with A' P A <= rho P: the largest eigenvalue of
/// P^{-1/2} A' P A P^{-1/2}. Strictly below 1 iff P certifies contraction of A.
double contraction_factor(const Matrix& a, const Matrix& p);

struct DareSolution {
    Matrix p;  // stabilizing fixed point
    Matrix k;  // optimal gain, u = K x
};

/// Stabilizing solution of the discrete algebraic Riccati equation
///   P = A'PA - A'PB (R + B'PB)^{-1} B'PA + Q
/// via the structure-preserving doubling iteration with Newton polish.
/// Also returns K = -(R + B'PB)^{-1} B'PA; guarantees rho(A + BK) < 1.
DareSolution solve_dare(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r);

/// Steady-state covariance of noise driven through the stable loop A0:
/// solves A0 W~ A0' - W~ + W = 0, i.e. W~ = sum_tau A0^tau W (A0^tau)'.
/// The result always dominates W.
Matrix noise_gramian(const Matrix& a0, const Matrix& w);

/// Searches for a common quadratic Lyapunov certificate for A1 and A0^t.
/// P solves A1' P A1 - P + I = 0; rho = min(1 - kSpecTol,
/// contraction_factor(A1, P) + rho_margin); t is the smallest positive integer
/// with contraction_factor(A0^t, P) < rho.
/// Throws Unstable when either matrix is not Schur-stable and DwellTimeOverflow
/// when no t <= t_max works.
CommonLyapunovCertificate find_common_lyapunov(const Matrix& a1, const Matrix& a0,
                                               double rho_margin = 0.01,
                                               std::int64_t t_max = 1000000);

/// Frobenius norm of the Lyapunov residual A' X A - X + S.
double lyapunov_residual(const Matrix& a, const Matrix& x, const Matrix& s);

/// Frobenius norm of the Riccati residual of (p, implied gain).
double dare_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                     const Matrix& p);

/// Induced 2-norm (largest singular value).
double operator_norm(const Matrix& m);

}  // namespace swcert
