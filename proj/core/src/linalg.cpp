#include "swcert/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "swcert/errors.hpp"

namespace swcert {

double spectral_radius(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("spectral_radius needs a square matrix");
    if (a.rows() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Matrix symmetrized(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionMismatch("symmetrized needs a square matrix");
    const double asym = (m - m.transpose()).norm();
    const double scale = std::max(1.0, m.norm());
    if (asym > tol * scale)
        throw ValidationError("matrix is not symmetric (asymmetry " + std::to_string(asym) + ")");
    return 0.5 * (m + m.transpose());
}

double min_eigenvalue_sym(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

void require_spd(const Matrix& m, const char* what) {
    const Matrix s = symmetrized(m);
    if (min_eigenvalue_sym(s) <= kPsdTol)
        throw NotPositiveDefinite(std::string(what) + " has min eigenvalue <= tolerance");
}

Matrix spd_sqrt(const Matrix& p) {
    const Matrix s = symmetrized(p);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.eigenvalues()(0) <= kPsdTol) throw NotPositiveDefinite("spd_sqrt argument");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

Matrix spd_inverse(const Matrix& p) {
    const Matrix s = symmetrized(p);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.eigenvalues()(0) <= kPsdTol) throw NotPositiveDefinite("spd_inverse argument");
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

double weighted_matrix_norm(const Matrix& q, const Matrix& p) {
    if (q.rows() != p.rows() || q.cols() != p.cols())
        throw DimensionMismatch("weighted_matrix_norm arguments");
    const Matrix s = spd_sqrt(p);
    Eigen::LLT<Matrix> llt(s);
    // P^{-1/2} Q P^{-1/2} via two triangular solves.
    const Matrix half = llt.solve(symmetrized(q));
    const Matrix whitened = llt.solve(half.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(whitened, 1e-8), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double weighted_operator_norm(const Matrix& m, const Matrix& q) {
    if (m.rows() != m.cols()) throw DimensionMismatch("weighted_operator_norm needs square m");
    if (m.rows() != q.rows()) throw DimensionMismatch("weighted_operator_norm arguments");
    const Matrix s = spd_sqrt(q);
    Eigen::LLT<Matrix> llt(s);
    const Matrix transformed = s * llt.solve(m.transpose()).transpose();
    return operator_norm(transformed);
}

double lyapunov_residual(const Matrix& a, const Matrix& x, const Matrix& s) {
    return (a.transpose() * x * a - x + s).norm();
}

Matrix solve_discrete_lyapunov(const Matrix& a, const Matrix& s) {
    if (a.rows() != a.cols()) throw DimensionMismatch("solve_discrete_lyapunov needs square a");
    if (a.rows() != s.rows() || a.cols() != s.cols())
        throw DimensionMismatch("solve_discrete_lyapunov arguments");
    const double rho = spectral_radius(a);
    if (rho >= 1.0 - kSpecTol)
        throw Unstable("solve_discrete_lyapunov: rho(A) = " + std::to_string(rho));

    // Doubling: X_{k+1} = A_k' X_k A_k + X_k, A_{k+1} = A_k^2 accumulates
    // sum_j (A^j)' S A^j over j < 2^k.
    Matrix x = symmetrized(s);
    Matrix apow = a;
    for (int iter = 0; iter < 128; ++iter) {
        const Matrix incr = apow.transpose() * x * apow;
        x = symmetrized(x + incr, 1e-8);
        if (incr.norm() <= 1e-16 * std::max(1.0, x.norm())) break;
        apow = apow * apow;
        if (iter == 127) throw NoConvergence("solve_discrete_lyapunov doubling stalled");
    }
    // Polish: the exact solution is a fixed point of X <- A'XA + S and the
    // iteration contracts the error by rho(A)^2 per step.
    double res = lyapunov_residual(a, x, s);
    const double target = kLyapTol * std::max(1.0, x.norm());
    for (int iter = 0; iter < 64 && res > target; ++iter) {
        const Matrix candidate = symmetrized(a.transpose() * x * a + s, 1e-8);
        const double next = lyapunov_residual(a, candidate, s);
        if (next >= res) break;
        x = candidate;
        res = next;
    }
    if (res > 1e3 * target)
        throw NoConvergence("solve_discrete_lyapunov residual " + std::to_string(res));
    return x;
}

double contraction_factor(const Matrix& a, const Matrix& p) {
    if (a.rows() != a.cols()) throw DimensionMismatch("contraction_factor needs square a");
    if (a.rows() != p.rows()) throw DimensionMismatch("contraction_factor arguments");
    // Largest eigenvalue of P^{-1/2} A'PA P^{-1/2} = ||P^{1/2} A P^{-1/2}||^2.
    const Matrix s = spd_sqrt(p);
    Eigen::LLT<Matrix> llt(s);
    const Matrix transformed = s * llt.solve(a.transpose()).transpose();
    const double sigma = operator_norm(transformed);
    return sigma * sigma;
}

double dare_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                     const Matrix& p) {
    const Matrix bpb = r + b.transpose() * p * b;
    const Matrix gain_term =
        a.transpose() * p * b * bpb.ldlt().solve(b.transpose() * p * a);
    return (a.transpose() * p * a - p - gain_term + q).norm();
}

DareSolution solve_dare(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    const auto n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("solve_dare needs square a");
    if (b.rows() != n) throw DimensionMismatch("solve_dare: b row count");
    if (q.rows() != n || q.cols() != n) throw DimensionMismatch("solve_dare: q shape");
    if (r.rows() != b.cols() || r.cols() != b.cols()) throw DimensionMismatch("solve_dare: r shape");
    require_spd(q, "solve_dare q");
    require_spd(r, "solve_dare r");

    // Structure-preserving doubling on (E, G, H); H converges to the
    // stabilizing solution of P = A'P(I + GP)^{-1}A + Q with G = B R^{-1} B'.
    const Matrix g0 = b * r.ldlt().solve(b.transpose());
    Matrix e = a;
    Matrix g = symmetrized(g0, 1e-8);
    Matrix h = symmetrized(q);
    const Matrix identity = Matrix::Identity(n, n);
    bool converged = false;
    for (int iter = 0; iter < 128; ++iter) {
        const Matrix igh = identity + g * h;
        Eigen::PartialPivLU<Matrix> lu(igh);
        const Matrix einv = lu.solve(e);            // (I + GH)^{-1} E
        const Matrix ginc = e * lu.solve(g * e.transpose());
        const Matrix hinc = e.transpose() * h * einv;
        const Matrix enext = e * einv;
        g = symmetrized(g + ginc, 1e-6);
        const Matrix hnext = symmetrized(h + hinc, 1e-6);
        const double delta = (hnext - h).norm();
        h = hnext;
        e = enext;
        if (delta <= 1e-14 * std::max(1.0, h.norm())) {
            converged = true;
            break;
        }
        if (!h.allFinite()) throw NoConvergence("solve_dare doubling diverged");
    }
    if (!converged) throw NoConvergence("solve_dare doubling did not converge");

    // Newton polish: with K fixed, the exact P solves a discrete Lyapunov
    // equation in the closed loop; one or two sweeps reach residual ~ eps.
    Matrix p = h;
    for (int sweep = 0; sweep < 4; ++sweep) {
        const Matrix bpb = r + b.transpose() * p * b;
        const Matrix k = -bpb.ldlt().solve(b.transpose() * p * a);
        const Matrix acl = a + b * k;
        if (spectral_radius(acl) >= 1.0 - kSpecTol) break;
        const Matrix pnext = solve_discrete_lyapunov(acl, symmetrized(q + k.transpose() * r * k, 1e-8));
        if (dare_residual(a, b, q, r, pnext) >= dare_residual(a, b, q, r, p)) break;
        p = pnext;
    }

    const Matrix bpb = r + b.transpose() * p * b;
    DareSolution sol;
    sol.p = symmetrized(p, 1e-6);
    sol.k = -bpb.ldlt().solve(b.transpose() * p * a);
    const double rho_cl = spectral_radius(a + b * sol.k);
    if (rho_cl >= 1.0 - kSpecTol)
        throw NotStabilizable("solve_dare closed loop has rho = " + std::to_string(rho_cl));
    const double res = dare_residual(a, b, q, r, sol.p);
    if (res > kLyapTol * std::max(1.0, sol.p.norm()) * 10.0)
        throw NoConvergence("solve_dare residual " + std::to_string(res));
    return sol;
}

Matrix noise_gramian(const Matrix& a0, const Matrix& w) {
    // A0 W~ A0' - W~ + W = 0 is the transposed Lyapunov equation.
    return solve_discrete_lyapunov(a0.transpose(), symmetrized(w));
}

CommonLyapunovCertificate find_common_lyapunov(const Matrix& a1, const Matrix& a0,
                                               double rho_margin, std::int64_t t_max) {
    const double rho1 = spectral_radius(a1);
    if (rho1 >= 1.0 - kSpecTol)
        throw Unstable("find_common_lyapunov: rho(A1) = " + std::to_string(rho1));
    const double rho_a0 = spectral_radius(a0);
    if (rho_a0 >= 1.0 - kSpecTol)
        throw Unstable("find_common_lyapunov: rho(A0) = " + std::to_string(rho_a0));
    if (a1.rows() != a0.rows()) throw DimensionMismatch("find_common_lyapunov arguments");

    CommonLyapunovCertificate cert;
    cert.p = solve_discrete_lyapunov(a1, Matrix::Identity(a1.rows(), a1.cols()));
    cert.rho = std::min(1.0 - kSpecTol, contraction_factor(a1, cert.p) + rho_margin);

    // Walk A0^t until the t-step map contracts in the same P.
    const Matrix s = spd_sqrt(cert.p);
    Eigen::LLT<Matrix> llt(s);
    const Matrix c0 = s * llt.solve(a0.transpose()).transpose();  // P^{1/2} A0 P^{-1/2}
    Matrix cpow = c0;
    for (std::int64_t t = 1; t <= t_max; ++t) {
        const double sigma = operator_norm(cpow);
        if (sigma * sigma < cert.rho) {
            cert.dwell = t;
            return cert;
        }
        cpow = cpow * c0;
    }
    throw DwellTimeOverflow("find_common_lyapunov: no dwell time <= " + std::to_string(t_max));
}

}  // namespace swcert
