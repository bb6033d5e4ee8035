#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "swcert/certificates.hpp"
#include "swcert/linalg.hpp"
#include "swcert/system.hpp"

namespace swcert {

// The Gaussian tail analysis is carried out under rho in (1/4, 1); a
// certificate with smaller rho is raised to this floor before evaluation,
// which is always sound because the certificate inequalities hold a fortiori
// for larger rho.
inline constexpr double kRhoFloor = 0.2500001;

/// Builds the fallback certificate: P0 solves
/// (A+BK0)' P0 (A+BK0) - P0 + Q + K0'RK0 = 0 and rho0 is the contraction
/// factor plus a safety margin, capped below 1.
/// Throws Unstable (naming rho(A+BK0)) when K0 is not a valid fallback.
StabilityCertificate certify_fallback(const Matrix& a, const Matrix& b, const Matrix& k0,
                                      const Matrix& q, const Matrix& r, double margin = 0.01);

struct CertificateCheck {
    double lyapunov_residual = 0.0;  // Frobenius residual of the defining equation
    double psd_margin = 0.0;         // min eig of rho*P - A'PA (>= -tol required)
    bool ok = false;
};

/// Verifies the fallback certificate against its defining equations.
CertificateCheck check_stability_certificate(const StabilityCertificate& cert, const Matrix& a0,
                                             const Matrix& forcing);

/// Verifies both contraction inequalities of the common Lyapunov certificate.
struct CommonLyapunovCheck {
    double margin_primary = 0.0;   // min eig of rho*P - A1'PA1
    double margin_fallback = 0.0;  // min eig of rho*P - (A0^t)'P(A0^t)
    bool ok = false;
};
CommonLyapunovCheck check_common_lyapunov(const CommonLyapunovCertificate& cert,
                                          const Matrix& a1, const Matrix& a0);

/// Expected-Lyapunov-function cap:
/// 4 (1+rho0) (M^2 ||B||^2 ||P0|| + tr(W P0)) / (1-rho0)^2.
double lemma1_ev_bound(const StabilityCertificate& cert0, const Matrix& b, const Matrix& w,
                       double threshold);

/// Unconditional cost cap (independent of the primary gain):
/// (8 (1+rho0) ||B||^2 ||P0|| / (1-rho0)^2 + 2 ||R||) M^2
///   + 8 (1+rho0) tr(W P0) / (1-rho0)^2.
double theorem1_cost_cap(const StabilityCertificate& cert0, const Matrix& b, const Matrix& r,
                         const Matrix& w, double threshold);

/// Tail constants for the exponentially weighted sum of sub-Gaussian variables.
struct TailConstants {
    double c1_tilde = 0.0;  // 2 C1 / min(1/varrho - 1, 1)
    double c2_tilde = 0.0;  // (1 - sqrt(varrho))^2 C2
    double a_min = 0.0;     // 2 / (sqrt(C2) (1 - sqrt(varrho)))
};
TailConstants theorem2_tail_constants(double c1, double c2, double varrho);

/// Super-exponential escape envelope E(a) = front * exp(-decay * a^2).
struct EscapeFunction {
    double front = 0.0;
    double decay = 0.0;
    double operator()(double a) const { return front * std::exp(-decay * a * a); }
};

/// Polynomial escape envelope P(a) = scale / a^4.
struct PolyEscapeFunction {
    double scale = 0.0;
    double operator()(double a) const { return scale / (a * a * a * a); }
};

/// Everything the closed-form calculators consume, assembled once from the
/// plant, the gain pair, and the two certificates. rho is raised to the
/// analysis floor here. mu4 carries E||w||^4 for the heavy-tail chain.
struct BoundInputs {
    StabilityCertificate cert0;
    CommonLyapunovCertificate certc;
    Matrix w_tilde;
    double k_diff = 0.0;    // ||K1 - K0||
    double threshold = 0.0; // M
    int n = 0;
    Matrix b, r, w, q1, a1, delta1, delta2;
    double mu4 = 0.0;

    static BoundInputs make(const LinearSystem& sys, const Matrix& k0, const Matrix& k1,
                            const StabilityCertificate& cert0,
                            const CommonLyapunovCertificate& certc, double threshold,
                            double mu4);
};

struct Theorem3Result {
    double q_script = 0.0;             // moment constant of the transformed system
    double fourth_moment_bound = 0.0;  // on E ||x_k||_{P0}^4
    double a0 = 0.0;                   // validity floor: requires M >= a0 * k_diff
    double switch_prob_bound = 0.0;    // t * E(M / k_diff)
    bool valid = false;
    EscapeFunction escape;
};

/// Gaussian moment and switch-probability bounds. Invalid thresholds
/// (M < a0 * k_diff) are reported through the flag, not raised, so sweeps can
/// annotate uncertified regions.
Theorem3Result theorem3_gaussian(const BoundInputs& in);

struct Theorem4Result {
    double gap_bound = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double g = 0.0;  // C4 (t E(M/K))^{1/4}
    Theorem3Result thm3;
};

/// Gaussian performance-gap bound 2 C1 C2 G + (C2^2 + C3) G^2.
Theorem4Result theorem4_gap_bound(const BoundInputs& in);

/// Decay-rate constant of the super-exponential gap shrinkage:
/// c = (1 - rho^{1/4})^2 / (16 ||W~|| ||P|| ||P^{-1}|| K^2).
/// Throws DegenerateGains when K1 == K0.
double corollary1_rate_constant(const BoundInputs& in);

/// mu4~ = ||P0||^2 mu4 / (1 - rho0^2) + 2 rho0 tr(W P0) / ((1-rho0^2)(1-rho0)).
double heavytail_mu4tilde(const StabilityCertificate& cert0, const Matrix& w, double mu4);

struct Theorem5Result {
    double mu4_tilde = 0.0;
    double q_tilde = 0.0;
    double fourth_moment_bound = 0.0;     // 8 (Q~ ||P0||_P^2 + mu4~)
    double switch_prob_bound_raw = 0.0;   // t * P(M/K), may exceed 1
    double switch_prob_bound = 0.0;       // clipped to 1 for reporting
    PolyEscapeFunction escape;
};

/// Heavy-tail (bounded fourth moment) moment and switch-probability bounds.
/// No validity floor exists in this regime.
Theorem5Result theorem5_heavytail(const BoundInputs& in);

struct Theorem6Result {
    double gap_bound = 0.0;
    double g_tilde = 0.0;
    Theorem5Result thm5;
};

/// Heavy-tail performance-gap bound; consumes the raw (unclipped) escape value.
Theorem6Result theorem6_gap_bound(const BoundInputs& in);

/// sum_{s>=0} ||A^s||_Q (Q-similarity operator norms) with a certified
/// geometric tail so the result is always an upper bound on the series.
double operator_norm_series(const Matrix& a, const Matrix& q, const Matrix& p, double rho);

}  // namespace swcert
