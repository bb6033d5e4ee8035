#include "swcert/bounds.hpp"

#include <string>

#include "swcert/errors.hpp"

namespace swcert {

StabilityCertificate certify_fallback(const Matrix& a, const Matrix& b, const Matrix& k0,
                                      const Matrix& q, const Matrix& r, double margin) {
    const Matrix a0 = a + b * k0;
    const double rho_cl = spectral_radius(a0);
    if (rho_cl >= 1.0 - kSpecTol)
        throw Unstable("fallback gain is not stabilizing: rho(A+BK0) = " + std::to_string(rho_cl));
    const Matrix forcing = symmetrized(q + k0.transpose() * r * k0, 1e-8);
    StabilityCertificate cert;
    cert.p0 = solve_discrete_lyapunov(a0, forcing);
    cert.rho0 = std::min(contraction_factor(a0, cert.p0) + margin, 1.0 - kSpecTol);
    return cert;
}

CertificateCheck check_stability_certificate(const StabilityCertificate& cert, const Matrix& a0,
                                             const Matrix& forcing) {
    CertificateCheck out;
    out.lyapunov_residual = lyapunov_residual(a0, cert.p0, forcing);
    out.psd_margin =
        min_eigenvalue_sym(symmetrized(cert.rho0 * cert.p0 - a0.transpose() * cert.p0 * a0, 1e-8));
    out.ok = out.lyapunov_residual <= kLyapTol * std::max(1.0, cert.p0.norm()) &&
             out.psd_margin >= -kPsdTol && cert.rho0 > 0.0 && cert.rho0 < 1.0;
    return out;
}

CommonLyapunovCheck check_common_lyapunov(const CommonLyapunovCertificate& cert, const Matrix& a1,
                                          const Matrix& a0) {
    Matrix a0t = Matrix::Identity(a0.rows(), a0.cols());
    for (std::int64_t i = 0; i < cert.dwell; ++i) a0t = a0t * a0;
    CommonLyapunovCheck out;
    out.margin_primary =
        min_eigenvalue_sym(symmetrized(cert.rho * cert.p - a1.transpose() * cert.p * a1, 1e-8));
    out.margin_fallback =
        min_eigenvalue_sym(symmetrized(cert.rho * cert.p - a0t.transpose() * cert.p * a0t, 1e-8));
    out.ok = out.margin_primary >= -kPsdTol && out.margin_fallback >= -kPsdTol &&
             cert.rho > 0.0 && cert.rho < 1.0 && cert.dwell >= 1;
    return out;
}

double lemma1_ev_bound(const StabilityCertificate& cert0, const Matrix& b, const Matrix& w,
                       double threshold) {
    const double rho0 = cert0.rho0;
    const double nb = operator_norm(b);
    const double np0 = operator_norm(cert0.p0);
    const double trwp0 = (w * cert0.p0).trace();
    return 4.0 * (1.0 + rho0) * (threshold * threshold * nb * nb * np0 + trwp0) /
           ((1.0 - rho0) * (1.0 - rho0));
}

double theorem1_cost_cap(const StabilityCertificate& cert0, const Matrix& b, const Matrix& r,
                         const Matrix& w, double threshold) {
    const double rho0 = cert0.rho0;
    const double nb = operator_norm(b);
    const double np0 = operator_norm(cert0.p0);
    const double nr = operator_norm(r);
    const double trwp0 = (w * cert0.p0).trace();
    const double denom = (1.0 - rho0) * (1.0 - rho0);
    return (8.0 * (1.0 + rho0) * nb * nb * np0 / denom + 2.0 * nr) * threshold * threshold +
           8.0 * (1.0 + rho0) * trwp0 / denom;
}

TailConstants theorem2_tail_constants(double c1, double c2, double varrho) {
    if (!(c1 > 0.0 && c2 > 0.0)) throw ValidationError("tail constants must be positive");
    if (!(varrho > 0.0 && varrho < 1.0)) throw ValidationError("varrho must be in (0,1)");
    TailConstants out;
    out.c1_tilde = 2.0 * c1 / std::min(1.0 / varrho - 1.0, 1.0);
    const double one_minus_sqrt = 1.0 - std::sqrt(varrho);
    out.c2_tilde = one_minus_sqrt * one_minus_sqrt * c2;
    out.a_min = 2.0 / (std::sqrt(c2) * one_minus_sqrt);
    return out;
}

BoundInputs BoundInputs::make(const LinearSystem& sys, const Matrix& k0, const Matrix& k1,
                              const StabilityCertificate& cert0,
                              const CommonLyapunovCertificate& certc, double threshold,
                              double mu4) {
    sys.validate();
    if (k0.rows() != k1.rows() || k0.cols() != k1.cols())
        throw DimensionMismatch("gain shapes differ");
    const double n = static_cast<double>(sys.state_dim());
    if (mu4 < (sys.w.trace() * sys.w.trace()) / n - 1e-9)
        throw ValidationError("mu4 below the Cauchy-Schwarz floor (tr W)^2 / n");
    BoundInputs in;
    in.cert0 = cert0;
    in.certc = certc;
    in.certc.rho = std::max(certc.rho, kRhoFloor);
    in.w_tilde = noise_gramian(sys.a + sys.b * k0, sys.w);
    in.k_diff = operator_norm(k1 - k0);
    in.threshold = threshold;
    in.n = static_cast<int>(sys.state_dim());
    in.b = sys.b;
    in.r = sys.r;
    in.w = sys.w;
    in.q1 = symmetrized(sys.q + k1.transpose() * sys.r * k1, 1e-8);
    in.a1 = sys.a + sys.b * k1;
    in.delta1 = sys.b * (k0 - k1);
    in.delta2 = k0.transpose() * sys.r * k0 - k1.transpose() * sys.r * k1;
    in.mu4 = mu4;
    return in;
}

Theorem3Result theorem3_gaussian(const BoundInputs& in) {
    const double rho = in.certc.rho;
    const double n = static_cast<double>(in.n);
    const double norm_p = operator_norm(in.certc.p);
    const double norm_pinv = operator_norm(spd_inverse(in.certc.p));
    const double norm_wt = operator_norm(in.w_tilde);
    const double tr_wtp = (in.w_tilde * in.certc.p).trace();
    const Matrix wt_inv = spd_inverse(in.w_tilde);
    const double p_wtinv = weighted_matrix_norm(in.certc.p, wt_inv);
    const double p0_wtinv = weighted_matrix_norm(in.cert0.p0, wt_inv);
    const double p0_p = weighted_matrix_norm(in.cert0.p0, in.certc.p);
    const double chi_moment = n * n + 2.0 * n;

    Theorem3Result out;
    out.q_script = (6.0 * rho * tr_wtp * tr_wtp +
                    (1.0 - rho) * chi_moment * p_wtinv * p_wtinv) /
                   ((1.0 - rho) * (1.0 - rho * rho));
    out.fourth_moment_bound =
        8.0 * (out.q_script * p0_p * p0_p + chi_moment * p0_wtinv * p0_wtinv);
    const double one_minus_rho14 = 1.0 - std::pow(rho, 0.25);
    out.a0 = std::sqrt(8.0 * n * norm_wt * norm_p * norm_pinv) / one_minus_rho14;
    out.escape.front = 4.0 * n / (1.0 / std::sqrt(rho) - 1.0);
    out.escape.decay = one_minus_rho14 * one_minus_rho14 / (2.0 * n * norm_wt * norm_p * norm_pinv);
    out.valid = in.threshold >= out.a0 * in.k_diff;
    if (in.k_diff == 0.0) {
        // K1 == K0: the fallback indicator never triggers for M > 0.
        out.switch_prob_bound = 0.0;
    } else {
        out.switch_prob_bound =
            static_cast<double>(in.certc.dwell) * out.escape(in.threshold / in.k_diff);
    }
    return out;
}

double operator_norm_series(const Matrix& a, const Matrix& q, const Matrix& p, double rho) {
    // Terms T_s = ||Q^{1/2} A^s Q^{-1/2}||. The certificate gives
    // ||A^s||_P <= rho^{s/2}, so T_{s+j} <= T_s * kappa * rho^{j/2} with
    // kappa = ||Q^{1/2}P^{-1/2}|| ||P^{1/2}Q^{-1/2}||; the truncated tail is
    // added as a certified geometric bound.
    const Matrix sq = spd_sqrt(q);
    const Matrix sp = spd_sqrt(p);
    Eigen::LLT<Matrix> llt_q(sq);
    Eigen::LLT<Matrix> llt_p(sp);
    const double kappa = operator_norm(sq * llt_p.solve(Matrix::Identity(q.rows(), q.cols()))) *
                         operator_norm(sp * llt_q.solve(Matrix::Identity(q.rows(), q.cols())));
    const Matrix c = sq * llt_q.solve(a.transpose()).transpose();  // Q^{1/2} A Q^{-1/2}
    const double sqrt_rho = std::sqrt(rho);

    double sum = 1.0;  // s = 0 term: ||I|| = 1
    Matrix cpow = c;
    double last = 1.0;
    bool truncated = false;
    for (int s = 1; s <= 200000; ++s) {
        last = operator_norm(cpow);
        sum += last;
        if (last < 1e-12) {
            truncated = true;
            break;
        }
        cpow = cpow * c;
    }
    if (!truncated) throw NoConvergence("operator norm series did not reach the truncation level");
    sum += last * kappa * sqrt_rho / (1.0 - sqrt_rho);
    return sum;
}

Theorem4Result theorem4_gap_bound(const BoundInputs& in) {
    const double rho_a1 = spectral_radius(in.a1);
    if (rho_a1 >= 1.0 - kSpecTol)
        throw Unstable("theorem4_gap_bound: rho(A1) = " + std::to_string(rho_a1));

    Theorem4Result out;
    out.thm3 = theorem3_gaussian(in);
    const double rho = in.certc.rho;
    const double tr_wp = (in.w * in.certc.p).trace();
    const double q1_p = weighted_matrix_norm(in.q1, in.certc.p);
    const double q1_p0 = weighted_matrix_norm(in.q1, in.cert0.p0);
    const double p0_p = weighted_matrix_norm(in.cert0.p0, in.certc.p);
    const Matrix wt_inv = spd_inverse(in.w_tilde);
    const double p0_wtinv = weighted_matrix_norm(in.cert0.p0, wt_inv);
    const double n = static_cast<double>(in.n);

    out.c1 = std::sqrt(tr_wp * q1_p / (1.0 - rho));
    out.c2 = operator_norm(in.delta1) * q1_p0 * operator_norm_series(in.a1, in.q1, in.certc.p, rho);
    out.c3 = operator_norm(in.delta2) * operator_norm(spd_inverse(in.cert0.p0));
    out.c4 = std::pow(2.0, 0.75) *
             std::pow(out.thm3.q_script * p0_p * p0_p + (n * n + 2.0 * n) * p0_wtinv * p0_wtinv,
                      0.25);
    out.g = out.c4 * std::pow(out.thm3.switch_prob_bound, 0.25);
    out.gap_bound = 2.0 * out.c1 * out.c2 * out.g + (out.c2 * out.c2 + out.c3) * out.g * out.g;
    return out;
}

double corollary1_rate_constant(const BoundInputs& in) {
    if (in.k_diff == 0.0) throw DegenerateGains("corollary1_rate_constant needs K1 != K0");
    const double rho = in.certc.rho;
    const double one_minus_rho14 = 1.0 - std::pow(rho, 0.25);
    const double norm_p = operator_norm(in.certc.p);
    const double norm_pinv = operator_norm(spd_inverse(in.certc.p));
    const double norm_wt = operator_norm(in.w_tilde);
    return one_minus_rho14 * one_minus_rho14 /
           (16.0 * norm_wt * norm_p * norm_pinv * in.k_diff * in.k_diff);
}

double heavytail_mu4tilde(const StabilityCertificate& cert0, const Matrix& w, double mu4) {
    const double rho0 = cert0.rho0;
    const double np0 = operator_norm(cert0.p0);
    const double trwp0 = (w * cert0.p0).trace();
    return np0 * np0 * mu4 / (1.0 - rho0 * rho0) +
           2.0 * rho0 * trwp0 / ((1.0 - rho0 * rho0) * (1.0 - rho0));
}

Theorem5Result theorem5_heavytail(const BoundInputs& in) {
    const double rho = in.certc.rho;
    const double tr_wtp = (in.w_tilde * in.certc.p).trace();
    const double p_p0 = weighted_matrix_norm(in.certc.p, in.cert0.p0);
    const double p0_p = weighted_matrix_norm(in.cert0.p0, in.certc.p);

    Theorem5Result out;
    out.mu4_tilde = heavytail_mu4tilde(in.cert0, in.w, in.mu4);
    out.q_tilde = (6.0 * rho * tr_wtp * tr_wtp + (1.0 - rho) * p_p0 * p_p0 * out.mu4_tilde) /
                  ((1.0 - rho) * (1.0 - rho * rho));
    out.fourth_moment_bound = 8.0 * (out.q_tilde * p0_p * p0_p + out.mu4_tilde);
    const double one_minus_rho14 = 1.0 - std::pow(rho, 0.25);
    out.escape.scale =
        p_p0 * p_p0 * out.mu4_tilde / (std::pow(one_minus_rho14, 4) * (1.0 - rho));
    if (in.k_diff == 0.0) {
        out.switch_prob_bound_raw = 0.0;
    } else {
        out.switch_prob_bound_raw =
            static_cast<double>(in.certc.dwell) * out.escape(in.threshold / in.k_diff);
    }
    out.switch_prob_bound = std::min(1.0, out.switch_prob_bound_raw);
    return out;
}

Theorem6Result theorem6_gap_bound(const BoundInputs& in) {
    const double rho_a1 = spectral_radius(in.a1);
    if (rho_a1 >= 1.0 - kSpecTol)
        throw Unstable("theorem6_gap_bound: rho(A1) = " + std::to_string(rho_a1));

    Theorem6Result out;
    out.thm5 = theorem5_heavytail(in);
    const double rho = in.certc.rho;
    const double tr_wp = (in.w * in.certc.p).trace();
    const double q1_p = weighted_matrix_norm(in.q1, in.certc.p);
    const double q1_p0 = weighted_matrix_norm(in.q1, in.cert0.p0);
    const double p0_p = weighted_matrix_norm(in.cert0.p0, in.certc.p);

    const double c1 = std::sqrt(tr_wp * q1_p / (1.0 - rho));
    const double c2 =
        operator_norm(in.delta1) * q1_p0 * operator_norm_series(in.a1, in.q1, in.certc.p, rho);
    const double c3 = operator_norm(in.delta2) * operator_norm(spd_inverse(in.cert0.p0));

    // G~ consumes the raw escape value, not the probability clip.
    out.g_tilde = std::pow(2.0, 0.75) *
                  std::pow(out.thm5.q_tilde * p0_p * p0_p + out.thm5.mu4_tilde, 0.25) *
                  std::pow(out.thm5.switch_prob_bound_raw, 0.25);
    out.gap_bound = 2.0 * c1 * c2 * out.g_tilde + (c2 * c2 + c3) * out.g_tilde * out.g_tilde;
    return out;
}

}  // namespace swcert
