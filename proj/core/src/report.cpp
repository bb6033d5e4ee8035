#include "swcert/report.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

#include "swcert/errors.hpp"

namespace swcert {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename Fn>
void for_each_field(const BoundReport& r, Fn&& fn) {
    fn("threshold", fmt(r.threshold));
    fn("t", std::to_string(r.t));
    fn("rho0", fmt(r.rho0));
    fn("rho", fmt(r.rho));
    fn("k_diff", fmt(r.k_diff));
    fn("w_tilde_norm", fmt(r.w_tilde_norm));
    fn("k1_stable", std::string(r.k1_stable ? "1" : "0"));
    fn("valid", std::string(r.valid ? "1" : "0"));
    fn("lemma1_ev_bound", fmt(r.lemma1_ev_bound));
    fn("cost_cap", fmt(r.cost_cap));
    fn("a0", fmt(r.a0));
    fn("q_script", fmt(r.q_script));
    fn("fourth_moment_bound", fmt(r.fourth_moment_bound));
    fn("switch_prob_bound", fmt(r.switch_prob_bound));
    fn("c1", fmt(r.c1));
    fn("c2", fmt(r.c2));
    fn("c3", fmt(r.c3));
    fn("c4", fmt(r.c4));
    fn("g_script", fmt(r.g_script));
    fn("gap_bound", fmt(r.gap_bound));
    fn("c_rate", fmt(r.c_rate));
    fn("mu4", fmt(r.mu4));
    fn("mu4_tilde", fmt(r.mu4_tilde));
    fn("q_tilde", fmt(r.q_tilde));
    fn("ht_fourth_moment_bound", fmt(r.ht_fourth_moment_bound));
    fn("ht_switch_prob_bound", fmt(r.ht_switch_prob_bound));
    fn("ht_switch_prob_bound_raw", fmt(r.ht_switch_prob_bound_raw));
    fn("g_tilde", fmt(r.g_tilde));
    fn("ht_gap_bound", fmt(r.ht_gap_bound));
}

}  // namespace

BoundReport compute_bound_report(const LinearSystem& sys, const Matrix& k0, const Matrix& k1,
                                 const StabilityCertificate& cert0,
                                 const CommonLyapunovCertificate& certc, double threshold,
                                 double mu4) {
    const BoundInputs in = BoundInputs::make(sys, k0, k1, cert0, certc, threshold, mu4);

    BoundReport r;
    r.threshold = threshold;
    r.t = certc.dwell;
    r.rho0 = cert0.rho0;
    r.rho = in.certc.rho;
    r.k_diff = in.k_diff;
    r.w_tilde_norm = operator_norm(in.w_tilde);
    r.k1_stable = true;
    r.lemma1_ev_bound = lemma1_ev_bound(cert0, sys.b, sys.w, threshold);
    r.cost_cap = theorem1_cost_cap(cert0, sys.b, sys.r, sys.w, threshold);

    const Theorem4Result t4 = theorem4_gap_bound(in);
    r.valid = t4.thm3.valid;
    r.a0 = t4.thm3.a0;
    r.q_script = t4.thm3.q_script;
    r.fourth_moment_bound = t4.thm3.fourth_moment_bound;
    r.switch_prob_bound = t4.thm3.switch_prob_bound;
    r.c1 = t4.c1;
    r.c2 = t4.c2;
    r.c3 = t4.c3;
    r.c4 = t4.c4;
    r.g_script = t4.g;
    r.gap_bound = t4.gap_bound;
    r.c_rate = in.k_diff > 0.0 ? corollary1_rate_constant(in) : kNan;

    const Theorem6Result t6 = theorem6_gap_bound(in);
    r.mu4 = mu4;
    r.mu4_tilde = t6.thm5.mu4_tilde;
    r.q_tilde = t6.thm5.q_tilde;
    r.ht_fourth_moment_bound = t6.thm5.fourth_moment_bound;
    r.ht_switch_prob_bound = t6.thm5.switch_prob_bound;
    r.ht_switch_prob_bound_raw = t6.thm5.switch_prob_bound_raw;
    r.g_tilde = t6.g_tilde;
    r.ht_gap_bound = t6.gap_bound;
    return r;
}

BoundReport compute_bound_report(const LinearSystem& sys, const Matrix& k0, const Matrix& k1,
                                 double threshold, std::int64_t dwell_override, double mu4,
                                 double margin) {
    const StabilityCertificate cert0 = certify_fallback(sys.a, sys.b, k0, sys.q, sys.r, margin);
    const Matrix a1 = sys.a + sys.b * k1;
    if (spectral_radius(a1) >= 1.0 - kSpecTol) {
        // Only the K1-independent cost chain applies.
        BoundReport r;
        r.threshold = threshold;
        r.t = dwell_override > 0 ? dwell_override : 0;
        r.rho0 = cert0.rho0;
        r.k_diff = operator_norm(k1 - k0);
        r.w_tilde_norm = operator_norm(noise_gramian(sys.a + sys.b * k0, sys.w));
        r.k1_stable = false;
        r.valid = false;
        r.lemma1_ev_bound = lemma1_ev_bound(cert0, sys.b, sys.w, threshold);
        r.cost_cap = theorem1_cost_cap(cert0, sys.b, sys.r, sys.w, threshold);
        r.rho = kNan;
        r.a0 = kNan;
        r.q_script = kNan;
        r.fourth_moment_bound = kNan;
        r.switch_prob_bound = kNan;
        r.c1 = r.c2 = r.c3 = r.c4 = kNan;
        r.g_script = kNan;
        r.gap_bound = kNan;
        r.c_rate = kNan;
        r.mu4 = mu4;
        r.mu4_tilde = heavytail_mu4tilde(cert0, sys.w, mu4);
        r.q_tilde = kNan;
        r.ht_fourth_moment_bound = kNan;
        r.ht_switch_prob_bound = kNan;
        r.ht_switch_prob_bound_raw = kNan;
        r.g_tilde = kNan;
        r.ht_gap_bound = kNan;
        return r;
    }
    CommonLyapunovCertificate certc = find_common_lyapunov(a1, sys.a + sys.b * k0);
    if (dwell_override > 0 && dwell_override != certc.dwell) {
        CommonLyapunovCertificate forced = certc;
        forced.dwell = dwell_override;
        if (!check_common_lyapunov(forced, a1, sys.a + sys.b * k0).ok)
            throw ValidationError("requested dwell time " + std::to_string(dwell_override) +
                                  " does not satisfy the certificate (minimum " +
                                  std::to_string(certc.dwell) + ")");
        certc = forced;
    }
    return compute_bound_report(sys, k0, k1, cert0, certc, threshold, mu4);
}

void write_report_kv(std::ostream& os, const BoundReport& report) {
    for_each_field(report,
                   [&](const char* name, const std::string& value) { os << name << '=' << value << '\n'; });
}

std::string report_csv_header() {
    std::ostringstream os;
    bool first = true;
    BoundReport dummy;
    for_each_field(dummy, [&](const char* name, const std::string&) {
        if (!first) os << ',';
        os << name;
        first = false;
    });
    return os.str();
}

std::string report_csv_row(const BoundReport& report) {
    std::ostringstream os;
    bool first = true;
    for_each_field(report, [&](const char*, const std::string& value) {
        if (!first) os << ',';
        os << value;
        first = false;
    });
    return os.str();
}

}  // namespace swcert
