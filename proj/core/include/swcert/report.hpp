#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "swcert/bounds.hpp"
#include "swcert/system.hpp"

namespace swcert {

/// Flat record of every certified constant and headline bound for one
/// (system, gain pair, threshold, dwell) instance. The field names and their
/// order are a stable output interface (key=value blocks and CSV rows).
struct BoundReport {
    double threshold = 0.0;  // M
    std::int64_t t = 0;      // dwell time
    double rho0 = 0.0;
    double rho = 0.0;
    double k_diff = 0.0;
    double w_tilde_norm = 0.0;
    bool k1_stable = false;  // the gap/moment chain needs a Schur-stable A1
    bool valid = false;      // threshold >= a0 * k_diff

    // Gain-independent cost chain
    double lemma1_ev_bound = 0.0;
    double cost_cap = 0.0;

    // Gaussian chain
    double a0 = 0.0;
    double q_script = 0.0;
    double fourth_moment_bound = 0.0;
    double switch_prob_bound = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double g_script = 0.0;
    double gap_bound = 0.0;
    double c_rate = 0.0;

    // Heavy-tail chain
    double mu4 = 0.0;
    double mu4_tilde = 0.0;
    double q_tilde = 0.0;
    double ht_fourth_moment_bound = 0.0;
    double ht_switch_prob_bound = 0.0;
    double ht_switch_prob_bound_raw = 0.0;
    double g_tilde = 0.0;
    double ht_gap_bound = 0.0;
};

/// Evaluates every calculator for one instance. When A1 = A + B K1 is not
/// Schur-stable, only the unconditional cost chain is populated and the rest
/// is NaN with k1_stable = false.
BoundReport compute_bound_report(const LinearSystem& sys, const Matrix& k0, const Matrix& k1,
                                 double threshold, std::int64_t dwell_override, double mu4,
                                 double margin = 0.01);

/// Same, but reusing prebuilt certificates (dwell taken from the certificate).
BoundReport compute_bound_report(const LinearSystem& sys, const Matrix& k0, const Matrix& k1,
                                 const StabilityCertificate& cert0,
                                 const CommonLyapunovCertificate& certc, double threshold,
                                 double mu4);

/// key=value lines, one per field, in the stable order.
void write_report_kv(std::ostream& os, const BoundReport& report);

std::string report_csv_header();
std::string report_csv_row(const BoundReport& report);

}  // namespace swcert
