#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace swcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Quadratic Lyapunov certificate for the fallback loop: P0 > 0 together with
/// a contraction factor rho0 in (0,1) such that A0' P0 A0 <= rho0 * P0.
struct StabilityCertificate {
    Matrix p0;
    double rho0 = 0.0;
};

/// Common quadratic Lyapunov certificate: a single P > 0 and rho in (0,1)
/// that contract both the primary closed loop A1 and the t-step fallback map
/// A0^t, i.e. A1' P A1 < rho P and (A0^t)' P A0^t < rho P.
struct CommonLyapunovCertificate {
    Matrix p;
    double rho = 0.0;
    std::int64_t dwell = 1;  // t
};

}  // namespace swcert
