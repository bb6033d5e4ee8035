#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Dense>

#include "swcert/errors.hpp"

namespace swcert {

/// Parameters of the switched controller: primary gain K1, fallback gain K0,
/// trigger threshold M on ||(K1 - K0) x||, and dwell time t (number of
/// consecutive fallback steps held after a trigger).
struct ControllerParams {
    Eigen::MatrixXd k0;
    Eigen::MatrixXd k1;
    double threshold = 1.0;
    std::int64_t dwell = 1;

    /// Threshold value that disables switching entirely (pure K1 feedback).
    static constexpr double unbounded_threshold() {
        return std::numeric_limits<double>::infinity();
    }

    void validate() const {
        if (k0.rows() != k1.rows() || k0.cols() != k1.cols())
            throw DimensionMismatch("controller gains must have the same shape");
        if (!(threshold >= 0.0)) throw ValidationError("threshold must be nonnegative");
        if (dwell < 1) throw ValidationError("dwell time must be a positive integer");
    }
};

struct SwitchDecision {
    Eigen::VectorXd u;
    std::int64_t counter_next = 0;
    bool fallback_active = false;  // the K0 branch was taken this step
};

/// One step of the switching logic. With counter xi > 0 the fallback gain is
/// held; with xi == 0 the trigger test ||(K1 - K0) x|| >= M (ties trigger)
/// either arms the counter to t and applies K0, or applies K1. The counter
/// then decrements to max(xi - 1, 0), so a trigger yields exactly t
/// consecutive fallback applications.
inline SwitchDecision switch_step(const Eigen::VectorXd& x, std::int64_t xi,
                                  const ControllerParams& params) {
    if (params.k0.cols() != x.size()) throw DimensionMismatch("switch_step state size");
    if (xi < 0 || xi > params.dwell) throw ValidationError("counter out of range");
    SwitchDecision d;
    if (xi > 0) {
        d.u = params.k0 * x;
        d.fallback_active = true;
    } else if (((params.k1 - params.k0) * x).norm() >= params.threshold) {
        xi = params.dwell;
        d.u = params.k0 * x;
        d.fallback_active = true;
    } else {
        d.u = params.k1 * x;
        d.fallback_active = false;
    }
    d.counter_next = xi > 0 ? xi - 1 : 0;
    return d;
}

/// Pure linear feedback u = K x.
inline Eigen::VectorXd linear_step(const Eigen::VectorXd& x, const Eigen::MatrixXd& k) {
    if (k.cols() != x.size()) throw DimensionMismatch("linear_step state size");
    return k * x;
}

}  // namespace swcert
