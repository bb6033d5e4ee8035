#pragma once

#include <Eigen/Dense>

#include "swcert/errors.hpp"

namespace swcert {

/// Discrete-time plant x_{k+1} = A x_k + B u_k + w_k with quadratic stage
/// cost x'Qx + u'Ru and noise covariance W.
struct LinearSystem {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    Eigen::MatrixXd w;
    Eigen::MatrixXd q;
    Eigen::MatrixXd r;

    Eigen::Index state_dim() const { return a.rows(); }
    Eigen::Index input_dim() const { return b.cols(); }

    void validate() const {
        const auto n = a.rows();
        const auto m = b.cols();
        if (a.cols() != n) throw DimensionMismatch("A must be square");
        if (b.rows() != n) throw DimensionMismatch("B must have as many rows as A");
        if (w.rows() != n || w.cols() != n) throw DimensionMismatch("W must be n x n");
        if (q.rows() != n || q.cols() != n) throw DimensionMismatch("Q must be n x n");
        if (r.rows() != m || r.cols() != m) throw DimensionMismatch("R must be m x m");
        if (!a.allFinite() || !b.allFinite() || !w.allFinite() || !q.allFinite() || !r.allFinite())
            throw NonFinite("system matrices must be finite");
    }
};

}  // namespace swcert
