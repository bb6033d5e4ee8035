#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swcert/rng.hpp"

namespace swcert {

enum class NoiseKind {
    gaussian,
    scaled_student_t,  // componentwise t(dof) standardized to unit variance
    laplace_product,   // componentwise standardized Laplace
    bounded_mixture,   // componentwise symmetric two-point mixture, |z| <= 2
};

std::string noise_kind_name(NoiseKind kind);
NoiseKind noise_kind_from_name(const std::string& name);

/// Zero-mean noise with covariance W: a vector of independent standardized
/// components is shaped by the symmetric square root of W. The fourth moment
/// mu4 = E||w||^4 follows in closed form from the componentwise kurtosis.
class NoiseModel {
public:
    static NoiseModel make(NoiseKind kind, const Eigen::MatrixXd& w, int dof = 0);

    NoiseKind kind() const { return kind_; }
    int dof() const { return dof_; }
    const Eigen::MatrixXd& covariance() const { return w_; }
    const Eigen::MatrixXd& shaping() const { return shaping_; }
    Eigen::Index dimension() const { return w_.rows(); }

    /// E||w||^4: (tr W)^2 + 2||W||_F^2 + (kurt - 3) * sum_i W_ii^2, exact for
    /// independent standardized components shaped by the symmetric root.
    double mu4() const { return mu4_; }

    /// Fourth moment of one standardized component.
    double component_kurtosis() const { return kurtosis_; }

    /// Draws the noise vector for a given (master seed, trajectory, step) key.
    Eigen::VectorXd sample(std::uint64_t master_seed, std::uint64_t trajectory,
                           std::uint64_t step) const;

private:
    NoiseKind kind_ = NoiseKind::gaussian;
    int dof_ = 0;
    double kurtosis_ = 3.0;
    double mu4_ = 0.0;
    Eigen::MatrixXd w_;
    Eigen::MatrixXd shaping_;
};

/// i.i.d. draws w_0..w_{count-1}, deterministic given the seed.
std::vector<Eigen::VectorXd> sample_noise(const NoiseModel& model, std::int64_t count,
                                          std::uint64_t seed);

}  // namespace swcert
