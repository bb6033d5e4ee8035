#include "swcert/noise.hpp"

#include <cmath>

#include "swcert/errors.hpp"
#include "swcert/linalg.hpp"

namespace swcert {

std::string noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::scaled_student_t: return "scaled_student_t";
        case NoiseKind::laplace_product: return "laplace_product";
        case NoiseKind::bounded_mixture: return "bounded_mixture";
    }
    return "unknown";
}

NoiseKind noise_kind_from_name(const std::string& name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "scaled_student_t") return NoiseKind::scaled_student_t;
    if (name == "laplace_product") return NoiseKind::laplace_product;
    if (name == "bounded_mixture") return NoiseKind::bounded_mixture;
    throw ValidationError("unknown noise kind '" + name + "'");
}

namespace {

// Two-point symmetric mixture: |z| = 0.5 with probability 0.8, |z| = 2.0 with
// probability 0.2, random sign. Unit variance, fourth moment 3.25, |z| <= 2.
constexpr double kMixLow = 0.5;
constexpr double kMixHigh = 2.0;
constexpr double kMixHighProb = 0.2;

double component_kurtosis_for(NoiseKind kind, int dof) {
    switch (kind) {
        case NoiseKind::gaussian:
            return 3.0;
        case NoiseKind::scaled_student_t:
            // E z^4 of t(dof) scaled to unit variance: 3 (dof - 2) / (dof - 4).
            return 3.0 * (dof - 2.0) / (dof - 4.0);
        case NoiseKind::laplace_product:
            return 6.0;
        case NoiseKind::bounded_mixture:
            return (1.0 - kMixHighProb) * std::pow(kMixLow, 4) +
                   kMixHighProb * std::pow(kMixHigh, 4);
    }
    return 3.0;
}

double standardized_component(NoiseKind kind, int dof, NoiseStream& stream) {
    switch (kind) {
        case NoiseKind::gaussian:
            return stream.next_normal();
        case NoiseKind::scaled_student_t: {
            const double z = stream.next_normal();
            double chi2 = 0.0;
            for (int i = 0; i < dof; ++i) {
                const double g = stream.next_normal();
                chi2 += g * g;
            }
            const double t = z / std::sqrt(chi2 / dof);
            return t * std::sqrt((dof - 2.0) / dof);
        }
        case NoiseKind::laplace_product: {
            const double u = stream.next_uniform() - 0.5;
            const double mag = -std::log(1.0 - 2.0 * std::abs(u));
            return (u < 0 ? -mag : mag) / std::sqrt(2.0);
        }
        case NoiseKind::bounded_mixture: {
            const double u = stream.next_uniform();
            const double sign = stream.next_uniform() <= 0.5 ? -1.0 : 1.0;
            return sign * (u <= kMixHighProb ? kMixHigh : kMixLow);
        }
    }
    return 0.0;
}

}  // namespace

NoiseModel NoiseModel::make(NoiseKind kind, const Eigen::MatrixXd& w, int dof) {
    if (kind == NoiseKind::scaled_student_t && dof < 5)
        throw InvalidDof("scaled_student_t needs dof >= 5, got " + std::to_string(dof));
    NoiseModel m;
    m.kind_ = kind;
    m.dof_ = dof;
    m.w_ = symmetrized(w);
    require_spd(m.w_, "noise covariance");
    m.shaping_ = spd_sqrt(m.w_);
    m.kurtosis_ = component_kurtosis_for(kind, dof);
    const double tr = m.w_.trace();
    const double frob2 = m.w_.squaredNorm();
    const double diag2 = m.w_.diagonal().array().square().sum();
    m.mu4_ = tr * tr + 2.0 * frob2 + (m.kurtosis_ - 3.0) * diag2;
    return m;
}

Eigen::VectorXd NoiseModel::sample(std::uint64_t master_seed, std::uint64_t trajectory,
                                   std::uint64_t step) const {
    NoiseStream stream(master_seed, trajectory, step);
    Eigen::VectorXd z(dimension());
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z(i) = standardized_component(kind_, dof_, stream);
    return shaping_ * z;
}

std::vector<Eigen::VectorXd> sample_noise(const NoiseModel& model, std::int64_t count,
                                          std::uint64_t seed) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) out.push_back(model.sample(seed, 0, static_cast<std::uint64_t>(k)));
    return out;
}

}  // namespace swcert
