#include "swcert/surrogate.hpp"

namespace swcert {

namespace {
#include "surrogate_data.inc"
}  // namespace

LinearSystem builtin_surrogate() {
    constexpr int n = 8;
    constexpr int m = 4;
    LinearSystem sys;
    sys.a = Eigen::Map<const Eigen::Matrix<double, n, n, Eigen::RowMajor>>(kSurrogateA);
    sys.b = Eigen::Map<const Eigen::Matrix<double, n, m, Eigen::RowMajor>>(kSurrogateB);
    sys.w = Eigen::MatrixXd::Identity(n, n);
    sys.q = Eigen::MatrixXd::Identity(n, n);
    sys.r = Eigen::MatrixXd::Identity(m, m);
    return sys;
}

double surrogate_destabilizing_alpha() { return kSurrogateAlpha; }

}  // namespace swcert
