#pragma once

#include <cstdint>
#include <vector>

#include "swcert/errors.hpp"

namespace swcert {

enum class TailSequenceKind {
    iid_gaussian,     // X_i i.i.d. standard normal
    markov_gaussian,  // stationary AR(1) with coefficient phi, N(0,1) marginals
};

/// Scalar sequence with a known sub-Gaussian envelope
/// P(X_i >= a) <= c1 * exp(-c2 * a^2) for every i and a > 0.
struct TailSequenceSpec {
    TailSequenceKind kind = TailSequenceKind::iid_gaussian;
    double phi = 0.7;  // AR(1) coefficient; only used by markov_gaussian

    // N(0,1) marginals in both cases, so the Chernoff envelope applies.
    double c1() const { return 1.0; }
    double c2() const { return 0.5; }
};

struct TailCurve {
    std::vector<double> a_grid;
    std::vector<double> p_hat;  // empirical P(S_k >= a)
    std::int64_t n_samples = 0;
};

/// Empirical tail of the exponentially weighted sum S_k = sum_i varrho^{k-i} X_i
/// over n_samples independent realizations. Counting is exact integer
/// arithmetic, so results are independent of the thread count.
TailCurve exp_weighted_sum_tail_experiment(double varrho, const TailSequenceSpec& spec,
                                           int k, std::int64_t n_samples,
                                           std::vector<double> a_grid, std::uint64_t seed,
                                           int threads = 1);

}  // namespace swcert
