#include "swcert/tail_experiment.hpp"

#include <algorithm>
#include <cmath>

#include "swcert/rng.hpp"
#include "swcert/simulate.hpp"

namespace swcert {

TailCurve exp_weighted_sum_tail_experiment(double varrho, const TailSequenceSpec& spec, int k,
                                           std::int64_t n_samples, std::vector<double> a_grid,
                                           std::uint64_t seed, int threads) {
    if (!(varrho > 0.0 && varrho < 1.0))
        throw ValidationError("exp_weighted_sum_tail_experiment needs 0 < varrho < 1");
    if (k < 0 || n_samples < 1)
        throw ValidationError("exp_weighted_sum_tail_experiment needs k >= 0, n_samples >= 1");
    if (spec.kind == TailSequenceKind::markov_gaussian && !(std::abs(spec.phi) < 1.0))
        throw ValidationError("markov_gaussian needs |phi| < 1");

    std::vector<double> sums(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, threads, [&](std::int64_t j) {
        NoiseStream stream(seed, static_cast<std::uint64_t>(j), 0);
        double s = 0.0;
        double x = stream.next_normal();  // X_0 (stationary start for AR(1))
        for (int i = 0;; ++i) {
            s = (i == 0) ? x : varrho * s + x;
            if (i == k) break;
            if (spec.kind == TailSequenceKind::markov_gaussian)
                x = spec.phi * x + std::sqrt(1.0 - spec.phi * spec.phi) * stream.next_normal();
            else
                x = stream.next_normal();
        }
        sums[static_cast<std::size_t>(j)] = s;
    });

    TailCurve curve;
    curve.a_grid = std::move(a_grid);
    curve.n_samples = n_samples;
    curve.p_hat.reserve(curve.a_grid.size());
    for (const double a : curve.a_grid) {
        std::int64_t hits = 0;
        for (const double s : sums) hits += (s >= a) ? 1 : 0;
        curve.p_hat.push_back(static_cast<double>(hits) / static_cast<double>(n_samples));
    }
    return curve;
}

}  // namespace swcert
