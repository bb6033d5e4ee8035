#include "swcert/simulate.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace swcert {

namespace {

bool state_in_range(const Eigen::VectorXd& x) {
    return x.allFinite() && x.cwiseAbs().maxCoeff() <= kExplosionLimit;
}

// Shared stepping core. on_step(k, x_k, u_k, fallback, cost_k) runs for every
// completed step; returns the explosion index or -1.
template <typename OnStep>
std::int64_t run_rollout(const LinearSystem& sys, const Controller& ctrl,
                         const NoiseModel& noise, std::int64_t horizon, std::uint64_t seed,
                         std::uint64_t index, OnStep&& on_step) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.state_dim());
    std::int64_t xi = 0;
    for (std::int64_t k = 0; k < horizon; ++k) {
        Eigen::VectorXd u;
        bool fallback = false;
        if (ctrl.is_switching()) {
            SwitchDecision d = switch_step(x, xi, ctrl.params());
            u = std::move(d.u);
            xi = d.counter_next;
            fallback = d.fallback_active;
        } else {
            u = ctrl.gain() * x;
        }
        const double cost = x.dot(sys.q * x) + u.dot(sys.r * u);
        const Eigen::VectorXd w = noise.sample(seed, index, static_cast<std::uint64_t>(k));
        Eigen::VectorXd next = sys.a * x + sys.b * u + w;
        on_step(k, x, u, fallback, cost, next);
        if (!state_in_range(next)) return k + 1;
        x = std::move(next);
    }
    return -1;
}

}  // namespace

Trajectory rollout(const LinearSystem& sys, const Controller& ctrl, const NoiseModel& noise,
                   std::int64_t horizon, std::uint64_t seed, std::uint64_t index) {
    sys.validate();
    if (horizon < 1) throw ValidationError("rollout horizon must be >= 1");
    if (noise.dimension() != sys.state_dim())
        throw DimensionMismatch("noise dimension does not match the state dimension");
    Trajectory traj;
    traj.seed = seed;
    traj.index = index;
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    traj.states.push_back(Eigen::VectorXd::Zero(sys.state_dim()));
    const std::int64_t exploded_at = run_rollout(
        sys, ctrl, noise, horizon, seed, index,
        [&](std::int64_t, const Eigen::VectorXd&, const Eigen::VectorXd& u, bool fallback,
            double cost, const Eigen::VectorXd& next) {
            traj.inputs.push_back(u);
            traj.fallback_flags.push_back(fallback ? 1 : 0);
            traj.stage_costs.push_back(cost);
            traj.states.push_back(next);
        });
    if (exploded_at >= 0) {
        traj.exploded = true;
        traj.explosion_step = exploded_at;
    }
    return traj;
}

double empirical_cost(const Trajectory& traj) {
    if (traj.stage_costs.empty()) return 0.0;
    return pairwise_sum(traj.stage_costs) / static_cast<double>(traj.stage_costs.size());
}

double empirical_switch_frequency(std::span<const Trajectory> trajs) {
    if (trajs.empty()) throw ValidationError("empirical_switch_frequency needs trajectories");
    std::int64_t hits = 0;
    std::int64_t total = 0;
    for (const Trajectory& t : trajs) {
        for (const std::uint8_t f : t.fallback_flags) hits += f;
        total += t.steps();
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double empirical_weighted_fourth_moment(std::span<const Trajectory> trajs,
                                        const Eigen::MatrixXd& p0, double start_fraction) {
    std::vector<double> samples;
    for (const Trajectory& t : trajs) {
        const std::int64_t start =
            static_cast<std::int64_t>(std::floor(start_fraction * static_cast<double>(t.steps())));
        for (std::int64_t k = start; k < t.steps(); ++k) {
            const double v = t.states[static_cast<std::size_t>(k)].dot(
                p0 * t.states[static_cast<std::size_t>(k)]);
            samples.push_back(v * v);
        }
    }
    if (samples.empty()) return 0.0;
    return pairwise_sum(samples) / static_cast<double>(samples.size());
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 32) {
        double s = 0.0;
        for (const double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::pair<double, double> mean_stderr(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return {0.0, 0.0};
    const double mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                body(i);
            }
        });
    }
    for (std::thread& th : pool) th.join();
}

namespace {

struct TrajAccumulator {
    double cost_sum = 0.0;
    std::int64_t steps = 0;
    std::int64_t fallback = 0;
    double fourth_sum = 0.0;
    std::int64_t fourth_count = 0;
    bool exploded = false;
};

}  // namespace

McSummary monte_carlo(const LinearSystem& sys, const Controller& ctrl, const NoiseModel& noise,
                      const McOptions& opts) {
    sys.validate();
    if (opts.n_traj < 2) throw ValidationError("monte_carlo needs n_traj >= 2");
    if (opts.horizon < 1) throw ValidationError("monte_carlo needs horizon >= 1");

    const std::int64_t fourth_start = static_cast<std::int64_t>(
        std::floor(opts.tail_fraction * static_cast<double>(opts.horizon)));
    std::vector<TrajAccumulator> acc(static_cast<std::size_t>(opts.n_traj));

    parallel_for(opts.n_traj, opts.threads, [&](std::int64_t i) {
        TrajAccumulator& a = acc[static_cast<std::size_t>(i)];
        const std::int64_t exploded_at = run_rollout(
            sys, ctrl, noise, opts.horizon, opts.master_seed, static_cast<std::uint64_t>(i),
            [&](std::int64_t k, const Eigen::VectorXd& x, const Eigen::VectorXd&, bool fallback,
                double cost, const Eigen::VectorXd&) {
                a.cost_sum += cost;
                a.steps += 1;
                a.fallback += fallback ? 1 : 0;
                if (opts.fourth_weight && k >= fourth_start) {
                    const double v = x.dot(*opts.fourth_weight * x);
                    a.fourth_sum += v * v;
                    a.fourth_count += 1;
                }
            });
        a.exploded = exploded_at >= 0;
    });

    McSummary out;
    out.n_traj = opts.n_traj;
    out.per_traj_cost.assign(static_cast<std::size_t>(opts.n_traj),
                             std::numeric_limits<double>::quiet_NaN());
    out.per_traj_switch_freq.assign(static_cast<std::size_t>(opts.n_traj),
                                    std::numeric_limits<double>::quiet_NaN());
    std::vector<double> costs, freqs, fourths;
    costs.reserve(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const TrajAccumulator& a = acc[i];
        if (a.exploded) {
            out.explosions += 1;
            continue;
        }
        const double cost = a.cost_sum / static_cast<double>(a.steps);
        const double freq = static_cast<double>(a.fallback) / static_cast<double>(a.steps);
        out.per_traj_cost[i] = cost;
        out.per_traj_switch_freq[i] = freq;
        costs.push_back(cost);
        freqs.push_back(freq);
        if (a.fourth_count > 0)
            fourths.push_back(a.fourth_sum / static_cast<double>(a.fourth_count));
    }
    std::tie(out.mean_cost, out.stderr_cost) = mean_stderr(costs);
    std::tie(out.switch_frequency, out.switch_frequency_stderr) = mean_stderr(freqs);
    if (!fourths.empty())
        std::tie(out.fourth_moment, out.fourth_moment_stderr) = mean_stderr(fourths);
    return out;
}

std::pair<double, double> monte_carlo_cost(const LinearSystem& sys, const Controller& ctrl,
                                           const NoiseModel& noise, std::int64_t horizon,
                                           std::int64_t n_traj, std::uint64_t master_seed,
                                           int threads) {
    McOptions opts;
    opts.horizon = horizon;
    opts.n_traj = n_traj;
    opts.master_seed = master_seed;
    opts.threads = threads;
    const McSummary s = monte_carlo(sys, ctrl, noise, opts);
    return {s.mean_cost, s.stderr_cost};
}

TransformedSubsequence transformed_subsequence(const Trajectory& traj, std::int64_t t) {
    if (t < 1) throw ValidationError("transformed_subsequence needs t >= 1");
    TransformedSubsequence out;
    const std::int64_t steps = traj.steps();
    std::int64_t i = 0;
    while (i < steps) {
        const bool fb = traj.fallback_flags[static_cast<std::size_t>(i)] != 0;
        if (fb) {
            // A trigger opens a block of exactly t fallback steps.
            for (std::int64_t j = i; j < std::min(i + t, steps); ++j) {
                if (!traj.fallback_flags[static_cast<std::size_t>(j)])
                    throw InconsistentDwell("fallback run shorter than the dwell time at step " +
                                            std::to_string(j));
            }
        }
        out.indices.push_back(i);
        out.labels.push_back(fb ? SubsequenceLabel::fallback_block : SubsequenceLabel::primary);
        i += fb ? t : 1;
    }
    return out;
}

namespace {

void write_double(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

void write_row(std::ostream& os, const Trajectory& traj, std::int64_t k) {
    os << k;
    const auto& x = traj.states[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        os << ',';
        write_double(os, x(i));
    }
    const auto& u = traj.inputs[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        os << ',';
        write_double(os, u(i));
    }
    os << ',' << static_cast<int>(traj.fallback_flags[static_cast<std::size_t>(k)]) << ',';
    write_double(os, traj.stage_costs[static_cast<std::size_t>(k)]);
    os << '\n';
}

void write_header(std::ostream& os, const Trajectory& traj, bool with_id) {
    if (with_id) os << "trajectory,";
    os << 'k';
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    const Eigen::Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
    for (Eigen::Index i = 1; i <= m; ++i) os << ",u_" << i;
    os << ",fallback_flag,stage_cost\n";
}

}  // namespace

void export_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    write_header(os, traj, false);
    for (std::int64_t k = 0; k < traj.steps(); ++k) write_row(os, traj, k);
}

void export_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajs) {
    if (trajs.empty()) return;
    write_header(os, trajs.front(), true);
    for (const Trajectory& traj : trajs) {
        for (std::int64_t k = 0; k < traj.steps(); ++k) {
            os << traj.index << ',';
            write_row(os, traj, k);
        }
    }
}

}  // namespace swcert
