#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swcert/noise.hpp"
#include "swcert/policy.hpp"
#include "swcert/system.hpp"

namespace swcert {

/// States with any entry beyond this magnitude truncate the rollout and mark
/// the trajectory as exploded (runaway instability in unswitched baselines).
inline constexpr double kExplosionLimit = 1e15;

/// Closed-loop controller: either the switched policy or plain u = K x.
class Controller {
public:
    static Controller switching(ControllerParams params) {
        params.validate();
        Controller c;
        c.switching_ = true;
        c.params_ = std::move(params);
        return c;
    }
    static Controller linear(Eigen::MatrixXd k) {
        Controller c;
        c.switching_ = false;
        c.params_.k0 = k;
        c.params_.k1 = std::move(k);
        return c;
    }

    bool is_switching() const { return switching_; }
    const ControllerParams& params() const { return params_; }
    const Eigen::MatrixXd& gain() const { return params_.k1; }

private:
    bool switching_ = false;
    ControllerParams params_;
};

struct Trajectory {
    std::vector<Eigen::VectorXd> states;   // length steps() + 1
    std::vector<Eigen::VectorXd> inputs;   // length steps()
    std::vector<std::uint8_t> fallback_flags;
    std::vector<double> stage_costs;       // x'Qx + u'Ru per step
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    bool exploded = false;
    std::int64_t explosion_step = -1;      // first state index that went out of range

    std::int64_t steps() const { return static_cast<std::int64_t>(inputs.size()); }
};

/// Seeded rollout of the closed loop from x_0 = 0. The same (seed, index,
/// config) always yields a bit-identical trajectory. Explosions truncate the
/// trajectory instead of raising.
Trajectory rollout(const LinearSystem& sys, const Controller& ctrl, const NoiseModel& noise,
                   std::int64_t horizon, std::uint64_t seed, std::uint64_t index = 0);

/// Time-average stage cost of a trajectory (over its stored steps).
double empirical_cost(const Trajectory& traj);

/// Fraction of (trajectory, step) pairs with the fallback flag set.
double empirical_switch_frequency(std::span<const Trajectory> trajs);

/// Average of ||x_k||_{P0}^4 over steps k >= start_fraction * steps of every
/// trajectory (the tail approximates stationarity).
double empirical_weighted_fourth_moment(std::span<const Trajectory> trajs,
                                        const Eigen::MatrixXd& p0,
                                        double start_fraction = 0.5);

struct McOptions {
    std::int64_t horizon = 1000;
    std::int64_t n_traj = 1000;
    std::uint64_t master_seed = 0;
    int threads = 1;
    double tail_fraction = 0.5;                 // fourth-moment sampling start
    std::optional<Eigen::MatrixXd> fourth_weight;  // enables fourth-moment stats
};

/// Aggregates over independently seeded rollouts. Per-trajectory results are
/// reduced with pairwise summation in index order, so the reported values do
/// not depend on the number of worker threads.
struct McSummary {
    double mean_cost = 0.0;
    double stderr_cost = 0.0;
    std::int64_t n_traj = 0;
    std::int64_t explosions = 0;
    double switch_frequency = 0.0;
    double switch_frequency_stderr = 0.0;
    double fourth_moment = 0.0;
    double fourth_moment_stderr = 0.0;
    std::vector<double> per_traj_cost;          // NaN where exploded
    std::vector<double> per_traj_switch_freq;   // NaN where exploded
};

McSummary monte_carlo(const LinearSystem& sys, const Controller& ctrl, const NoiseModel& noise,
                      const McOptions& opts);

/// Mean and standard error of the per-trajectory time-average cost.
std::pair<double, double> monte_carlo_cost(const LinearSystem& sys, const Controller& ctrl,
                                           const NoiseModel& noise, std::int64_t horizon,
                                           std::int64_t n_traj, std::uint64_t master_seed,
                                           int threads = 1);

enum class SubsequenceLabel : std::uint8_t { primary = 0, fallback_block = 1 };

/// Diagnostic extraction of the transformed subsequence: indices advance by 1
/// after a primary step and by the dwell time t after a trigger, with labels
/// recording which map applied. Throws InconsistentDwell when the fallback
/// flags contradict the t-block structure.
struct TransformedSubsequence {
    std::vector<std::int64_t> indices;
    std::vector<SubsequenceLabel> labels;
};

TransformedSubsequence transformed_subsequence(const Trajectory& traj, std::int64_t t);

/// Pairwise (tree) summation; the documented reduction policy for estimators.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error of the mean of a sample (pairwise reductions).
std::pair<double, double> mean_stderr(std::span<const double> values);

/// Deterministic-partition parallel loop: body(i) for i in [0, n). The body
/// must only write to per-index slots.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& body);

/// Writes one trajectory as CSV with the header
/// k,x_1..x_n,u_1..u_m,fallback_flag,stage_cost.
void export_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Long-format CSV for several trajectories with a leading trajectory column.
void export_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajs);

}  // namespace swcert
