#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "gittins/arm.hpp"
#include "gittins/deep/adam.hpp"
#include "gittins/deep/mlp.hpp"
#include "gittins/deep/replay.hpp"
#include "gittins/metrics.hpp"
#include "gittins/oracle.hpp"
#include "gittins/schedule.hpp"
#include "gittins/select.hpp"
#include "gittins/train.hpp"

namespace gittins::deep {

struct DgnConfig {
    std::size_t batch = 32;
    double tau = 1e-3;                 ///< weight on the OLD target parameters
    std::uint64_t sync_period = 10;    ///< learn + soft-update every this many steps
    double step_size = 5e-3;
    LearningRateSchedule index_rate = constant_schedule(1.0, 1.0, 5); ///< only beta() is used
    Encoding encoding = Encoding::one_hot;
    std::size_t replay_capacity = 10000;
    std::vector<std::size_t> hidden = {64, 128, 64};

    void validate() const
    {
        detail::require_config(batch >= 1, "dgn: batch must be >= 1");
        detail::require_config(sync_period >= 1, "dgn: sync_period must be >= 1");
        detail::require_config(tau >= 0.0 && tau <= 1.0, "dgn: tau must lie in [0,1]");
        detail::require_config(step_size > 0.0, "dgn: step_size must be positive");
        detail::require_config(replay_capacity >= 1, "dgn: replay_capacity must be >= 1");
        for (std::size_t h : hidden) detail::require_config(h >= 1, "dgn: hidden widths must be >= 1");
        index_rate.validate();
    }

    [[nodiscard]] std::vector<std::size_t> dims(std::size_t input_dim) const
    {
        std::vector<std::size_t> d{input_dim};
        d.insert(d.end(), hidden.begin(), hidden.end());
        d.push_back(1);
        return d;
    }
};

/// r + gamma * max(Q_target^x(s', 1), M(x))
inline double dgn_target(const ExperienceTuple& e, std::size_t x, const Mlp& target, const StateEncoder& encoder,
                         std::span<const double> m, double gamma)
{
    detail::require(x < m.size(), "dgn_target: reference state out of range");
    if (gamma == 0.0) return e.reward;
    return e.reward + gamma * std::max(mlp_forward(target, encoder, e.next_state, x), m[x]);
}

/// target <- tau * target + (1 - tau) * online
inline void soft_update(Mlp& target, const Mlp& online, double tau)
{
    detail::require(tau >= 0.0 && tau <= 1.0, "soft_update: tau must lie in [0,1]");
    detail::require(target.dims() == online.dims(), "soft_update: architecture mismatch");
    auto t = target.values();
    const auto o = online.values();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * t[i] + (1.0 - tau) * o[i];
}

/// M(x) <- M(x) + beta * (Q_online^x(x, 1) - M(x)) for every x.
inline void dgn_m_update(std::span<double> m, const Mlp& online, const StateEncoder& encoder, double beta)
{
    detail::require(beta >= 0.0 && beta <= 1.0, "dgn_m_update: beta must lie in [0,1]");
    detail::require(m.size() == encoder.num_states(), "dgn_m_update: one estimate per state expected");
    if (beta == 0.0) return;
    const std::size_t n = m.size();
    Eigen::MatrixXd inputs(static_cast<Eigen::Index>(encoder.input_dim()), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) encoder.encode(x, x, inputs.col(static_cast<Eigen::Index>(x)));
    const Eigen::VectorXd q = online.forward(inputs);
    for (std::size_t x = 0; x < n; ++x) m[x] += beta * (q(static_cast<Eigen::Index>(x)) - m[x]);
}

/// Diagonal values Q_theta^s(s, 1) for every s.
inline std::vector<double> diagonal_q(const Mlp& net, const StateEncoder& encoder)
{
    const std::size_t n = encoder.num_states();
    Eigen::MatrixXd inputs(static_cast<Eigen::Index>(encoder.input_dim()), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) encoder.encode(x, x, inputs.col(static_cast<Eigen::Index>(x)));
    const Eigen::VectorXd q = net.forward(inputs);
    return {q.data(), q.data() + q.size()};
}

struct DgnRun {
    Mlp online;
    Mlp target;
    std::vector<double> m;
    std::vector<MetricsRow> log;
    UpdateCounters counters;            ///< q_updates counts (tuple x reference) target evaluations
    std::uint64_t learn_steps = 0;
    std::vector<double> tail_mean;      ///< mean of the last tail_window recorded index vectors
    RetirementSolution oracle;
};

/// Learn steps fired after T environment steps: steps n <= T with
/// n % sync_period == 0 and n > batch (the buffer holds n tuples at step n).
inline std::uint64_t expected_learn_steps(std::uint64_t steps, std::size_t batch, std::uint64_t sync_period)
{
    const std::uint64_t total = steps / sync_period;
    const std::uint64_t warmup = static_cast<std::uint64_t>(batch) / sync_period;
    return total > warmup ? total - warmup : 0;
}

/// One learn step: draw B tuples, expand each across all N reference
/// states, regress the online net on the targets with one Adam step, then
/// soft-update the target net. Returns the number of target evaluations.
inline std::uint64_t dgn_learn(Mlp& online, Mlp& target, AdamState& adam, const ReplayBuffer& buffer, const StateEncoder& encoder,
                               std::span<const double> m, double gamma, const DgnConfig& cfg, RandomSource& rng)
{
    const std::size_t n = encoder.num_states();
    const std::vector<ExperienceTuple> batch = buffer.sample(cfg.batch, rng);
    const auto cols = static_cast<Eigen::Index>(batch.size() * n);
    const auto dim = static_cast<Eigen::Index>(encoder.input_dim());
    Eigen::MatrixXd inputs(dim, cols);
    Eigen::MatrixXd next_inputs(dim, cols);
    Eigen::Index c = 0;
    for (const ExperienceTuple& e : batch)
        for (std::size_t x = 0; x < n; ++x, ++c) {
            encoder.encode(e.state, x, inputs.col(c));
            encoder.encode(e.next_state, x, next_inputs.col(c));
        }
    const Eigen::VectorXd next_q = target.forward(next_inputs);
    Eigen::VectorXd targets(cols);
    c = 0;
    for (const ExperienceTuple& e : batch)
        for (std::size_t x = 0; x < n; ++x, ++c) targets(c) = e.reward + gamma * std::max(next_q(c), m[x]);

    // loss_gradient averages over all B*N items; the loss here sums over
    // reference states and averages over tuples, hence the factor N.
    std::vector<double> grad(online.size());
    online.loss_gradient(inputs, targets, grad);
    for (double& g : grad) g *= static_cast<double>(n);
    adam_apply(online.values(), adam, grad);
    soft_update(target, online, cfg.tau);
    return static_cast<std::uint64_t>(cols);
}

/// Runs DGN on a homogeneous bandit (one network pair, one M vector).
inline DgnRun train_dgn(BanditInstance env, const DgnConfig& cfg, const EpsilonSchedule& epsilon, std::uint64_t steps,
                        std::uint64_t seed, std::uint64_t cadence = 1, std::size_t tail_window = 200, bool record_log = true,
                        double oracle_tol = 1e-6)
{
    cfg.validate();
    epsilon.validate();
    detail::require_config(cadence >= 1, "dgn: cadence must be >= 1");
    detail::require_config(env.is_homogeneous(), "dgn: only homogeneous bandits are supported");

    const ArmModel& model = env.model(0);
    const std::size_t n = model.num_states();
    const double gamma = env.gamma();
    const StateEncoder encoder(n, cfg.encoding);

    const RandomSource root(seed);
    RandomSource agent_rng = root.derive(1);
    RandomSource env_rng = root.derive(2);
    RandomSource init_rng = root.derive(3);
    RandomSource replay_rng = root.derive(4);

    Mlp online = Mlp::seeded(cfg.dims(encoder.input_dim()), init_rng);
    DgnRun run{online, online, std::vector<double>(n, 0.0), {}, {}, 0, {}, gittins_exact(model, gamma, oracle_tol)};
    AdamState adam(run.online.size(), cfg.step_size);
    ReplayBuffer buffer(cfg.replay_capacity);

    const std::size_t k = env.num_arms();
    std::vector<double> current(k);
    std::vector<double> exact(k);
    SuboptimalTracker tracker;
    TailMean tail(tail_window);

    for (std::uint64_t t = 1; t <= steps; ++t) {
        for (std::size_t arm = 0; arm < k; ++arm) {
            current[arm] = (1.0 - gamma) * run.m[env.state(arm)];
            exact[arm] = run.oracle.g_star[env.state(arm)];
        }
        const std::size_t arm = epsilon_greedy_select(std::span<const double>(current), epsilon.at(t - 1), agent_rng);
        const bool optimal = is_optimal_choice(std::span<const double>(exact), [](std::size_t) { return true; }, arm, oracle_tol);
        tracker.record(optimal);

        const StepResult res = env.step(arm, env_rng);
        buffer.push({arm, res.state, res.reward, res.next_state});
        ++run.counters.steps;

        if (buffer.size() > cfg.batch && t % cfg.sync_period == 0) {
            run.counters.q_updates += dgn_learn(run.online, run.target, adam, buffer, encoder, run.m, gamma, cfg, replay_rng);
            ++run.learn_steps;
        }
        const double beta = cfg.index_rate.beta(t);
        if (beta > 0.0) {
            dgn_m_update(run.m, run.online, encoder, beta);
            run.counters.index_updates += n;
        }

        if (t % cadence == 0) {
            std::vector<double> idx(n);
            for (std::size_t s = 0; s < n; ++s) idx[s] = (1.0 - gamma) * run.m[s];
            tail.push(idx);
            if (record_log) {
                const std::vector<double> q = diagonal_q(run.online, encoder);
                double bre = 0.0;
                for (std::size_t s = 0; s < n; ++s) bre += std::abs(std::max(q[s], run.m[s]) - run.oracle.m_star[s]);
                MetricsRow row;
                row.step = t;
                row.arm = arm;
                row.optimal = optimal;
                row.bre = bre / static_cast<double>(n);
                row.pct_suboptimal = tracker.percent();
                row.counters = run.counters;
                row.indices = std::move(idx);
                run.log.push_back(std::move(row));
            }
        }
    }
    if (tail.size() == 0) {
        run.tail_mean.resize(n);
        for (std::size_t s = 0; s < n; ++s) run.tail_mean[s] = (1.0 - gamma) * run.m[s];
    } else {
        run.tail_mean = tail.mean();
    }
    return run;
}

} // namespace gittins::deep
