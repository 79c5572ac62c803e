#pragma once

#include <cstdint>
#include <vector>

#include "gittins/arm.hpp"
#include "gittins/metrics.hpp"
#include "gittins/oracle.hpp"
#include "gittins/random.hpp"
#include "gittins/schedule.hpp"
#include "gittins/select.hpp"
#include "gittins/tabular.hpp"

namespace gittins {

enum class TableSharing {
    automatic, ///< one shared table for homogeneous arms, one per arm otherwise
    shared,
    per_arm,
};

struct TabularConfig {
    Algorithm algo = Algorithm::qgi;
    LearningRateSchedule rates = qgi_toy_schedule();
    EpsilonSchedule epsilon = EpsilonSchedule::fixed(1.0);
    std::uint64_t steps = 20000;
    std::uint64_t seed = 0;
    std::uint64_t cadence = 1;        ///< log / tail-window sampling period in steps
    std::size_t tail_window = 200;    ///< records averaged for the converged-index estimate
    TableSharing sharing = TableSharing::automatic;
    bool record_log = true;           ///< false skips per-row BRE and index snapshots (grid search)
    double oracle_tol = 1e-6;
};

struct MetricsRow {
    std::uint64_t step = 0;
    std::size_t arm = 0;
    bool optimal = false;
    double bre = 0.0;
    double pct_suboptimal = 0.0;
    UpdateCounters counters;
    std::vector<double> indices; ///< extracted indices, table-major
};

struct TabularRun {
    LearnerState learner;
    std::vector<MetricsRow> log;
    UpdateCounters counters;
    IndexTable tail_mean;                    ///< mean of the last tail_window recorded index tables
    std::vector<RetirementSolution> oracle;  ///< one per learner table
};

/// Table layout for a bandit: which table each arm reads and writes.
struct TableLayout {
    std::vector<std::size_t> table_of_arm;
    std::vector<std::size_t> model_of_table; ///< model index in the BanditInstance
    std::vector<std::size_t> table_sizes;
};

inline TableLayout make_layout(const BanditInstance& env, TableSharing sharing)
{
    if (sharing == TableSharing::shared && !env.is_homogeneous())
        throw ConfigError("shared learner table requested for a heterogeneous bandit");
    const bool shared = env.is_homogeneous() && sharing != TableSharing::per_arm;
    TableLayout layout;
    for (std::size_t arm = 0; arm < env.num_arms(); ++arm) {
        if (shared) {
            layout.table_of_arm.push_back(0);
        } else {
            layout.table_of_arm.push_back(arm);
            layout.model_of_table.push_back(env.model_index(arm));
            layout.table_sizes.push_back(env.model_of(arm).num_states());
        }
    }
    if (shared) {
        layout.model_of_table = {0};
        layout.table_sizes = {env.model(0).num_states()};
    }
    return layout;
}

/// Runs the select -> step -> update loop of one tabular learner.
///
/// The agent (exploration, tie-breaks) and the environment (transitions) draw
/// from separate streams derived from `seed`, so two learners run with the
/// same seed see the same environment randomness whenever they make the same
/// choices.
inline TabularRun train_tabular(BanditInstance env, const TabularConfig& cfg)
{
    cfg.rates.validate();
    cfg.epsilon.validate();
    if (cfg.algo == Algorithm::dgn) throw ConfigError("train_tabular: use train_dgn for dgn");
    if (cfg.cadence == 0) throw ConfigError("train_tabular: cadence must be >= 1");

    const TableLayout layout = make_layout(env, cfg.sharing);
    const double gamma = env.gamma();

    TabularRun run{make_learner(cfg.algo, layout.table_sizes), {}, {}, {}, {}};
    for (std::size_t model : layout.model_of_table) run.oracle.push_back(gittins_exact(env.model(model), gamma, cfg.oracle_tol));

    const RandomSource root(cfg.seed);
    RandomSource agent_rng = root.derive(1);
    RandomSource env_rng = root.derive(2);

    const std::size_t k = env.num_arms();
    std::vector<double> current(k);
    std::vector<double> exact(k);
    std::vector<ArmPosition> passive;
    passive.reserve(k);
    SuboptimalTracker tracker;
    TailMean tail(cfg.tail_window);

    if (cfg.record_log) run.log.reserve(static_cast<std::size_t>(cfg.steps / cfg.cadence));
    for (std::uint64_t n = 1; n <= cfg.steps; ++n) {
        for (std::size_t arm = 0; arm < k; ++arm) {
            const std::size_t t = layout.table_of_arm[arm];
            current[arm] = index_of(run.learner, t, env.state(arm), gamma);
            exact[arm] = run.oracle[t].g_star[env.state(arm)];
        }
        const double eps = cfg.epsilon.at(n - 1);
        const std::size_t arm = epsilon_greedy_select(std::span<const double>(current), eps, agent_rng);
        const bool optimal = is_optimal_choice(std::span<const double>(exact), [](std::size_t) { return true; }, arm, cfg.oracle_tol);
        tracker.record(optimal);

        if (cfg.algo == Algorithm::qwi) {
            passive.clear();
            for (std::size_t j = 0; j < k; ++j)
                if (j != arm) passive.push_back({layout.table_of_arm[j], env.state(j)});
        }
        const StepResult res = env.step(arm, env_rng);
        const Transition tr{layout.table_of_arm[arm], res.state, res.reward, res.next_state};
        const double alpha = cfg.rates.alpha(n);
        const double beta = cfg.rates.beta(n);

        UpdateCounters delta;
        switch (cfg.algo) {
        case Algorithm::qgi: delta = qgi_step(std::get<QgiState>(run.learner), tr, alpha, beta, gamma); break;
        case Algorithm::restart: delta = restart_step(std::get<RestartState>(run.learner), tr, alpha, gamma); break;
        case Algorithm::qwi: delta = qwi_step(std::get<QwiState>(run.learner), tr, passive, alpha, beta, gamma); break;
        case Algorithm::dgn: break;
        }
        run.counters += delta;

        if (n % cfg.cadence == 0) {
            std::vector<double> flat = flatten(extract_indices(run.learner, gamma));
            tail.push(flat);
            if (cfg.record_log) {
                MetricsRow row;
                row.step = n;
                row.arm = arm;
                row.optimal = optimal;
                row.bre = compute_bre(run.learner, run.oracle);
                row.pct_suboptimal = tracker.percent();
                row.counters = run.counters;
                row.indices = std::move(flat);
                run.log.push_back(std::move(row));
            }
        }
    }
    const IndexTable shape = extract_indices(run.learner, gamma);
    run.tail_mean = tail.size() == 0 ? shape : unflatten(tail.mean(), shape);
    return run;
}

} // namespace gittins
