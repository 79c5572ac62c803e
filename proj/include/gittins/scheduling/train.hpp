#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gittins/metrics.hpp"
#include "gittins/oracle.hpp"
#include "gittins/schedule.hpp"
#include "gittins/scheduling/env.hpp"
#include "gittins/scheduling/jobs.hpp"
#include "gittins/tabular.hpp"

namespace gittins::scheduling {

/// Which learner table each job uses: hazard jobs get their own table,
/// distribution jobs with identical laws share one.
struct JobTables {
    std::vector<std::size_t> table_of_job;
    std::vector<std::size_t> representative; ///< a job index per table
    std::vector<std::size_t> table_sizes;
};

inline JobTables make_job_tables(const JobBatchEnv& env)
{
    JobTables out;
    for (std::size_t i = 0; i < env.num_jobs(); ++i) {
        std::size_t table = out.representative.size();
        if (std::holds_alternative<ServiceDistSpec>(env.job(i))) {
            for (std::size_t t = 0; t < out.representative.size(); ++t)
                if (env.job(out.representative[t]) == env.job(i)) {
                    table = t;
                    break;
                }
        }
        if (table == out.representative.size()) {
            out.representative.push_back(i);
            out.table_sizes.push_back(env.num_states(i));
        }
        out.table_of_job.push_back(table);
    }
    return out;
}

/// Exact index solution per table.
inline std::vector<RetirementSolution> oracle_tables(const JobBatchEnv& env, const JobTables& tables, double gamma, double tol = 1e-6)
{
    std::vector<RetirementSolution> out;
    for (std::size_t rep : tables.representative)
        out.push_back(gittins_exact(*job_arm_model(env.job(rep), env.hazard_states()), gamma, tol));
    return out;
}

/// Mean flowtime of the exact index policy (greedy, uniform tie-breaks) over
/// `trials` freshly drawn batches.
inline double oracle_flowtime(const std::vector<JobSpec>& jobs, double gamma, std::uint64_t trials, RandomSource& rng,
                              std::size_t hazard_states = default_hazard_states(), double tol = 1e-6)
{
    detail::require(trials >= 1, "oracle_flowtime: need at least one trial");
    JobBatchEnv env(jobs, hazard_states);
    const JobTables tables = make_job_tables(env);
    const std::vector<RetirementSolution> sol = oracle_tables(env, tables, gamma, tol);
    const JobIndexFn index = [&](std::size_t job, std::size_t s) { return sol[tables.table_of_job[job]].g_star[s]; };
    double total = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        env.reset(rng);
        total += static_cast<double>(run_episode(env, index, 0.0, rng).flowtime());
    }
    return total / static_cast<double>(trials);
}

inline double episodic_regret(double learner_flowtime, double oracle_flowtime) { return learner_flowtime - oracle_flowtime; }

enum class EpsilonUnit { step, episode };

struct SchedulingConfig {
    Algorithm algo = Algorithm::qgi;
    LearningRateSchedule rates = constant_schedule(0.6, 0.4, 5);
    EpsilonSchedule epsilon{1.0, 0.9985, 0.0};
    EpsilonUnit epsilon_unit = EpsilonUnit::step;
    double gamma = 0.9;
    std::uint64_t episodes = 2500;
    std::uint64_t seed = 0;
    std::uint64_t cadence = 1;      ///< episodes between index/BRE snapshots
    double oracle_tol = 1e-6;
};

struct EpisodeRow {
    std::uint64_t episode = 0;
    std::uint64_t steps = 0;
    double flowtime = 0.0;
    double oracle_flowtime = 0.0;   ///< exact policy replayed on the same service requirements
    double regret = 0.0;
    double cumulative_regret = 0.0;
    double pct_optimal = 0.0;       ///< share of this episode's choices that were optimal, in percent
    bool run_to_completion = false;
    std::uint64_t spread_ok_steps = 0; ///< steps with unfinished-job age spread <= 1
    double bre = 0.0;               ///< filled on snapshot episodes only
    UpdateCounters counters;
    std::vector<double> indices;    ///< filled on snapshot episodes only, table-major
};

struct SchedulingRun {
    LearnerState learner;
    JobTables tables;
    std::vector<RetirementSolution> oracle;
    std::vector<EpisodeRow> rows;
    UpdateCounters counters;
};

/// Episodic training of a tabular learner on a job batch. The agent,
/// service draws and oracle tie-breaks use separate streams, so two learners
/// run with one seed face identical batches.
inline SchedulingRun train_scheduling(const std::vector<JobSpec>& jobs, const SchedulingConfig& cfg,
                                      std::size_t hazard_states = default_hazard_states())
{
    cfg.rates.validate();
    cfg.epsilon.validate();
    detail::require_config(cfg.algo != Algorithm::dgn, "scheduling: dgn is not supported, use qgi, restart or qwi");
    detail::require_config(cfg.gamma > 0.0 && cfg.gamma < 1.0, "scheduling: gamma must lie in (0,1)");
    detail::require_config(cfg.cadence >= 1, "scheduling: cadence must be >= 1");

    JobBatchEnv env(jobs, hazard_states);
    JobBatchEnv replay(jobs, hazard_states);
    const JobTables tables = make_job_tables(env);
    SchedulingRun run{make_learner(cfg.algo, tables.table_sizes), tables, {}, {}, {}};
    run.oracle = oracle_tables(env, run.tables, cfg.gamma, cfg.oracle_tol);

    const RandomSource root(cfg.seed);
    RandomSource agent_rng = root.derive(1);
    RandomSource env_rng = root.derive(2);
    RandomSource oracle_rng = root.derive(3);

    const double gamma = cfg.gamma;
    const auto& table_of = run.tables.table_of_job;
    const JobIndexFn learned = [&](std::size_t job, std::size_t s) { return index_of(run.learner, table_of[job], s, gamma); };
    const JobIndexFn exact = [&](std::size_t job, std::size_t s) { return run.oracle[table_of[job]].g_star[s]; };

    const std::size_t k = env.num_jobs();
    std::vector<double> exact_now(k);
    std::vector<ArmPosition> passive;
    std::uint64_t n = 0; // global step counter
    double cumulative = 0.0;

    for (std::uint64_t ep = 1; ep <= cfg.episodes; ++ep) {
        env.reset(env_rng);
        std::uint64_t optimal_steps = 0;
        auto eps_at = [&](std::uint64_t) { return cfg.epsilon.at(cfg.epsilon_unit == EpsilonUnit::step ? n : ep - 1); };
        const ServeHook hook = [&](std::size_t job, const ServeResult& res) {
            ++n;
            // every other job is where it was before the serve
            for (std::size_t i = 0; i < k; ++i) exact_now[i] = exact(i, i == job ? res.state : env.state(i));
            auto avail = [&](std::size_t i) { return i == job || !env.done(i); };
            if (is_optimal_choice(std::span<const double>(exact_now), avail, job, cfg.oracle_tol)) ++optimal_steps;

            const Transition tr{table_of[job], res.state, res.reward, res.next_state};
            const double alpha = cfg.rates.alpha(n);
            const double beta = cfg.rates.beta(n);
            switch (cfg.algo) {
            case Algorithm::qgi: run.counters += qgi_step(std::get<QgiState>(run.learner), tr, alpha, beta, gamma); break;
            case Algorithm::restart: run.counters += restart_step(std::get<RestartState>(run.learner), tr, alpha, gamma); break;
            case Algorithm::qwi:
                passive.clear();
                for (std::size_t i = 0; i < k; ++i)
                    if (i != job && !env.done(i)) passive.push_back({table_of[i], env.state(i)});
                run.counters += qwi_step(std::get<QwiState>(run.learner), tr, passive, alpha, beta, gamma);
                break;
            case Algorithm::dgn: break;
            }
        };
        const EpisodeTrace trace = run_episode(env, learned, eps_at, agent_rng, hook);

        replay.reset_with({env.service_times().begin(), env.service_times().end()});
        const EpisodeTrace best = run_episode(replay, exact, [](std::uint64_t) { return 0.0; }, oracle_rng);

        EpisodeRow row;
        row.episode = ep;
        row.steps = trace.steps.size();
        row.flowtime = static_cast<double>(trace.flowtime());
        row.oracle_flowtime = static_cast<double>(best.flowtime());
        row.regret = episodic_regret(row.flowtime, row.oracle_flowtime);
        cumulative += row.regret;
        row.cumulative_regret = cumulative;
        row.pct_optimal = 100.0 * static_cast<double>(optimal_steps) / static_cast<double>(trace.steps.size());
        row.run_to_completion = trace.run_to_completion();
        for (const auto& s : trace.steps) row.spread_ok_steps += s.age_spread <= 1 ? 1 : 0;
        row.counters = run.counters;
        if (ep % cfg.cadence == 0 || ep == cfg.episodes) {
            row.bre = compute_bre(run.learner, run.oracle);
            row.indices = flatten(extract_indices(run.learner, gamma));
        }
        run.rows.push_back(std::move(row));
    }
    return run;
}

/// Learned greedy order of fresh jobs: job ids sorted by descending index in state 1.
inline std::vector<std::size_t> greedy_fresh_order(const SchedulingRun& run, double gamma)
{
    std::vector<std::size_t> order(run.tables.table_of_job.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return index_of(run.learner, run.tables.table_of_job[a], 1, gamma) > index_of(run.learner, run.tables.table_of_job[b], 1, gamma);
    });
    return order;
}

} // namespace gittins::scheduling
