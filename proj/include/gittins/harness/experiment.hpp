#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gittins/arm.hpp"
#include "gittins/deep/dgn.hpp"
#include "gittins/harness/config.hpp"
#include "gittins/harness/csv.hpp"
#include "gittins/oracle.hpp"
#include "gittins/scheduling/train.hpp"
#include "gittins/train.hpp"

namespace gittins::harness {

/// Bandit described by a (non-scheduling) config. Dirichlet matrices come
/// from a stream of `env.seed`, independent of the run seeds.
inline BanditInstance make_bandit(const ExperimentConfig& c)
{
    switch (c.env) {
    case EnvKind::toy: return BanditInstance::homogeneous(toy_arm(), c.arms, c.gamma);
    case EnvKind::two_state: return BanditInstance::heterogeneous(two_state_pair(), c.gamma);
    case EnvKind::dirichlet: {
        RandomSource rng = RandomSource(c.env_seed).derive(6);
        if (!c.heterogeneous) return BanditInstance::homogeneous(dirichlet_arm(c.states, c.concentration, rng), c.arms, c.gamma);
        std::vector<ArmModelPtr> models;
        for (std::size_t i = 0; i < c.arms; ++i) models.push_back(dirichlet_arm(c.states, c.concentration, rng));
        return BanditInstance::heterogeneous(std::move(models), c.gamma);
    }
    case EnvKind::scheduling: break;
    }
    throw ConfigError("make_bandit: scheduling configs have no bandit");
}

inline TabularConfig tabular_config(const ExperimentConfig& c, std::uint64_t seed)
{
    TabularConfig t;
    t.algo = c.algo;
    t.rates = c.rates;
    t.epsilon = c.epsilon;
    t.steps = c.steps;
    t.seed = seed;
    t.cadence = c.cadence;
    t.tail_window = c.tail_window;
    t.sharing = c.sharing;
    t.oracle_tol = c.oracle_tol;
    return t;
}

inline scheduling::SchedulingConfig scheduling_config(const ExperimentConfig& c, std::uint64_t seed)
{
    scheduling::SchedulingConfig s;
    s.algo = c.algo;
    s.rates = c.rates;
    s.epsilon = c.epsilon;
    s.epsilon_unit = c.epsilon_unit;
    s.gamma = c.gamma;
    s.episodes = c.episodes;
    s.seed = seed;
    s.cadence = c.cadence;
    s.oracle_tol = c.oracle_tol;
    return s;
}

struct SeedResult {
    std::uint64_t seed = 0;
    double final_bre = 0.0;       ///< bandits: last logged BRE; scheduling: last episode's BRE
    double cumulative_regret = 0.0; ///< scheduling only
    UpdateCounters counters;
    double seconds = 0.0;         ///< wall clock, informational
};

namespace detail_exp {

inline std::string seed_file(const std::filesystem::path& dir, const char* stem, std::uint64_t seed)
{
    return (dir / (std::string(stem) + "_" + std::to_string(seed) + ".csv")).string();
}

inline void write_indices(CsvWriter& out, std::uint64_t step, const std::vector<double>& flat, const std::vector<RetirementSolution>& shape)
{
    std::size_t k = 0;
    for (std::size_t t = 0; t < shape.size(); ++t)
        for (std::size_t s = 0; s < shape[t].g_star.size(); ++s) out.row(step, t, s, flat.at(k++));
}

inline void write_log(const std::filesystem::path& dir, std::uint64_t seed, const std::vector<MetricsRow>& log,
                      const std::vector<RetirementSolution>& shape)
{
    CsvWriter metrics(seed_file(dir, "metrics", seed), {"step", "arm", "optimal", "bre", "pct_suboptimal"});
    CsvWriter indices(seed_file(dir, "indices", seed), {"step", "table", "state", "index"});
    CsvWriter counters(seed_file(dir, "counters", seed), {"step", "q_updates", "index_updates", "steps"});
    for (const MetricsRow& row : log) {
        metrics.row(row.step, row.arm, row.optimal, row.bre, row.pct_suboptimal);
        write_indices(indices, row.step, row.indices, shape);
        counters.row(row.step, row.counters.q_updates, row.counters.index_updates, row.counters.steps);
    }
}

inline void write_oracle(const std::filesystem::path& dir, const std::vector<RetirementSolution>& oracle)
{
    CsvWriter out((dir / "oracle.csv").string(), {"table", "state", "M_star", "G_star"});
    for (std::size_t t = 0; t < oracle.size(); ++t)
        for (std::size_t s = 0; s < oracle[t].g_star.size(); ++s) out.row(t, s, oracle[t].m_star[s], oracle[t].g_star[s]);
}

} // namespace detail_exp

inline SeedResult run_bandit_seed(const ExperimentConfig& c, std::uint64_t seed, const std::filesystem::path& dir)
{
    SeedResult res{seed, 0.0, 0.0, {}, 0.0};
    if (c.algo == Algorithm::dgn) {
        deep::DgnRun run = deep::train_dgn(make_bandit(c), c.dgn, c.epsilon, c.steps, seed, c.cadence, c.tail_window, true, c.oracle_tol);
        const std::vector<RetirementSolution> oracle = {run.oracle};
        detail_exp::write_log(dir, seed, run.log, oracle);
        detail_exp::write_oracle(dir, oracle);
        res.counters = run.counters;
        if (!run.log.empty()) res.final_bre = run.log.back().bre;
        return res;
    }
    TabularRun run = train_tabular(make_bandit(c), tabular_config(c, seed));
    detail_exp::write_log(dir, seed, run.log, run.oracle);
    detail_exp::write_oracle(dir, run.oracle);
    res.counters = run.counters;
    if (!run.log.empty()) res.final_bre = run.log.back().bre;
    return res;
}

inline SeedResult run_scheduling_seed(const ExperimentConfig& c, std::uint64_t seed, const std::filesystem::path& dir)
{
    const auto jobs = make_jobs(c.jobs, seed);
    scheduling::SchedulingRun run = scheduling::train_scheduling(jobs, scheduling_config(c, seed), c.jobs.hazard_states);

    CsvWriter metrics(detail_exp::seed_file(dir, "metrics", seed),
                      {"episode", "flowtime", "oracle_flowtime", "regret", "pct_optimal_actions", "cumulative_regret", "steps",
                       "run_to_completion", "spread_ok_steps"});
    CsvWriter indices(detail_exp::seed_file(dir, "indices", seed), {"episode", "table", "state", "index"});
    CsvWriter counters(detail_exp::seed_file(dir, "counters", seed), {"episode", "q_updates", "index_updates", "steps"});
    for (const auto& row : run.rows) {
        metrics.row(row.episode, row.flowtime, row.oracle_flowtime, row.regret, row.pct_optimal, row.cumulative_regret, row.steps,
                    row.run_to_completion, row.spread_ok_steps);
        if (!row.indices.empty()) detail_exp::write_indices(indices, row.episode, row.indices, run.oracle);
        counters.row(row.episode, row.counters.q_updates, row.counters.index_updates, row.counters.steps);
    }
    detail_exp::write_oracle(dir, run.oracle);

    SeedResult res{seed, 0.0, 0.0, run.counters, 0.0};
    if (!run.rows.empty()) {
        res.final_bre = run.rows.back().bre;
        res.cumulative_regret = run.rows.back().cumulative_regret;
    }
    return res;
}

/// Runs every seed of a validated config and writes its CSVs plus
/// `manifest.cfg` into `c.out`. The manifest re-parses to the same config;
/// timings appear in it as comments only.
inline std::vector<SeedResult> run_experiment(const ExperimentConfig& c)
{
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    std::vector<SeedResult> results;
    for (std::uint64_t seed : c.seeds) {
        const auto start = std::chrono::steady_clock::now();
        SeedResult r = c.env == EnvKind::scheduling ? run_scheduling_seed(c, seed, dir) : run_bandit_seed(c, seed, dir);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results.push_back(r);
    }
    std::ofstream manifest(dir / "manifest.cfg", std::ios::binary);
    if (!manifest) throw ConfigError("cannot write manifest in '" + c.out + "'");
    manifest << to_text(c);
    for (const SeedResult& r : results) manifest << "# wall_clock_seconds seed " << r.seed << " = " << format_number(r.seconds) << '\n';
    return results;
}

} // namespace gittins::harness
