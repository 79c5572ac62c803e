// Command-line front end: oracle tables, training runs, convergence maps and
// scheduling experiments driven by `section.key = value` config files.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gittins/gittins.hpp"

namespace {

using namespace gittins;
using namespace gittins::harness;

struct CommonFlags {
    std::string config;
    std::string seeds;
    std::string out;
    std::string algo;
    std::optional<std::uint64_t> length; // --steps or --episodes
    std::optional<std::uint64_t> cadence;
};

void add_common(CLI::App* cmd, CommonFlags& f, const char* length_flag)
{
    cmd->add_option("--config", f.config, "config file (section.key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seeds, "seed or comma-separated seed list");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--algo", f.algo, "qgi | restart | qwi | dgn");
    if (length_flag) cmd->add_option(length_flag, f.length, "training length");
    cmd->add_option("--cadence", f.cadence, "logging period");
}

ExperimentConfig load(const CommonFlags& f, const char* length_key, const char* default_env)
{
    ConfigFile file = f.config.empty() ? ConfigFile{} : ConfigFile::load(f.config);
    if (default_env && !file.has("experiment.env")) file.set("experiment.env", default_env);
    if (!f.seeds.empty()) file.set("experiment.seeds", f.seeds);
    if (!f.out.empty()) file.set("experiment.out", f.out);
    if (!f.algo.empty()) file.set("experiment.algo", f.algo);
    if (f.length && length_key) file.set(length_key, std::to_string(*f.length));
    if (f.cadence) file.set("experiment.cadence", std::to_string(*f.cadence));
    return resolve(file);
}

void print_oracle(const ExperimentConfig& c, std::ostream& os)
{
    os << "arm,state,M_star,G_star\n";
    auto emit = [&](std::size_t arm, const RetirementSolution& sol) {
        for (std::size_t s = 0; s < sol.g_star.size(); ++s)
            os << arm << ',' << s << ',' << format_number(sol.m_star[s]) << ',' << format_number(sol.g_star[s]) << '\n';
    };
    if (c.env == EnvKind::scheduling) {
        const auto jobs = make_jobs(c.jobs, c.seeds.front());
        for (std::size_t i = 0; i < jobs.size(); ++i)
            emit(i, gittins_exact(*scheduling::job_arm_model(jobs[i], c.jobs.hazard_states), c.gamma, c.oracle_tol));
        return;
    }
    const BanditInstance env = make_bandit(c);
    for (std::size_t arm = 0; arm < env.num_arms(); ++arm) emit(arm, gittins_exact(env.model_of(arm), c.gamma, c.oracle_tol));
}

int report(const std::vector<SeedResult>& results, const ExperimentConfig& c)
{
    for (const auto& r : results) {
        std::cout << "seed " << r.seed << ": final_bre=" << format_number(r.final_bre) << " q_updates=" << r.counters.q_updates
                  << " index_updates=" << r.counters.index_updates;
        if (c.env == EnvKind::scheduling) std::cout << " cumulative_regret=" << format_number(r.cumulative_regret);
        std::cout << '\n';
    }
    std::cout << "wrote " << c.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gittins index learning experiments"};
    app.require_subcommand(1);

    CommonFlags oracle_flags, train_flags, grid_flags, sched_flags;
    std::string oracle_out;
    auto* oracle = app.add_subcommand("oracle", "print exact index tables as CSV");
    add_common(oracle, oracle_flags, nullptr);
    oracle->remove_option(oracle->get_option("--out"));
    oracle->add_option("--out", oracle_out, "write the CSV to this file instead of stdout");
    auto* train = app.add_subcommand("train", "train a learner on a bandit");
    add_common(train, train_flags, "--steps");
    auto* grid = app.add_subcommand("gridsearch", "convergence map over two hyperparameters");
    add_common(grid, grid_flags, "--steps");
    auto* sched = app.add_subcommand("schedule", "learn a job scheduling policy");
    add_common(sched, sched_flags, "--episodes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle->parsed()) {
            const ExperimentConfig c = load(oracle_flags, nullptr, nullptr);
            if (oracle_out.empty()) {
                print_oracle(c, std::cout);
            } else {
                std::ofstream os(oracle_out, std::ios::binary);
                if (!os) throw ConfigError("cannot write '" + oracle_out + "'");
                print_oracle(c, os);
            }
            return 0;
        }
        if (train->parsed()) {
            const ExperimentConfig c = load(train_flags, "experiment.steps", nullptr);
            if (c.env == EnvKind::scheduling) throw ConfigError("train: scheduling configs run with the 'schedule' subcommand");
            return report(run_experiment(c), c);
        }
        if (sched->parsed()) {
            const ExperimentConfig c = load(sched_flags, "experiment.episodes", "scheduling");
            if (c.env != EnvKind::scheduling) throw ConfigError("schedule: experiment.env must be scheduling");
            return report(run_experiment(c), c);
        }
        if (grid->parsed()) {
            const ExperimentConfig c = load(grid_flags, "experiment.steps", nullptr);
            const auto map = grid_search(c);
            const auto path = (std::filesystem::path(c.out) / "convergence_map.csv").string();
            write_convergence_map(path, c, map);
            std::ofstream(std::filesystem::path(c.out) / "manifest.cfg", std::ios::binary) << to_text(c);
            for (double d : c.grid.deltas) std::cout << "delta " << format_number(d) << ": " << convergent_area(map, d) << " cells with nonzero fraction\n";
            std::cout << "wrote " << path << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
