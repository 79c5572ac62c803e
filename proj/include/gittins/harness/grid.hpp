#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "gittins/harness/config.hpp"
#include "gittins/harness/csv.hpp"
#include "gittins/harness/experiment.hpp"
#include "gittins/metrics.hpp"
#include "gittins/train.hpp"

namespace gittins::harness {

struct ConvergenceMapCell {
    double x_value = 0.0;
    double y_value = 0.0;
    double delta = 0.0;
    double fraction_converged = 0.0;
};

/// Sets one named hyperparameter (x, y, theta, kappa or phi).
inline void set_axis(LearningRateSchedule& rates, const std::string& axis, double value)
{
    auto whole = [&] {
        const double r = std::round(value);
        detail::require_config(r >= 1.0 && std::abs(r - value) < 1e-9, "grid: axis '" + axis + "' needs positive integer values");
        return static_cast<std::uint64_t>(r);
    };
    if (axis == "x") rates.x = value;
    else if (axis == "y") rates.y = value;
    else if (axis == "theta") rates.theta = whole();
    else if (axis == "kappa") rates.kappa = whole();
    else if (axis == "phi") rates.phi = whole();
    else throw ConfigError("grid: unknown axis '" + axis + "'");
}

/// Worst state error of one run: max over tables and states of
/// |tail-window mean index - oracle index|.
inline double run_error(const ExperimentConfig& c, const LearningRateSchedule& rates, std::uint64_t seed)
{
    TabularConfig t = tabular_config(c, seed);
    t.rates = rates;
    t.record_log = false;
    const TabularRun run = train_tabular(make_bandit(c), t);
    return max_index_error(run.tail_mean, run.oracle);
}

/// Convergence map over the config's grid: for each cell, `grid.runs`
/// seeded runs; a run converges at delta iff every state's tail mean lies
/// within delta of the oracle. Cells are listed x-major, deltas innermost.
inline std::vector<ConvergenceMapCell> grid_search(const ExperimentConfig& c)
{
    detail::require_config(c.env != EnvKind::scheduling, "grid: scheduling configs are not supported");
    detail::require_config(c.algo != Algorithm::dgn, "grid: dgn is not supported");
    const GridConfig& g = c.grid;
    const std::size_t cells = g.x_values.size() * g.y_values.size();
    std::vector<LearningRateSchedule> cell_rates(cells, c.rates);
    for (std::size_t i = 0; i < g.x_values.size(); ++i)
        for (std::size_t j = 0; j < g.y_values.size(); ++j) {
            auto& r = cell_rates[i * g.y_values.size() + j];
            set_axis(r, g.x_axis, g.x_values[i]);
            set_axis(r, g.y_axis, g.y_values[j]);
            r.validate();
        }

    const std::size_t jobs = cells * g.runs;
    std::vector<double> errors(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs; k = next++) errors[k] = run_error(c, cell_rates[k / g.runs], g.seed_base + k % g.runs);
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(c.threads, jobs));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<ConvergenceMapCell> out;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        for (double delta : g.deltas) {
            std::size_t ok = 0;
            for (std::size_t r = 0; r < g.runs; ++r) ok += errors[cell * g.runs + r] <= delta ? 1 : 0;
            out.push_back({g.x_values[cell / g.y_values.size()], g.y_values[cell % g.y_values.size()], delta,
                           static_cast<double>(ok) / static_cast<double>(g.runs)});
        }
    }
    return out;
}

/// Cells with a nonzero convergence fraction at `delta`.
inline std::size_t convergent_area(const std::vector<ConvergenceMapCell>& map, double delta)
{
    std::size_t n = 0;
    for (const auto& cell : map) n += cell.delta == delta && cell.fraction_converged > 0.0 ? 1 : 0;
    return n;
}

/// Writes the map as `x_axis,y_axis,delta,fraction_converged`; the two
/// trailing columns name the hyperparameters on each axis.
inline void write_convergence_map(const std::string& path, const ExperimentConfig& c, const std::vector<ConvergenceMapCell>& map)
{
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    CsvWriter out(path, {"x_axis", "y_axis", "delta", "fraction_converged", "x_name", "y_name"});
    for (const auto& cell : map) out.row(cell.x_value, cell.y_value, cell.delta, cell.fraction_converged, c.grid.x_axis, c.grid.y_axis);
}

} // namespace gittins::harness
