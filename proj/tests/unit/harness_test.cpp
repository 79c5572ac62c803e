#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gittins/harness/config.hpp"
#include "gittins/harness/experiment.hpp"
#include "gittins/harness/grid.hpp"
#include "gittins/metrics.hpp"

using namespace gittins;
using namespace gittins::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("gittins_harness_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> read_lines(const fs::path& p)
{
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
}

} // namespace

TEST(ConfigFile, ParsesCommentsAndWhitespace)
{
    const auto cfg = ConfigFile::parse_string("# header\n\n experiment.algo = qwi  # trailing\nenv.gamma=0.95\n");
    EXPECT_EQ(*cfg.raw("experiment.algo"), "qwi");
    EXPECT_EQ(*cfg.raw("env.gamma"), "0.95");
    EXPECT_FALSE(cfg.has("env.arms"));
}

TEST(ConfigFile, ReportsLineNumbers)
{
    try {
        ConfigFile::parse_string("env.gamma = 0.9\nnot a pair\n", "x.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("x.cfg:2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(ConfigFile::parse_string("gamma = 0.9\n"), ConfigError);
    EXPECT_THROW(ConfigFile::parse_string("env.gamma = 0.9\nenv.gamma = 0.8\n"), ConfigError);
}

TEST(Resolve, RejectsUnknownKeysAndBadValues)
{
    EXPECT_THROW(resolve_text("env.gama = 0.9\n"), ConfigError);
    EXPECT_THROW(resolve_text("env.gamma = 1.0\n"), ConfigError);
    EXPECT_THROW(resolve_text("env.gamma = abc\n"), ConfigError);
    EXPECT_THROW(resolve_text("experiment.algo = sarsa\n"), ConfigError);
    EXPECT_THROW(resolve_text("rates.x = 0\n"), ConfigError);
    EXPECT_THROW(resolve_text("experiment.seeds = 1,,2\n"), ConfigError);
    EXPECT_THROW(resolve_text("experiment.env = two_state\nexperiment.algo = dgn\n"), ConfigError);
    EXPECT_THROW(resolve_text("experiment.env = scheduling\nexperiment.algo = dgn\n"), ConfigError);
    EXPECT_THROW(resolve_text("experiment.env = two_state\nenv.sharing = shared\n"), ConfigError);
    EXPECT_THROW(resolve_text("experiment.env = scheduling\njobs.kind = weibull\n"), ConfigError);
    EXPECT_THROW(resolve_text("grid.x_axis = y\ngrid.y_axis = y\n"), ConfigError);
    try {
        resolve_text("experiment.cadence = 0\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("experiment.cadence"), std::string::npos);
    }
}

TEST(Resolve, DefaultsFollowAlgorithm)
{
    const auto qwi = resolve_text("experiment.algo = qwi\n");
    EXPECT_EQ(qwi.rates.x, 0.1);
    EXPECT_EQ(qwi.rates.y, 0.2);
    const auto sched = resolve_text("experiment.env = scheduling\n");
    EXPECT_EQ(sched.rates.alpha_form, RateForm::constant);
    EXPECT_EQ(sched.epsilon.decay, 0.9985);
}

TEST(Resolve, TextRoundTrip)
{
    const auto c = resolve_text("experiment.env = scheduling\nexperiment.seeds = 3,4\njobs.kind = constant\njobs.rho = 0.2,0.7\n"
                                "rates.x = 0.123456789\nenv.gamma = 0.99\n");
    const auto again = resolve_text(to_text(c));
    EXPECT_EQ(to_text(again), to_text(c));
    EXPECT_EQ(again.jobs.rho, (std::vector<double>{0.2, 0.7}));
    EXPECT_EQ(again.rates.x, 0.123456789);
}

TEST(Bre, ZeroLearnerAndFixedPoint)
{
    const auto exact = gittins_exact(*toy_arm(), 0.9);
    const std::vector<RetirementSolution> oracle{exact};
    QgiState zero({5});
    double mean_m = 0;
    for (double m : exact.m_star) mean_m += m / 5.0;
    EXPECT_NEAR(compute_bre(LearnerState(zero), oracle), mean_m, 1e-12);
    EXPECT_NEAR(mean_m, 8.04, 0.05);
    QgiState fixed({5});
    for (std::size_t s = 0; s < 5; ++s) fixed.m(0, s) = fixed.q(0, s, s) = exact.m_star[s];
    EXPECT_NEAR(compute_bre(LearnerState(fixed), oracle), 0.0, 1e-12);
    EXPECT_THROW(compute_bre(LearnerState(QgiState({4})), oracle), InvalidInput);
}

TEST(SuboptimalPct, Examples)
{
    RandomSource rng(1);
    std::vector<Decision> greedy, random, tied;
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> idx(5);
        for (double& v : idx) v = rng.uniform();
        const std::size_t best = static_cast<std::size_t>(std::max_element(idx.begin(), idx.end()) - idx.begin());
        greedy.push_back({best, idx, {}});
        random.push_back({static_cast<std::size_t>(rng.uniform_index(5)), idx, {}});
        tied.push_back({static_cast<std::size_t>(rng.uniform_index(5)), std::vector<double>(5, 0.5), {}});
    }
    for (double p : suboptimal_pct(greedy)) EXPECT_EQ(p, 0.0);
    EXPECT_NEAR(suboptimal_pct(random).back(), 80.0, 2.0);
    EXPECT_EQ(suboptimal_pct(tied).back(), 0.0);
    // an unavailable arm never defines the optimum
    const Decision masked{1, {0.9, 0.5, 0.1}, {0, 1, 1}};
    EXPECT_EQ(suboptimal_pct(std::span<const Decision>(&masked, 1)).back(), 0.0);
}

TEST(RunExperiment, RowCountsAndClosedFormCounters)
{
    auto c = resolve_text("experiment.steps = 20000\nexperiment.cadence = 100\n");
    c.out = scratch_dir("rows").string();
    run_experiment(c);
    const auto metrics = read_lines(fs::path(c.out) / "metrics_0.csv");
    const auto indices = read_lines(fs::path(c.out) / "indices_0.csv");
    const auto counters = read_lines(fs::path(c.out) / "counters_0.csv");
    EXPECT_EQ(metrics.size(), 1u + 200u);
    EXPECT_EQ(indices.size(), 1u + 200u * 5u);
    ASSERT_EQ(counters.size(), 1u + 200u);
    EXPECT_EQ(metrics.front(), "step,arm,optimal,bre,pct_suboptimal");
    EXPECT_EQ(indices.front(), "step,table,state,index");
    EXPECT_EQ(counters.front(), "step,q_updates,index_updates,steps");
    EXPECT_EQ(counters.back(), "20000,100000,10000,20000");
    for (std::size_t i = 1; i < metrics.size(); ++i) {
        const auto f = split(metrics[i]);
        ASSERT_EQ(f.size(), 5u);
        EXPECT_NO_THROW(std::stod(f[3]));
    }
    EXPECT_TRUE(fs::exists(fs::path(c.out) / "manifest.cfg"));
}

TEST(RunExperiment, ByteIdenticalReruns)
{
    auto c = resolve_text("experiment.algo = qwi\nexperiment.steps = 3000\nexperiment.seeds = 4,5\nexperiment.cadence = 10\n");
    c.out = scratch_dir("rerun_a").string();
    run_experiment(c);
    const std::string a = c.out;
    c.out = scratch_dir("rerun_b").string();
    run_experiment(c);
    for (const char* name : {"metrics_4.csv", "indices_4.csv", "counters_4.csv", "metrics_5.csv", "oracle.csv"})
        EXPECT_EQ(slurp(fs::path(a) / name), slurp(fs::path(c.out) / name)) << name;
}

TEST(RunExperiment, ManifestReExecutes)
{
    auto c = resolve_text("experiment.env = scheduling\nexperiment.episodes = 30\nexperiment.cadence = 10\njobs.count = 3\n");
    c.out = scratch_dir("manifest").string();
    run_experiment(c);
    const auto first = slurp(fs::path(c.out) / "metrics_0.csv");
    auto again = resolve(ConfigFile::load((fs::path(c.out) / "manifest.cfg").string()));
    EXPECT_EQ(to_text(again), to_text(c));
    again.out = scratch_dir("manifest_again").string();
    run_experiment(again);
    EXPECT_EQ(slurp(fs::path(again.out) / "metrics_0.csv"), first);
    const auto header = read_lines(fs::path(c.out) / "metrics_0.csv").front();
    EXPECT_EQ(header.rfind("episode,flowtime,oracle_flowtime,regret,pct_optimal_actions", 0), 0u);
}

TEST(RunExperiment, DgnWritesAllFiles)
{
    auto c = resolve_text("experiment.algo = dgn\nexperiment.steps = 200\nexperiment.cadence = 50\n");
    c.out = scratch_dir("dgn").string();
    const auto res = run_experiment(c);
    EXPECT_EQ(read_lines(fs::path(c.out) / "metrics_0.csv").size(), 5u);
    EXPECT_EQ(res.front().counters.q_updates, deep::expected_learn_steps(200, 32, 10) * 32 * 5);
}

TEST(Grid, InfiniteDeltaConvergesEverywhere)
{
    auto c = resolve_text("experiment.steps = 500\ngrid.x_values = 0.2,0.9\ngrid.y_values = 0.3\ngrid.runs = 2\ngrid.deltas = 1e300\n");
    const auto map = grid_search(c);
    ASSERT_EQ(map.size(), 2u);
    for (const auto& cell : map) EXPECT_EQ(cell.fraction_converged, 1.0);
}

TEST(Grid, FrozenIndexNeverConverges)
{
    auto c = resolve_text("experiment.steps = 2000\ngrid.x_values = 0.2\ngrid.y_values = 0\ngrid.runs = 3\ngrid.deltas = 0.05\n");
    const auto map = grid_search(c);
    ASSERT_EQ(map.size(), 1u);
    EXPECT_EQ(map[0].fraction_converged, 0.0);
}

TEST(Grid, TunedCellConverges)
{
    auto c = resolve_text("grid.x_values = 0.2\ngrid.y_values = 0.6\ngrid.runs = 10\ngrid.deltas = 0.05\n");
    const auto map = grid_search(c);
    EXPECT_GE(map[0].fraction_converged, 0.8);
}

TEST(Grid, ThreadedMatchesSerial)
{
    auto c = resolve_text("experiment.steps = 1500\ngrid.x_axis = phi\ngrid.y_axis = x\ngrid.x_values = 5,10\ngrid.y_values = 0.2,0.5\n"
                          "grid.runs = 3\ngrid.deltas = 0.05,0.2\n");
    const auto serial = grid_search(c);
    c.threads = 3;
    const auto threaded = grid_search(c);
    ASSERT_EQ(serial.size(), 8u);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].fraction_converged, threaded[i].fraction_converged);
        EXPECT_GE(serial[i].fraction_converged, 0.0);
        EXPECT_LE(serial[i].fraction_converged, 1.0);
    }
    const fs::path out = scratch_dir("grid") / "map.csv";
    write_convergence_map(out.string(), c, serial);
    const auto lines = read_lines(out);
    EXPECT_EQ(lines.size(), 9u);
    EXPECT_EQ(lines.front(), "x_axis,y_axis,delta,fraction_converged,x_name,y_name");
    c.grid.x_values = {2.5};
    EXPECT_THROW(grid_search(c), ConfigError);
}

TEST(Csv, FormatsAndChecksWidth)
{
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_field(true), "1");
    const fs::path p = scratch_dir("csv");
    fs::create_directories(p);
    CsvWriter w((p / "x.csv").string(), {"a", "b"});
    EXPECT_THROW(w.row(1), InvalidInput);
    EXPECT_THROW(CsvWriter("/nonexistent/dir/x.csv", {"a"}), ConfigError);
}
