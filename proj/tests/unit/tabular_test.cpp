#include <gtest/gtest.h>

#include <algorithm>

#include "gittins/metrics.hpp"
#include "gittins/oracle.hpp"
#include "gittins/tabular.hpp"
#include "gittins/train.hpp"
#include "common/oracles.hpp"

using namespace gittins;

namespace {

constexpr double kExact = 1e-12;

TabularConfig toy_config(Algorithm algo, std::uint64_t steps, std::uint64_t seed)
{
    TabularConfig cfg;
    cfg.algo = algo;
    cfg.rates = algo == Algorithm::qwi ? qwi_toy_schedule() : algo == Algorithm::restart ? constant_schedule(0.3, 0.0, 1) : qgi_toy_schedule();
    cfg.steps = steps;
    cfg.seed = seed;
    return cfg;
}

BanditInstance toy_env(std::size_t arms = 5) { return BanditInstance::homogeneous(toy_arm(), arms, 0.9); }

} // namespace

TEST(QgiStep, ZeroTablesBootstrap)
{
    QgiState st({4});
    const auto d = qgi_step(st, {0, 2, 2.0, 3}, 0.5, 0.0, 0.9);
    for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(st.q(0, x, 2), 1.0, kExact);
    for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(st.m(0, x), 0.0);
    EXPECT_EQ(d.q_updates, 4u);
    EXPECT_EQ(d.index_updates, 0u);
}

TEST(QgiStep, PureRelaxation)
{
    QgiState st({3});
    st.q(0, 1, 1) = 1.0;
    qgi_step(st, {0, 0, 0.0, 0}, 0.0, 0.5, 0.9);
    EXPECT_NEAR(st.m(0, 1), 0.5, kExact);
}

TEST(RestartStep, ZeroTablesBootstrap)
{
    RestartState st({4});
    restart_step(st, {0, 1, 2.0, 2}, 0.5, 0.9);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(st.q(0, k, 1, 1), 1.0, kExact);
        EXPECT_NEAR(st.q(0, 1, k, 0), 1.0, kExact);
    }
}

TEST(RestartStep, SingleStateFixedPoint)
{
    RestartState st({1});
    for (int i = 0; i < 400; ++i) restart_step(st, {0, 0, 1.0, 0}, 1.0, 0.9);
    EXPECT_NEAR(st.q(0, 0, 0, 1), 10.0, 1e-9);
    EXPECT_NEAR(index_of(st, 0, 0, 0.9), 1.0, 1e-10);
}

TEST(QwiStep, PassiveTargetIsSubsidy)
{
    QwiState st({3});
    const ArmPosition passive[] = {{0, 2}};
    qwi_step(st, {0, 1, 2.0, 2}, passive, 0.5, 0.0, 0.9);
    for (std::size_t x = 0; x < 3; ++x) {
        EXPECT_NEAR(st.q(0, x, 1, 1), 1.0, kExact);
        EXPECT_EQ(st.q(0, x, 2, 0), 0.0);
    }
}

TEST(QwiStep, BalancedActionsKeepSubsidy)
{
    QwiState st({2});
    st.lambda(0, 0) = 1.0;
    st.lambda(0, 1) = 1.0;
    for (std::size_t x = 0; x < 2; ++x) st.q(0, x, x, 1) = st.q(0, x, x, 0) = 3.0;
    // alpha = 0 leaves Q alone so only the subsidy step acts
    qwi_step(st, {0, 0, 1.0, 1}, {}, 0.0, 0.7, 0.9);
    EXPECT_EQ(st.lambda(0, 0), 1.0);
    EXPECT_EQ(st.lambda(0, 1), 1.0);
}

TEST(Storage, TrackedEntriesPerTable)
{
    const std::vector<std::size_t> sizes{3, 7};
    EXPECT_EQ(QgiState(sizes).tracked_entries(), 9u + 3u + 49u + 7u);
    EXPECT_EQ(RestartState(sizes).tracked_entries(), 2u * (9u + 49u));
    EXPECT_EQ(QwiState(sizes).tracked_entries(), 2u * (9u + 49u) + 10u);
}

TEST(Extract, Examples)
{
    QgiState q({5});
    const double m[] = {9, 8.34, 7.89, 7.627, 7.362};
    for (std::size_t s = 0; s < 5; ++s) q.m(0, s) = m[s];
    const auto idx = extract_indices(LearnerState(q), 0.9);
    for (std::size_t s = 0; s < 5; ++s) EXPECT_NEAR(idx[0][s], 0.1 * m[s], kExact);

    RestartState r({1});
    r.q(0, 0, 0, 1) = 10.0;
    EXPECT_NEAR(extract_indices(LearnerState(r), 0.9)[0][0], 1.0, kExact);

    QwiState w({1});
    w.lambda(0, 0) = 0.5;
    EXPECT_EQ(extract_indices(LearnerState(w), 0.9)[0][0], 0.5);
}

// Counters follow the closed forms for every horizon.
class CounterClosedForm : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(CounterClosedForm, HomogeneousToy)
{
    const std::uint64_t t = GetParam();
    constexpr std::uint64_t n = 5, k = 5, phi = 10;
    const auto qgi = train_tabular(toy_env(k), toy_config(Algorithm::qgi, t, 1));
    EXPECT_EQ(qgi.counters.q_updates, t * n);
    EXPECT_EQ(qgi.counters.index_updates, (t / phi) * n);
    EXPECT_EQ(qgi.counters.steps, t);
    const auto rst = train_tabular(toy_env(k), toy_config(Algorithm::restart, t, 1));
    EXPECT_EQ(rst.counters.q_updates, 2 * t * n);
    EXPECT_EQ(rst.counters.index_updates, 0u);
    const auto qwi = train_tabular(toy_env(k), toy_config(Algorithm::qwi, t, 1));
    EXPECT_EQ(qwi.counters.q_updates, t * k * n);
    EXPECT_EQ(qwi.counters.index_updates, (t / phi) * n);
}

INSTANTIATE_TEST_SUITE_P(Horizons, CounterClosedForm, ::testing::Values(1u, 17u, 1000u));

TEST(TrainTabular, ZeroStepsReturnsInitialState)
{
    const auto run = train_tabular(toy_env(), toy_config(Algorithm::qgi, 0, 0));
    EXPECT_TRUE(run.log.empty());
    for (double v : flatten(extract_indices(run.learner, 0.9))) EXPECT_EQ(v, 0.0);
}

TEST(TrainTabular, LogHasOneRowPerStep)
{
    const auto run = train_tabular(toy_env(), toy_config(Algorithm::qgi, 2000, 0));
    ASSERT_EQ(run.log.size(), 2000u);
    EXPECT_EQ(run.log.back().step, 2000u);
    for (std::size_t i = 1; i < run.log.size(); ++i) EXPECT_GE(run.log[i].counters.q_updates, run.log[i - 1].counters.q_updates);
}

TEST(TrainTabular, SameSeedIsBitIdentical)
{
    for (Algorithm algo : {Algorithm::qgi, Algorithm::restart, Algorithm::qwi}) {
        const auto a = train_tabular(toy_env(), toy_config(algo, 3000, 9));
        const auto b = train_tabular(toy_env(), toy_config(algo, 3000, 9));
        ASSERT_EQ(a.log.size(), b.log.size());
        for (std::size_t i = 0; i < a.log.size(); ++i) {
            EXPECT_EQ(a.log[i].arm, b.log[i].arm);
            EXPECT_EQ(a.log[i].indices, b.log[i].indices);
            EXPECT_EQ(a.log[i].bre, b.log[i].bre);
        }
    }
}

TEST(TrainTabular, HeterogeneousTablesAndSharingGuard)
{
    const auto env = BanditInstance::heterogeneous(two_state_pair(), 0.9);
    auto cfg = toy_config(Algorithm::qgi, 100, 0);
    const auto run = train_tabular(env, cfg);
    EXPECT_EQ(num_tables(run.learner), 2u);
    cfg.sharing = TableSharing::shared;
    EXPECT_THROW(train_tabular(env, cfg), ConfigError);
    cfg.algo = Algorithm::dgn;
    cfg.sharing = TableSharing::automatic;
    EXPECT_THROW(train_tabular(env, cfg), ConfigError);
}

TEST(TrainTabular, QgiSeedSweepReachesOracle)
{
    // last-200 mean within 0.025 of the exact index on most seeds
    constexpr double delta = 0.025;
    const auto exact = gittins_exact(*toy_arm(), 0.9);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto run = train_tabular(toy_env(), toy_config(Algorithm::qgi, 20000, seed));
        double worst = 0;
        for (std::size_t s = 0; s < 5; ++s) worst = std::max(worst, std::abs(run.tail_mean[0][s] - exact.g_star[s]));
        within += worst <= delta ? 1 : 0;
    }
    EXPECT_GE(within, 3);
}

TEST(TrainTabular, QwiMajorityOfSeeds)
{
    constexpr double delta = 0.05;
    const auto exact = gittins_exact(*toy_arm(), 0.9);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = toy_config(Algorithm::qwi, 20000, seed);
        cfg.record_log = false;
        const auto run = train_tabular(toy_env(), cfg);
        within += max_index_error(run.tail_mean, std::span<const RetirementSolution>(&exact, 1)) <= delta ? 1 : 0;
    }
    EXPECT_GE(within, 6);
}

TEST(TrainTabular, BreFallsBelowTenthOfInitial)
{
    const auto run = train_tabular(toy_env(), toy_config(Algorithm::qgi, 20000, 0));
    const auto exact = gittins_exact(*toy_arm(), 0.9);
    double initial = 0;
    for (double m : exact.m_star) initial += m / 5.0;
    EXPECT_LT(run.log.back().bre, 0.1 * initial);
}
