#include <gtest/gtest.h>

#include <sstream>

#include "common/gradient_check.hpp"
#include "gittins/deep/adam.hpp"
#include "gittins/deep/dgn.hpp"
#include "gittins/deep/mlp.hpp"
#include "gittins/deep/replay.hpp"
#include "gittins/deep/serialize.hpp"

using namespace gittins;
using namespace gittins::deep;

namespace {

constexpr double kForwardTol = 1e-6;
constexpr double kExact = 1e-12;

/// Forward pass written with plain loops over the flat layout.
double hand_forward(const Mlp& net, const std::vector<double>& input)
{
    const auto& dims = net.dims();
    const auto p = net.values();
    std::vector<double> a = input;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::size_t in = dims[l], out = dims[l + 1];
        std::vector<double> z(out, 0.0);
        for (std::size_t i = 0; i < out; ++i) {
            for (std::size_t j = 0; j < in; ++j) z[i] += p[off + j * out + i] * a[j];
            z[i] += p[off + out * in + i];
            if (l + 2 < dims.size()) z[i] = std::max(0.0, z[i]);
        }
        off += out * in + out;
        a = std::move(z);
    }
    return a[0];
}

DgnConfig toy_dgn() { return DgnConfig{}; }

} // namespace

TEST(Mlp, ParameterCountAndInit)
{
    RandomSource rng(1);
    const auto net = Mlp::seeded(Mlp::standard_dims(10), rng);
    EXPECT_EQ(net.size(), 10u * 64 + 64 + 64 * 128 + 128 + 128 * 64 + 64 + 64 + 1);
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims()[l]));
        EXPECT_LE(net.weight(l).cwiseAbs().maxCoeff(), bound);
        EXPECT_LE(net.bias(l).cwiseAbs().maxCoeff(), bound);
    }
    EXPECT_THROW(Mlp({4, 3}), InvalidInput);
}

TEST(Mlp, ZeroNetworkOutputsZero)
{
    const Mlp net(Mlp::standard_dims(4));
    EXPECT_EQ(net.forward_one(Eigen::VectorXd::Constant(4, 0.7)), 0.0);
}

TEST(Mlp, ForwardMatchesHandRolled)
{
    RandomSource rng(2);
    const auto net = Mlp::seeded(Mlp::standard_dims(10), rng);
    const StateEncoder enc(5, Encoding::one_hot);
    for (std::size_t s = 0; s < 5; ++s)
        for (std::size_t x = 0; x < 5; ++x) {
            const Eigen::VectorXd in = enc.encode(s, x);
            const double a = mlp_forward(net, enc, s, x);
            EXPECT_EQ(a, mlp_forward(net, enc, s, x));
            EXPECT_NEAR(a, hand_forward(net, {in.data(), in.data() + in.size()}), kForwardTol);
        }
}

TEST(StateEncoder, Layouts)
{
    const StateEncoder one_hot(4, Encoding::one_hot);
    const Eigen::VectorXd v = one_hot.encode(1, 3);
    EXPECT_EQ(v.size(), 8);
    EXPECT_EQ(v.sum(), 2.0);
    EXPECT_EQ(v(1), 1.0);
    EXPECT_EQ(v(4 + 3), 1.0);
    const StateEncoder pair(4, Encoding::scalar_pair);
    EXPECT_EQ(pair.input_dim(), 2u);
    EXPECT_THROW(pair.encode(4, 0), InvalidInput);
}

TEST(MlpGradient, ZeroResidualGivesZeroGradient)
{
    RandomSource rng(3);
    const auto net = Mlp::seeded({3, 5, 4, 1}, rng);
    Eigen::MatrixXd in;
    Eigen::VectorXd t;
    testing_support::random_batch(3, 6, rng, in, t);
    t = net.forward(in);
    const auto [loss, grad] = mlp_gradient(net, in, t);
    EXPECT_EQ(loss, 0.0);
    for (double g : grad) EXPECT_EQ(g, 0.0);
}

TEST(MlpGradient, LinearSingleParameter)
{
    Mlp net({1, 1});
    net.values()[0] = 0.5; // w
    net.values()[1] = 0.0; // b
    Eigen::MatrixXd in(1, 1);
    in(0, 0) = 3.0;
    Eigen::VectorXd t(1);
    t(0) = 2.0;
    const auto [loss, grad] = mlp_gradient(net, in, t);
    EXPECT_NEAR(loss, 0.25, kExact);
    EXPECT_NEAR(grad[0], -2.0 * (2.0 - 0.5 * 3.0) * 3.0, kExact);
}

TEST(MlpGradient, FiniteDifferencesSmallNet)
{
    RandomSource rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const auto net = Mlp::seeded({6, 16, 12, 8, 1}, rng);
        Eigen::MatrixXd in;
        Eigen::VectorXd t;
        testing_support::random_batch(6, 8, rng, in, t);
        const auto report = testing_support::finite_difference_check(net, in, t);
        EXPECT_EQ(report.failures, 0u) << "worst relative error " << report.worst_relative;
    }
}

TEST(MlpGradient, FiniteDifferencesStandardNetSampled)
{
    RandomSource rng(5);
    const StateEncoder enc(5, Encoding::one_hot);
    const auto net = Mlp::seeded(Mlp::standard_dims(enc.input_dim()), rng);
    Eigen::MatrixXd in(static_cast<Eigen::Index>(enc.input_dim()), 32);
    Eigen::VectorXd t(32);
    for (Eigen::Index j = 0; j < 32; ++j) {
        enc.encode(rng.uniform_index(5), rng.uniform_index(5), in.col(j));
        t(j) = rng.uniform(0.0, 10.0);
    }
    std::vector<std::size_t> coords;
    for (int i = 0; i < 300; ++i) coords.push_back(rng.uniform_index(net.size()));
    const auto report = testing_support::finite_difference_check(net, in, t, coords);
    EXPECT_EQ(report.failures, 0u) << "worst relative error " << report.worst_relative;
}

TEST(Adam, ZeroGradientKeepsParameters)
{
    std::vector<double> p{1.0, -2.0};
    AdamState a(2, 0.01);
    a.m = {0.5, 0.5};
    a.v = {0.1, 0.1};
    const std::vector<double> g{0.0, 0.0};
    adam_apply(p, a, g);
    EXPECT_NEAR(a.m[0], 0.45, kExact);
    EXPECT_NEAR(a.v[0], 0.0999, kExact);
    // the decayed moment still moves parameters; with zero moments nothing moves
    AdamState fresh(2, 0.01);
    std::vector<double> q{1.0, -2.0};
    adam_apply(q, fresh, g);
    EXPECT_EQ(q[0], 1.0);
    EXPECT_EQ(q[1], -2.0);
}

TEST(Adam, FirstStepHandComputed)
{
    std::vector<double> p{0.3, 0.3};
    AdamState a(2, 5e-3);
    const std::vector<double> g{0.2, -4.0};
    adam_apply(p, a, g);
    for (int i = 0; i < 2; ++i) {
        const double m = 0.1 * g[i] / (1.0 - 0.9);
        const double v = 0.001 * g[i] * g[i] / (1.0 - 0.999);
        EXPECT_NEAR(p[i], 0.3 - 5e-3 * m / (std::sqrt(v) + 1e-8), kExact);
    }
}

TEST(Adam, ConstantGradientStepApproachesStepSize)
{
    std::vector<double> p{0.0};
    AdamState a(1, 1e-3);
    const std::vector<double> g{7.5};
    double prev = 0.0;
    for (int i = 0; i < 3000; ++i) {
        prev = p[0];
        adam_apply(p, a, g);
    }
    EXPECT_NEAR(std::abs(p[0] - prev), 1e-3, 1e-6);
    std::vector<double> wrong{1.0, 2.0};
    EXPECT_THROW(adam_apply(wrong, a, g), InvalidInput);
}

TEST(Replay, FifoEvictionAndSampling)
{
    ReplayBuffer buf(3);
    for (std::size_t i = 0; i < 5; ++i) buf.push({0, i, 0.0, i + 1});
    EXPECT_EQ(buf.size(), 3u);
    EXPECT_EQ(buf.at(0).state, 2u);
    EXPECT_EQ(buf.at(2).state, 4u);
    RandomSource rng(6);
    std::array<int, 5> seen{};
    for (const auto& e : buf.sample(3000, rng)) ++seen[e.state];
    EXPECT_EQ(seen[0] + seen[1], 0);
    for (int i = 2; i < 5; ++i) EXPECT_NEAR(seen[i] / 3000.0, 1.0 / 3.0, 0.04);
    EXPECT_THROW(ReplayBuffer(0), InvalidInput);
}

TEST(Dgn, TargetExamples)
{
    Mlp net({2, 1});
    net.values()[2] = 2.0; // bias: the net outputs 2 everywhere
    const StateEncoder enc(1, Encoding::one_hot);
    const ExperienceTuple e{0, 0, 1.0, 0};
    std::vector<double> m{3.0};
    EXPECT_NEAR(dgn_target(e, 0, net, enc, m, 0.9), 3.7, kExact);
    m[0] = 1.0;
    EXPECT_NEAR(dgn_target(e, 0, net, enc, m, 0.9), 2.8, kExact);
    EXPECT_EQ(dgn_target(e, 0, net, enc, m, 0.0), 1.0);
}

TEST(Dgn, SoftUpdateExamples)
{
    Mlp target({1, 1}), online({1, 1});
    online.values()[0] = 2.0;
    soft_update(target, online, 1.0);
    EXPECT_EQ(target.values()[0], 0.0);
    soft_update(target, online, 0.5);
    EXPECT_EQ(target.values()[0], 1.0);
    soft_update(target, online, 0.0);
    EXPECT_EQ(target.values()[0], 2.0);
}

TEST(Dgn, IndexUpdateExamples)
{
    Mlp net({2, 1});
    net.values()[2] = 4.0;
    const StateEncoder enc(1, Encoding::one_hot);
    std::vector<double> m{0.0};
    dgn_m_update(m, net, enc, 0.0);
    EXPECT_EQ(m[0], 0.0);
    dgn_m_update(m, net, enc, 0.5);
    EXPECT_EQ(m[0], 2.0);
    dgn_m_update(m, net, enc, 1.0);
    EXPECT_EQ(m[0], 4.0);
}

TEST(Dgn, NoLearningBeforeBufferExceedsBatch)
{
    auto cfg = toy_dgn();
    const auto env = BanditInstance::homogeneous(toy_arm(), 5, 0.9);
    const auto run = train_dgn(env, cfg, EpsilonSchedule::fixed(1.0), cfg.batch, 3);
    EXPECT_EQ(run.learn_steps, 0u);
    RandomSource init = RandomSource(3).derive(3);
    const auto fresh = Mlp::seeded(cfg.dims(10), init);
    for (std::size_t i = 0; i < fresh.size(); ++i) ASSERT_EQ(run.online.values()[i], fresh.values()[i]);
}

TEST(Dgn, LearnStepAndTargetEvaluationCounts)
{
    const auto cfg = toy_dgn();
    const auto env = BanditInstance::homogeneous(toy_arm(), 5, 0.9);
    for (std::uint64_t steps : {33u, 40u, 51u, 400u}) {
        const auto run = train_dgn(env, cfg, EpsilonSchedule::fixed(1.0), steps, 1, 1, 200, false);
        const std::uint64_t expected = expected_learn_steps(steps, cfg.batch, cfg.sync_period);
        std::uint64_t counted = 0;
        for (std::uint64_t n = 1; n <= steps; ++n) counted += n % cfg.sync_period == 0 && n > cfg.batch ? 1 : 0;
        EXPECT_EQ(expected, counted);
        EXPECT_EQ(run.learn_steps, expected);
        EXPECT_EQ(run.counters.q_updates, expected * cfg.batch * 5);
        EXPECT_EQ(run.counters.index_updates, (steps / 5) * 5);
    }
}

TEST(Dgn, RejectsHeterogeneousBandit)
{
    EXPECT_THROW(train_dgn(BanditInstance::heterogeneous(two_state_pair(), 0.9), toy_dgn(), EpsilonSchedule::fixed(1.0), 10, 0),
                 ConfigError);
}

TEST(Serialize, RoundTripIsExact)
{
    RandomSource rng(8);
    const auto net = Mlp::seeded(Mlp::standard_dims(10), rng);
    std::stringstream ss;
    save_mlp(ss, net, {net.dims(), Encoding::one_hot, 5, 8});
    MlpHeader h;
    const Mlp back = load_mlp(ss, &h);
    EXPECT_EQ(h.dims, net.dims());
    EXPECT_EQ(h.num_states, 5u);
    EXPECT_EQ(h.seed, 8u);
    ASSERT_EQ(back.size(), net.size());
    for (std::size_t i = 0; i < net.size(); ++i) ASSERT_EQ(back.values()[i], net.values()[i]);
}

TEST(Serialize, RejectsCorruptInput)
{
    std::stringstream bad("gittins-mlp 2\n");
    EXPECT_THROW(load_mlp(bad), InvalidInput);
    std::stringstream truncated("gittins-mlp 1\ndims 2 1\nencoding one_hot\nstates 1\nseed 0\nparams 3\n0.5\n");
    EXPECT_THROW(load_mlp(truncated), InvalidInput);
}
