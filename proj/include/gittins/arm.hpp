#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gittins/error.hpp"
#include "gittins/random.hpp"

namespace gittins {

/// One arm's Markov chain under the active action: row-stochastic transition
/// matrix P(j|s,1) and the reward r(s) earned when the arm is pulled in s.
///
/// Rows are validated on construction and the object is immutable afterwards.
/// A sparse copy of each row is kept because value iteration and sampling only
/// need the nonzero entries (age-state scheduling arms have two per row).
class ArmModel {
public:
    struct Entry {
        std::size_t state;
        double probability;
    };

    ArmModel(std::size_t num_states, std::vector<double> transition, std::vector<double> reward)
        : n_(num_states), transition_(std::move(transition)), reward_(std::move(reward))
    {
        detail::require(n_ > 0, "ArmModel: need at least one state");
        detail::require(transition_.size() == n_ * n_, "ArmModel: transition must be N*N");
        detail::require(reward_.size() == n_, "ArmModel: reward must have N entries");
        for (double r : reward_) detail::require(std::isfinite(r), "ArmModel: reward entries must be finite");

        rows_.resize(n_);
        for (std::size_t s = 0; s < n_; ++s) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                const double p = transition_[s * n_ + j];
                detail::require(p >= 0.0 && p <= 1.0, "ArmModel: transition entries must lie in [0,1] (row " + std::to_string(s) + ")");
                sum += p;
                if (p > 0.0) rows_[s].push_back({j, p});
            }
            detail::require(std::abs(sum - 1.0) <= 1e-12, "ArmModel: transition row " + std::to_string(s) + " does not sum to 1");
        }
    }

    [[nodiscard]] std::size_t num_states() const noexcept { return n_; }
    [[nodiscard]] double p(std::size_t from, std::size_t to) const { return transition_.at(from * n_ + to); }
    [[nodiscard]] std::span<const double> row(std::size_t s) const { return {transition_.data() + s * n_, n_}; }
    [[nodiscard]] std::span<const Entry> nonzeros(std::size_t s) const { return rows_.at(s); }
    [[nodiscard]] double reward(std::size_t s) const { return reward_.at(s); }
    [[nodiscard]] std::span<const double> rewards() const noexcept { return reward_; }

    [[nodiscard]] std::size_t sample_next(std::size_t s, RandomSource& rng) const
    {
        const auto& nz = rows_.at(s);
        const double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < nz.size(); ++k) {
            acc += nz[k].probability;
            if (u < acc) return nz[k].state;
        }
        return nz.back().state;
    }

private:
    std::size_t n_;
    std::vector<double> transition_;
    std::vector<double> reward_;
    std::vector<std::vector<Entry>> rows_;
};

using ArmModelPtr = std::shared_ptr<const ArmModel>;

struct StepResult {
    std::size_t state;      ///< state the arm was pulled in
    std::size_t next_state;
    double reward;
};

/// K rested arms with a common discount. Exactly one arm moves per step.
///
/// Homogeneous instances hold a single shared model (one learner table);
/// heterogeneous instances hold one model per arm (one table per arm).
class BanditInstance {
public:
    static BanditInstance homogeneous(ArmModelPtr model, std::size_t num_arms, double gamma,
                                      std::vector<std::size_t> initial_states = {})
    {
        detail::require(model != nullptr, "BanditInstance: null model");
        detail::require(num_arms > 0, "BanditInstance: need at least one arm");
        return BanditInstance({std::move(model)}, num_arms, true, gamma, std::move(initial_states));
    }

    static BanditInstance heterogeneous(std::vector<ArmModelPtr> models, double gamma,
                                        std::vector<std::size_t> initial_states = {})
    {
        detail::require(!models.empty(), "BanditInstance: need at least one arm");
        for (const auto& m : models) detail::require(m != nullptr, "BanditInstance: null model");
        const std::size_t k = models.size();
        return BanditInstance(std::move(models), k, false, gamma, std::move(initial_states));
    }

    [[nodiscard]] std::size_t num_arms() const noexcept { return states_.size(); }
    [[nodiscard]] bool is_homogeneous() const noexcept { return homogeneous_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] std::size_t num_models() const noexcept { return models_.size(); }
    [[nodiscard]] const ArmModel& model_of(std::size_t arm) const { return *models_.at(homogeneous_ ? 0 : arm); }
    [[nodiscard]] const ArmModel& model(std::size_t index) const { return *models_.at(index); }
    [[nodiscard]] const ArmModelPtr& model_ptr(std::size_t index) const { return models_.at(index); }
    [[nodiscard]] std::size_t model_index(std::size_t arm) const { return homogeneous_ ? 0 : arm; }
    [[nodiscard]] std::size_t state(std::size_t arm) const { return states_.at(arm); }
    [[nodiscard]] std::span<const std::size_t> states() const noexcept { return states_; }

    void reset(std::vector<std::size_t> states)
    {
        detail::require(states.size() == num_arms(), "BanditInstance: wrong number of initial states");
        for (std::size_t i = 0; i < states.size(); ++i)
            detail::require(states[i] < model_of(i).num_states(), "BanditInstance: initial state out of range");
        states_ = std::move(states);
    }

    /// Pull `arm`: its state is replaced by a draw from its transition row,
    /// the reward is r(current state). Every other arm stays where it is.
    StepResult step(std::size_t arm, RandomSource& rng)
    {
        detail::require(arm < num_arms(), "step_arm: arm index " + std::to_string(arm) + " out of range");
        const ArmModel& m = model_of(arm);
        const std::size_t s = states_[arm];
        const std::size_t next = m.sample_next(s, rng);
        states_[arm] = next;
        return {s, next, m.reward(s)};
    }

private:
    BanditInstance(std::vector<ArmModelPtr> models, std::size_t k, bool homogeneous, double gamma,
                   std::vector<std::size_t> initial)
        : models_(std::move(models)), homogeneous_(homogeneous), gamma_(gamma)
    {
        detail::require(gamma > 0.0 && gamma < 1.0, "BanditInstance: gamma must lie in (0,1)");
        if (initial.empty()) initial.assign(k, 0);
        states_.assign(k, 0);
        reset(std::move(initial));
    }

    std::vector<ArmModelPtr> models_;
    bool homogeneous_;
    double gamma_;
    std::vector<std::size_t> states_;
};

inline StepResult step_arm(BanditInstance& instance, std::size_t arm, RandomSource& rng)
{
    return instance.step(arm, rng);
}

// ---------------------------------------------------------------------------
// Reference arms used throughout the tests and experiments.

/// Five-state rested "restart" chain: from every state, back to 0 w.p. 0.3,
/// forward w.p. 0.7 (state 4 loops on itself). r(s) = 0.9^(s+1).
inline ArmModelPtr toy_arm()
{
    constexpr std::size_t n = 5;
    std::vector<double> p(n * n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        p[s * n + 0] = 0.3;
        p[s * n + std::min(s + 1, n - 1)] += 0.7;
    }
    std::vector<double> r(n);
    for (std::size_t s = 0; s < n; ++s) r[s] = std::pow(0.9, static_cast<double>(s + 1));
    return std::make_shared<const ArmModel>(n, std::move(p), std::move(r));
}

/// The two heterogeneous two-state arms with rewards (1, 10).
inline std::vector<ArmModelPtr> two_state_pair()
{
    return {
        std::make_shared<const ArmModel>(2, std::vector<double>{0.3, 0.7, 0.7, 0.3}, std::vector<double>{1.0, 10.0}),
        std::make_shared<const ArmModel>(2, std::vector<double>{0.9, 0.1, 0.1, 0.9}, std::vector<double>{1.0, 10.0}),
    };
}

/// Random arm whose transition rows are symmetric Dirichlet(concentration)
/// draws; r(s) = 5 + (s+1)/10 by default.
inline ArmModelPtr dirichlet_arm(std::size_t n, double concentration, RandomSource& rng, std::vector<double> reward = {})
{
    detail::require(n > 0 && concentration > 0.0, "dirichlet_arm: bad parameters");
    std::gamma_distribution<double> gamma_draw(concentration, 1.0);
    std::vector<double> p(n * n);
    for (std::size_t s = 0; s < n; ++s) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += (p[s * n + j] = gamma_draw(rng.engine()));
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) acc += (p[s * n + j] /= sum);
        p[s * n + n - 1] = std::max(0.0, 1.0 - acc);
    }
    if (reward.empty()) {
        reward.resize(n);
        for (std::size_t s = 0; s < n; ++s) reward[s] = 5.0 + static_cast<double>(s + 1) / 10.0;
    }
    return std::make_shared<const ArmModel>(n, std::move(p), std::move(reward));
}

} // namespace gittins
