#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "gittins/error.hpp"
#include "gittins/random.hpp"
#include "gittins/scheduling/jobs.hpp"
#include "gittins/select.hpp"

namespace gittins::scheduling {

struct ServeResult {
    bool completed = false;
    double reward = 0.0;
    std::size_t state = 0;      ///< state the job was served in
    std::size_t next_state = 0; ///< 0 when completed
};

/// A batch of K jobs on one preemptive server.
///
/// Each job's service requirement tau (in quanta) is drawn when the episode
/// starts. Distribution jobs draw tau from their law; hazard jobs draw it by
/// running their per-serve completion coin flips ahead of time, which gives
/// the same law. Holding tau fixed lets a second policy be replayed on the
/// very same batch.
class JobBatchEnv {
public:
    explicit JobBatchEnv(std::vector<JobSpec> jobs, std::size_t hazard_states = default_hazard_states())
        : jobs_(std::move(jobs)), hazard_states_(hazard_states)
    {
        detail::require(!jobs_.empty(), "JobBatchEnv: need at least one job");
        detail::require(hazard_states_ >= 2, "JobBatchEnv: hazard state cap must be >= 2");
        for (const JobSpec& j : jobs_) {
            if (const auto* h = std::get_if<HazardSpec>(&j)) {
                h->validate();
                detail::require(h->kind != HazardKind::constant || h->rho1 > 0.0, "JobBatchEnv: constant hazard must be positive");
            }
            hazards_.push_back(completion_hazards(j, hazard_states_));
        }
        tau_.assign(jobs_.size(), 1);
        age_.assign(jobs_.size(), 0);
        done_.assign(jobs_.size(), 1);
    }

    [[nodiscard]] std::size_t num_jobs() const noexcept { return jobs_.size(); }
    [[nodiscard]] const JobSpec& job(std::size_t i) const { return jobs_.at(i); }
    [[nodiscard]] std::span<const JobSpec> jobs() const noexcept { return jobs_; }
    [[nodiscard]] std::size_t hazard_states() const noexcept { return hazard_states_; }
    [[nodiscard]] std::size_t num_states(std::size_t i) const { return hazards_.at(i).size(); }
    [[nodiscard]] std::uint64_t episode() const noexcept { return episode_; }

    /// Starts a new episode with freshly drawn service requirements.
    void reset(RandomSource& rng)
    {
        std::vector<std::size_t> tau(jobs_.size());
        for (std::size_t i = 0; i < jobs_.size(); ++i) tau[i] = draw_requirement(i, rng);
        reset_with(std::move(tau));
    }

    /// Starts a new episode with the given requirements (quanta per job).
    void reset_with(std::vector<std::size_t> service_times)
    {
        detail::require(service_times.size() == jobs_.size(), "JobBatchEnv: one service time per job expected");
        for (std::size_t t : service_times) detail::require(t >= 1, "JobBatchEnv: service time must be >= 1");
        tau_ = std::move(service_times);
        age_.assign(jobs_.size(), 0);
        done_.assign(jobs_.size(), 0);
        remaining_ = jobs_.size();
        ++episode_;
    }

    [[nodiscard]] std::span<const std::size_t> service_times() const noexcept { return tau_; }
    [[nodiscard]] std::size_t age(std::size_t i) const { return age_.at(i); }
    [[nodiscard]] bool done(std::size_t i) const { return done_.at(i) != 0; }
    [[nodiscard]] bool all_done() const noexcept { return remaining_ == 0; }
    [[nodiscard]] std::size_t remaining() const noexcept { return remaining_; }

    /// Learner/oracle state of job i (0 once finished).
    [[nodiscard]] std::size_t state(std::size_t i) const
    {
        if (done(i)) return 0;
        return state_for_age(i, age_[i]);
    }

    ServeResult serve_step(std::size_t i)
    {
        detail::require(i < jobs_.size(), "serve_step: job index out of range");
        detail::require(!done(i), "serve_step: job " + std::to_string(i) + " is already finished");
        ServeResult res;
        res.state = state(i);
        ++age_[i];
        if (age_[i] == tau_[i]) {
            done_[i] = 1;
            --remaining_;
            res.completed = true;
            res.reward = 1.0;
            res.next_state = 0;
        } else {
            res.next_state = state(i);
        }
        return res;
    }

private:
    [[nodiscard]] std::size_t state_for_age(std::size_t i, std::size_t age) const
    {
        const std::size_t n = hazards_[i].size();
        if (n == 2) return 1;
        return std::min(age + 1, n - 1);
    }

    std::size_t draw_requirement(std::size_t i, RandomSource& rng) const
    {
        if (const auto* d = std::get_if<ServiceDistSpec>(&jobs_[i])) return sample_service_time(*d, rng);
        const auto& h = hazards_[i];
        for (std::size_t age = 0;; ++age) {
            const double p = h[state_for_age(i, age)];
            if (p >= 1.0 || rng.uniform() < p) return age + 1;
        }
    }

    std::vector<JobSpec> jobs_;
    std::size_t hazard_states_;
    std::vector<std::vector<double>> hazards_;
    std::vector<std::size_t> tau_;
    std::vector<std::size_t> age_;
    std::vector<std::uint8_t> done_;
    std::size_t remaining_ = 0;
    std::uint64_t episode_ = 0;
};

struct TraceStep {
    std::uint64_t step = 0;        ///< 1-based within the episode
    std::size_t job = 0;
    std::size_t state = 0;
    bool completed = false;
    std::size_t unfinished = 0;    ///< jobs not yet done before this serve
    std::size_t age_spread = 0;    ///< max - min age over unfinished jobs before this serve
};

struct EpisodeTrace {
    std::vector<TraceStep> steps;
    std::vector<std::uint64_t> completion_times; ///< T_i, 1-based step of job i's completion

    [[nodiscard]] std::uint64_t flowtime() const
    {
        std::uint64_t total = 0;
        for (auto t : completion_times) total += t;
        return total;
    }

    /// Sum over steps of the number of unfinished jobs; equals flowtime().
    [[nodiscard]] std::uint64_t flowtime_by_steps() const
    {
        std::uint64_t total = 0;
        for (const auto& s : steps) total += s.unfinished;
        return total;
    }

    [[nodiscard]] double total_reward() const
    {
        double r = 0.0;
        for (const auto& s : steps) r += s.completed ? 1.0 : 0.0;
        return r;
    }

    /// True when no job is preempted: each job's serves form one contiguous run.
    [[nodiscard]] bool run_to_completion() const
    {
        for (std::size_t k = 1; k < steps.size(); ++k)
            if (steps[k].job != steps[k - 1].job && !steps[k - 1].completed) return false;
        return true;
    }

    /// Fraction of steps whose unfinished-job age spread is at most `limit`.
    [[nodiscard]] double spread_fraction(std::size_t limit = 1) const
    {
        if (steps.empty()) return 1.0;
        std::size_t ok = 0;
        for (const auto& s : steps) ok += s.age_spread <= limit ? 1 : 0;
        return static_cast<double>(ok) / static_cast<double>(steps.size());
    }
};

/// Per-step hook: (job, serve result) after the serve.
using ServeHook = std::function<void(std::size_t job, const ServeResult&)>;

/// Index used by a policy for job i in state s.
using JobIndexFn = std::function<double(std::size_t job, std::size_t state)>;

/// Serves the current batch until every job is done, epsilon-greedy on
/// `index` over unfinished jobs. `epsilon_at(step)` receives the 1-based step
/// within the episode. The env must have been reset.
template <class EpsilonAt>
EpisodeTrace run_episode(JobBatchEnv& env, const JobIndexFn& index, EpsilonAt&& epsilon_at, RandomSource& rng,
                         const ServeHook& hook = {})
{
    const std::size_t k = env.num_jobs();
    EpisodeTrace trace;
    trace.completion_times.assign(k, 0);
    std::vector<double> current(k);
    std::uint64_t step = 0;
    while (!env.all_done()) {
        ++step;
        std::size_t lo = std::numeric_limits<std::size_t>::max();
        std::size_t hi = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (env.done(i)) continue;
            current[i] = index(i, env.state(i));
            lo = std::min(lo, env.age(i));
            hi = std::max(hi, env.age(i));
        }
        const std::size_t unfinished = env.remaining();
        const std::size_t job = epsilon_greedy_select(std::span<const double>(current), [&](std::size_t i) { return !env.done(i); },
                                                      epsilon_at(step), rng);
        const ServeResult res = env.serve_step(job);
        if (res.completed) trace.completion_times[job] = step;
        trace.steps.push_back({step, job, res.state, res.completed, unfinished, hi - lo});
        if (hook) hook(job, res);
    }
    return trace;
}

inline EpisodeTrace run_episode(JobBatchEnv& env, const JobIndexFn& index, double epsilon, RandomSource& rng)
{
    return run_episode(env, index, [epsilon](std::uint64_t) { return epsilon; }, rng);
}

} // namespace gittins::scheduling
