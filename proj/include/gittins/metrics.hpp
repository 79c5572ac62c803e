#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gittins/error.hpp"
#include "gittins/oracle.hpp"
#include "gittins/tabular.hpp"

namespace gittins {

/// Bellman relative error: mean over (table, state) of |V_t(s) - V*(s)| with
/// V*(s) = M(s) from the oracle and V_t(s) the learner's diagonal value.
inline double compute_bre(const LearnerState& learner, std::span<const RetirementSolution> oracle)
{
    detail::require(num_tables(learner) == oracle.size(), "compute_bre: one oracle solution per table expected");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < oracle.size(); ++t) {
        const auto& star = oracle[t].m_star;
        const std::size_t n = std::visit([&](const auto& l) { return l.num_states(t); }, learner);
        detail::require(star.size() == n, "compute_bre: oracle/table state count mismatch");
        for (std::size_t s = 0; s < n; ++s) {
            total += std::abs(diagonal_value(learner, t, s) - star[s]);
            ++count;
        }
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

/// A choice is optimal when the chosen arm's exact index attains the maximum
/// over available arms (within `tol`); any member of the argmax set counts.
template <class Available>
bool is_optimal_choice(std::span<const double> oracle_index, Available&& available, std::size_t chosen, double tol)
{
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < oracle_index.size(); ++i)
        if (available(i)) best = std::max(best, oracle_index[i]);
    return oracle_index[chosen] >= best - tol;
}

/// One recorded decision for offline suboptimality accounting.
struct Decision {
    std::size_t chosen = 0;
    std::vector<double> oracle_index;   ///< exact index of every arm's current state
    std::vector<std::uint8_t> available; ///< empty means every arm was available
};

/// Running percentage of suboptimal choices.
class SuboptimalTracker {
public:
    void record(bool optimal)
    {
        ++total_;
        if (!optimal) ++wrong_;
    }
    [[nodiscard]] double percent() const { return total_ == 0 ? 0.0 : 100.0 * static_cast<double>(wrong_) / static_cast<double>(total_); }
    [[nodiscard]] std::uint64_t total() const noexcept { return total_; }
    [[nodiscard]] std::uint64_t wrong() const noexcept { return wrong_; }

private:
    std::uint64_t total_ = 0;
    std::uint64_t wrong_ = 0;
};

inline std::vector<double> suboptimal_pct(std::span<const Decision> log, double tol = 1e-9)
{
    std::vector<double> out;
    out.reserve(log.size());
    SuboptimalTracker tracker;
    for (const Decision& d : log) {
        detail::require(d.chosen < d.oracle_index.size(), "suboptimal_pct: chosen arm out of range");
        detail::require(d.available.empty() || d.available.size() == d.oracle_index.size(), "suboptimal_pct: availability mask size mismatch");
        auto avail = [&](std::size_t i) { return d.available.empty() || d.available[i] != 0; };
        tracker.record(is_optimal_choice(d.oracle_index, avail, d.chosen, tol));
        out.push_back(tracker.percent());
    }
    return out;
}

/// Mean of the last `capacity` pushed vectors (all of equal length).
class TailMean {
public:
    explicit TailMean(std::size_t capacity = 200) : capacity_(capacity) {}

    void push(const std::vector<double>& values)
    {
        if (ring_.size() < capacity_) {
            ring_.push_back(values);
        } else {
            ring_[next_] = values;
            next_ = (next_ + 1) % capacity_;
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return ring_.size(); }

    [[nodiscard]] std::vector<double> mean() const
    {
        if (ring_.empty()) return {};
        std::vector<double> acc(ring_.front().size(), 0.0);
        for (const auto& v : ring_)
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
        for (double& a : acc) a /= static_cast<double>(ring_.size());
        return acc;
    }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<std::vector<double>> ring_;
};

/// Flattens an IndexTable table-major.
inline std::vector<double> flatten(const IndexTable& table)
{
    std::vector<double> out;
    for (const auto& row : table) out.insert(out.end(), row.begin(), row.end());
    return out;
}

/// Reshapes a flat vector to the shape of `like`.
inline IndexTable unflatten(const std::vector<double>& flat, const IndexTable& like)
{
    IndexTable out(like.size());
    std::size_t k = 0;
    for (std::size_t t = 0; t < like.size(); ++t) {
        out[t].assign(flat.begin() + static_cast<std::ptrdiff_t>(k), flat.begin() + static_cast<std::ptrdiff_t>(k + like[t].size()));
        k += like[t].size();
    }
    return out;
}

/// Largest |learned - exact| over every (table, state).
inline double max_index_error(const IndexTable& learned, std::span<const RetirementSolution> oracle)
{
    double worst = 0.0;
    for (std::size_t t = 0; t < learned.size(); ++t)
        for (std::size_t s = 0; s < learned[t].size(); ++s) {
            const double e = std::abs(learned[t][s] - oracle[t].g_star[s]);
            worst = std::isnan(e) ? std::numeric_limits<double>::infinity() : std::max(worst, e);
        }
    return worst;
}

} // namespace gittins
