#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "gittins/error.hpp"

namespace gittins {

/// One observed pull: the arm's table, the state it was pulled in, the reward,
/// and the state it moved to.
struct Transition {
    std::size_t table = 0;
    std::size_t state = 0;
    double reward = 0.0;
    std::size_t next_state = 0;
};

/// Where a passive arm sits (QWI needs these for its passive-action updates).
struct ArmPosition {
    std::size_t table = 0;
    std::size_t state = 0;
};

struct UpdateCounters {
    std::uint64_t q_updates = 0;
    std::uint64_t index_updates = 0;
    std::uint64_t steps = 0;

    UpdateCounters& operator+=(const UpdateCounters& o)
    {
        q_updates += o.q_updates;
        index_updates += o.index_updates;
        steps += o.steps;
        return *this;
    }
    friend bool operator==(const UpdateCounters&, const UpdateCounters&) = default;
};

/// Per-table, per-state index values. indices[t][s].
using IndexTable = std::vector<std::vector<double>>;

enum class Algorithm { qgi, restart, qwi, dgn };

inline std::string_view to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::qgi: return "qgi";
    case Algorithm::restart: return "restart";
    case Algorithm::qwi: return "qwi";
    case Algorithm::dgn: return "dgn";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// QGI: continue-action Q-values per reference state plus retirement estimates.
// There is no storage for the retire action: its value is M(x) by definition.

class QgiState {
public:
    explicit QgiState(std::vector<std::size_t> table_sizes)
    {
        for (std::size_t n : table_sizes) {
            detail::require(n > 0, "QgiState: empty table");
            tables_.push_back({n, std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)});
        }
    }

    [[nodiscard]] std::size_t num_tables() const noexcept { return tables_.size(); }
    [[nodiscard]] std::size_t num_states(std::size_t t) const { return tables_.at(t).n; }

    /// Q^x(s, continue)
    [[nodiscard]] double& q(std::size_t t, std::size_t x, std::size_t s) { auto& tb = tables_[t]; return tb.q[x * tb.n + s]; }
    [[nodiscard]] double q(std::size_t t, std::size_t x, std::size_t s) const { const auto& tb = tables_[t]; return tb.q[x * tb.n + s]; }
    [[nodiscard]] double& m(std::size_t t, std::size_t x) { return tables_[t].m[x]; }
    [[nodiscard]] double m(std::size_t t, std::size_t x) const { return tables_[t].m[x]; }

    [[nodiscard]] std::size_t tracked_entries() const
    {
        std::size_t total = 0;
        for (const auto& tb : tables_) total += tb.q.size() + tb.m.size();
        return total;
    }

private:
    struct Table {
        std::size_t n;
        std::vector<double> q;
        std::vector<double> m;
    };
    std::vector<Table> tables_;
};

// ---------------------------------------------------------------------------
// Restart-in-state: Q^x(s, a) with a = 1 (continue) and a = 0 (restart to x).

class RestartState {
public:
    explicit RestartState(std::vector<std::size_t> table_sizes)
    {
        for (std::size_t n : table_sizes) {
            detail::require(n > 0, "RestartState: empty table");
            tables_.push_back({n, std::vector<double>(2 * n * n, 0.0)});
        }
    }

    [[nodiscard]] std::size_t num_tables() const noexcept { return tables_.size(); }
    [[nodiscard]] std::size_t num_states(std::size_t t) const { return tables_.at(t).n; }

    [[nodiscard]] double& q(std::size_t t, std::size_t x, std::size_t s, int a) { auto& tb = tables_[t]; return tb.q[(x * tb.n + s) * 2 + a]; }
    [[nodiscard]] double q(std::size_t t, std::size_t x, std::size_t s, int a) const { const auto& tb = tables_[t]; return tb.q[(x * tb.n + s) * 2 + a]; }
    [[nodiscard]] double value(std::size_t t, std::size_t x, std::size_t s) const { return std::max(q(t, x, s, 0), q(t, x, s, 1)); }

    [[nodiscard]] std::size_t tracked_entries() const
    {
        std::size_t total = 0;
        for (const auto& tb : tables_) total += tb.q.size();
        return total;
    }

private:
    struct Table {
        std::size_t n;
        std::vector<double> q;
    };
    std::vector<Table> tables_;
};

// ---------------------------------------------------------------------------
// QWI: Q^x(s, a) for both actions plus the subsidy estimates lambda(x).

class QwiState {
public:
    explicit QwiState(std::vector<std::size_t> table_sizes)
    {
        for (std::size_t n : table_sizes) {
            detail::require(n > 0, "QwiState: empty table");
            tables_.push_back({n, std::vector<double>(2 * n * n, 0.0), std::vector<double>(n, 0.0)});
        }
    }

    [[nodiscard]] std::size_t num_tables() const noexcept { return tables_.size(); }
    [[nodiscard]] std::size_t num_states(std::size_t t) const { return tables_.at(t).n; }

    [[nodiscard]] double& q(std::size_t t, std::size_t x, std::size_t s, int a) { auto& tb = tables_[t]; return tb.q[(x * tb.n + s) * 2 + a]; }
    [[nodiscard]] double q(std::size_t t, std::size_t x, std::size_t s, int a) const { const auto& tb = tables_[t]; return tb.q[(x * tb.n + s) * 2 + a]; }
    [[nodiscard]] double value(std::size_t t, std::size_t x, std::size_t s) const { return std::max(q(t, x, s, 0), q(t, x, s, 1)); }
    [[nodiscard]] double& lambda(std::size_t t, std::size_t x) { return tables_[t].lambda[x]; }
    [[nodiscard]] double lambda(std::size_t t, std::size_t x) const { return tables_[t].lambda[x]; }

    [[nodiscard]] std::size_t tracked_entries() const
    {
        std::size_t total = 0;
        for (const auto& tb : tables_) total += tb.q.size() + tb.lambda.size();
        return total;
    }

private:
    struct Table {
        std::size_t n;
        std::vector<double> q;
        std::vector<double> lambda;
    };
    std::vector<Table> tables_;
};

using LearnerState = std::variant<QgiState, RestartState, QwiState>;

inline LearnerState make_learner(Algorithm algo, std::vector<std::size_t> table_sizes)
{
    switch (algo) {
    case Algorithm::qgi: return QgiState(std::move(table_sizes));
    case Algorithm::restart: return RestartState(std::move(table_sizes));
    case Algorithm::qwi: return QwiState(std::move(table_sizes));
    case Algorithm::dgn: break;
    }
    throw ConfigError("make_learner: dgn is not a tabular learner");
}

namespace detail {

inline void check_transition(std::size_t tables, std::size_t n, const Transition& tr)
{
    require(tr.table < tables, "transition: table index out of range");
    require(tr.state < n && tr.next_state < n, "transition: state out of range");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Update rules

/// One QGI step. For every reference state x of the pulled arm's table
///
///   Q^x(s,1) <- (1-alpha) Q^x(s,1) + alpha (r + gamma max{Q^x(s',1), M(x)})
///
/// then, when beta > 0, every table's estimates relax toward the fresh diagonal
///
///   M(x) <- M(x) + beta (Q^x(x,1) - M(x)).
inline UpdateCounters qgi_step(QgiState& st, const Transition& tr, double alpha, double beta, double gamma)
{
    detail::check_transition(st.num_tables(), st.num_states(tr.table), tr);
    UpdateCounters delta{0, 0, 1};
    const std::size_t n = st.num_states(tr.table);
    for (std::size_t x = 0; x < n; ++x) {
        const double target = tr.reward + gamma * std::max(st.q(tr.table, x, tr.next_state), st.m(tr.table, x));
        double& cell = st.q(tr.table, x, tr.state);
        cell = (1.0 - alpha) * cell + alpha * target;
    }
    delta.q_updates = n;
    if (beta > 0.0) {
        for (std::size_t t = 0; t < st.num_tables(); ++t) {
            const std::size_t nt = st.num_states(t);
            for (std::size_t x = 0; x < nt; ++x) st.m(t, x) += beta * (st.q(t, x, x) - st.m(t, x));
            delta.index_updates += nt;
        }
    }
    return delta;
}

/// One restart-in-state step: 2N updates from a single transition s -> s'.
///
///   Q^k(s,1)   <- (1-alpha) Q^k(s,1)   + alpha (r + gamma max_a Q^k(s',a))     for all k
///   Q^s(k,0)   <- (1-alpha) Q^s(k,0)   + alpha (r + gamma max_a Q^s(s',a))     for all k
///
/// All targets read the pre-step table.
inline UpdateCounters restart_step(RestartState& st, const Transition& tr, double alpha, double gamma)
{
    detail::check_transition(st.num_tables(), st.num_states(tr.table), tr);
    const std::size_t t = tr.table;
    const std::size_t n = st.num_states(t);
    thread_local std::vector<double> targets;
    targets.resize(n);
    for (std::size_t k = 0; k < n; ++k) targets[k] = tr.reward + gamma * st.value(t, k, tr.next_state);
    const double restart_target = targets[tr.state];
    for (std::size_t k = 0; k < n; ++k) {
        double& cont = st.q(t, k, tr.state, 1);
        cont = (1.0 - alpha) * cont + alpha * targets[k];
    }
    for (std::size_t k = 0; k < n; ++k) {
        double& rst = st.q(t, tr.state, k, 0);
        rst = (1.0 - alpha) * rst + alpha * restart_target;
    }
    return {2 * n, 0, 1};
}

/// One QWI step on a rested bandit. The active arm's continue values and every
/// passive arm's passive values are updated for all reference states:
///
///   active:   Q^x(s,1)   <- (1-alpha) Q^x(s,1)   + alpha (r         + gamma max_v Q^x(s',v))
///   passive:  Q^x(s_j,0) <- (1-alpha) Q^x(s_j,0) + alpha (lambda(x) + gamma max_v Q^x(s_j,v))
///
/// then, when beta > 0, lambda(x) <- lambda(x) + beta (Q^x(x,1) - Q^x(x,0)) for every table.
/// Passive arms are processed one by one, so two passive arms in the same state
/// of a shared table contribute two updates.
inline UpdateCounters qwi_step(QwiState& st, const Transition& active, std::span<const ArmPosition> passive,
                               double alpha, double beta, double gamma)
{
    detail::check_transition(st.num_tables(), st.num_states(active.table), active);
    UpdateCounters delta{0, 0, 1};
    {
        const std::size_t t = active.table;
        const std::size_t n = st.num_states(t);
        for (std::size_t x = 0; x < n; ++x) {
            const double target = active.reward + gamma * st.value(t, x, active.next_state);
            double& cell = st.q(t, x, active.state, 1);
            cell = (1.0 - alpha) * cell + alpha * target;
        }
        delta.q_updates += n;
    }
    for (const ArmPosition& pos : passive) {
        detail::require(pos.table < st.num_tables() && pos.state < st.num_states(pos.table), "qwi_step: passive arm out of range");
        const std::size_t n = st.num_states(pos.table);
        for (std::size_t x = 0; x < n; ++x) {
            const double target = st.lambda(pos.table, x) + gamma * st.value(pos.table, x, pos.state);
            double& cell = st.q(pos.table, x, pos.state, 0);
            cell = (1.0 - alpha) * cell + alpha * target;
        }
        delta.q_updates += n;
    }
    if (beta > 0.0) {
        for (std::size_t t = 0; t < st.num_tables(); ++t) {
            const std::size_t n = st.num_states(t);
            for (std::size_t x = 0; x < n; ++x) st.lambda(t, x) += beta * (st.q(t, x, x, 1) - st.q(t, x, x, 0));
            delta.index_updates += n;
        }
    }
    return delta;
}

// ---------------------------------------------------------------------------
// Index extraction

/// Current index estimate of state s in table t, on the per-step reward scale.
inline double index_of(const QgiState& st, std::size_t t, std::size_t s, double gamma) { return (1.0 - gamma) * st.m(t, s); }
inline double index_of(const RestartState& st, std::size_t t, std::size_t s, double gamma) { return (1.0 - gamma) * st.q(t, s, s, 1); }
inline double index_of(const QwiState& st, std::size_t t, std::size_t s, double /*gamma*/) { return st.lambda(t, s); }

inline double index_of(const LearnerState& st, std::size_t t, std::size_t s, double gamma)
{
    return std::visit([&](const auto& learner) { return index_of(learner, t, s, gamma); }, st);
}

template <class State>
IndexTable extract_indices(const State& st, double gamma)
{
    IndexTable out(st.num_tables());
    for (std::size_t t = 0; t < st.num_tables(); ++t) {
        out[t].resize(st.num_states(t));
        for (std::size_t s = 0; s < st.num_states(t); ++s) out[t][s] = index_of(st, t, s, gamma);
    }
    return out;
}

inline IndexTable extract_indices(const LearnerState& st, double gamma)
{
    return std::visit([&](const auto& learner) { return extract_indices(learner, gamma); }, st);
}

inline std::size_t tracked_entries(const LearnerState& st)
{
    return std::visit([](const auto& learner) { return learner.tracked_entries(); }, st);
}

inline std::size_t num_tables(const LearnerState& st)
{
    return std::visit([](const auto& learner) { return learner.num_tables(); }, st);
}

/// Learner's value estimate of reference state s at itself, in value units:
/// max{Q^s(s,1), M(s)} for QGI, max_a Q^s(s,a) otherwise.
inline double diagonal_value(const LearnerState& st, std::size_t t, std::size_t s)
{
    return std::visit(
        [&](const auto& learner) {
            using T = std::decay_t<decltype(learner)>;
            if constexpr (std::is_same_v<T, QgiState>) return std::max(learner.q(t, s, s), learner.m(t, s));
            else return learner.value(t, s, s);
        },
        st);
}

} // namespace gittins
