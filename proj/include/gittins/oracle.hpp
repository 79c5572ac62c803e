#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gittins/arm.hpp"
#include "gittins/error.hpp"

namespace gittins {

/// Exact indices of one arm from the retirement formulation.
///
/// m_star[x] is the smallest terminal reward M at which retiring in x is
/// optimal, g_star[x] = (1 - gamma) * m_star[x] is the Gittins index.
struct RetirementSolution {
    std::vector<double> m_star;
    std::vector<double> g_star;
    double gamma = 0.0;
    double tol = 0.0;
};

/// Optimal value of the single-arm stopping problem with terminal reward M:
///
///   V(x) = max{ r(x) + gamma * sum_j p(j|x) V(j), M }
///
/// Value iteration from zero, stopped when the sup-norm change drops below
/// tol * (1 - gamma) / gamma, so the returned vector is within tol of the
/// fixed point.
inline std::vector<double> retirement_value(const ArmModel& arm, double m, double gamma, double tol)
{
    detail::require(tol > 0.0, "retirement_value: tol must be positive");
    detail::require(gamma > 0.0 && gamma < 1.0, "retirement_value: gamma must lie in (0,1)");
    const std::size_t n = arm.num_states();
    const double stop = tol * (1.0 - gamma) / gamma;
    std::vector<double> v(n, 0.0);
    std::vector<double> next(n);
    for (;;) {
        double change = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            double cont = 0.0;
            for (const auto& e : arm.nonzeros(x)) cont += e.probability * v[e.state];
            next[x] = std::max(arm.reward(x) + gamma * cont, m);
            change = std::max(change, std::abs(next[x] - v[x]));
        }
        v.swap(next);
        if (change < stop) break;
    }
    return v;
}

/// Gittins indices by bisection on M for every state.
///
/// V(x, M) - M is non-increasing in M and vanishes exactly from M(x) on, so
/// M(x) is bracketed in [r_min, r_max] / (1 - gamma). A candidate counts as
/// "retire-optimal" when the computed gap is below tol*(1-gamma)/4; value
/// iteration runs at half that accuracy and bisection stops at width tol/2,
/// which keeps each m_star within tol of the true fixed point.
inline RetirementSolution gittins_exact(const ArmModel& arm, double gamma, double tol = 1e-6)
{
    detail::require(tol > 0.0, "gittins_exact: tol must be positive");
    detail::require(gamma > 0.0 && gamma < 1.0, "gittins_exact: gamma must lie in (0,1)");
    const auto rewards = arm.rewards();
    const auto [rmin, rmax] = std::minmax_element(rewards.begin(), rewards.end());
    const double lo0 = *rmin / (1.0 - gamma);
    const double hi0 = *rmax / (1.0 - gamma);
    const double gap_tol = tol * (1.0 - gamma) / 4.0;
    const double vi_tol = gap_tol / 2.0;

    RetirementSolution sol;
    sol.gamma = gamma;
    sol.tol = tol;
    const std::size_t n = arm.num_states();
    sol.m_star.resize(n);
    sol.g_star.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
        double lo = lo0;
        double hi = hi0;
        while (hi - lo >= tol / 2.0) {
            const double mid = 0.5 * (lo + hi);
            const double gap = retirement_value(arm, mid, gamma, vi_tol)[x] - mid;
            if (gap < gap_tol) hi = mid;
            else lo = mid;
        }
        sol.m_star[x] = hi;
        sol.g_star[x] = (1.0 - gamma) * hi;
    }
    return sol;
}

/// V*(s) = M(s): the retirement fixed point at its own reference state, and
/// the target that Bellman relative error is measured against.
inline std::vector<double> reference_value_star(const RetirementSolution& solution) { return solution.m_star; }

} // namespace gittins
