#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "gittins/error.hpp"
#include "gittins/random.hpp"

namespace gittins {

/// epsilon-greedy arm choice over the arms for which `available(i)` holds.
///
/// With probability epsilon the arm is uniform over available arms; otherwise
/// it is uniform over the available arms attaining the largest index. NaN
/// indices rank below every number.
template <class Available>
std::size_t epsilon_greedy_select(std::span<const double> indices, Available&& available, double epsilon, RandomSource& rng)
{
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon_greedy_select: epsilon must lie in [0,1]");
    std::size_t count = 0;
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (available(i)) ++count;
    if (count == 0) throw EmptySelection("epsilon_greedy_select: no available arms");

    auto nth_matching = [&](auto&& pred, std::size_t k) {
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (pred(i)) {
                if (k == 0) return i;
                --k;
            }
        }
        return indices.size(); // unreachable
    };

    if (rng.uniform() < epsilon) return nth_matching(available, rng.uniform_index(count));

    auto key = [&](std::size_t i) {
        const double v = indices[i];
        return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
    };
    double best = -std::numeric_limits<double>::infinity();
    bool seen = false;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (!available(i)) continue;
        if (!seen || key(i) > best) best = key(i);
        seen = true;
    }
    auto is_best = [&](std::size_t i) { return available(i) && key(i) == best; };
    std::size_t ties = 0;
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (is_best(i)) ++ties;
    if (ties == 1) return nth_matching(is_best, 0);
    return nth_matching(is_best, rng.uniform_index(ties));
}

inline std::size_t epsilon_greedy_select(std::span<const double> indices, double epsilon, RandomSource& rng)
{
    return epsilon_greedy_select(indices, [](std::size_t) { return true; }, epsilon, rng);
}

} // namespace gittins
