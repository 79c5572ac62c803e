#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gittins/error.hpp"

namespace gittins::deep {

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
    double step_size = 5e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    AdamState() = default;
    AdamState(std::size_t num_params, double lr) : m(num_params, 0.0), v(num_params, 0.0), step_size(lr) {}
};

/// One bias-corrected Adam step, in place.
inline void adam_apply(std::span<double> params, AdamState& adam, std::span<const double> grad)
{
    detail::require(params.size() == grad.size(), "adam_apply: gradient shape does not match parameters");
    detail::require(adam.m.size() == params.size() && adam.v.size() == params.size(),
                    "adam_apply: moment shape does not match parameters");
    ++adam.t;
    const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.t));
    const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i];
        adam.m[i] = adam.beta1 * adam.m[i] + (1.0 - adam.beta1) * g;
        adam.v[i] = adam.beta2 * adam.v[i] + (1.0 - adam.beta2) * g * g;
        const double mhat = adam.m[i] / c1;
        const double vhat = adam.v[i] / c2;
        params[i] -= adam.step_size * mhat / (std::sqrt(vhat) + adam.epsilon);
    }
}

} // namespace gittins::deep
