#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "gittins/arm.hpp"
#include "gittins/error.hpp"
#include "gittins/random.hpp"

namespace gittins::scheduling {

// State convention shared by every job type:
//   state 0      job finished (absorbing, never selectable)
//   state a + 1  job has received a quanta of service
// A fresh job is in state 1. Constant-hazard jobs are memoryless and use the
// two states {0, 1}; their age is still tracked by the environment.

enum class HazardKind { constant, increasing, decreasing };

inline std::string to_string(HazardKind k)
{
    switch (k) {
    case HazardKind::constant: return "constant";
    case HazardKind::increasing: return "increasing";
    case HazardKind::decreasing: return "decreasing";
    }
    return "?";
}

struct HazardSpec {
    HazardKind kind = HazardKind::constant;
    double rho1 = 0.5;     ///< completion probability on the first serve
    double lambda = 0.8;   ///< decay parameter for the monotone kinds

    void validate() const
    {
        detail::require(rho1 >= 0.0 && rho1 <= 1.0, "HazardSpec: rho1 must lie in [0,1]");
        if (kind != HazardKind::constant)
            detail::require(lambda > 0.0 && lambda < 1.0, "HazardSpec: lambda must lie in (0,1)");
    }

    bool operator==(const HazardSpec&) const = default;
};

/// Completion probability on a serve given in state s (s >= 1).
///   constant:   rho1
///   increasing: 1 - (1 - rho1) lambda^(s-1)
///   decreasing: rho1 at s = 1, else 1 - (1 - rho1) lambda^(1/(s-1))
inline double hazard_rate(const HazardSpec& spec, std::size_t s)
{
    detail::require(s >= 1, "hazard_rate: state must be >= 1");
    const double sm1 = static_cast<double>(s - 1);
    switch (spec.kind) {
    case HazardKind::constant: return spec.rho1;
    case HazardKind::increasing: return 1.0 - (1.0 - spec.rho1) * std::pow(spec.lambda, sm1);
    case HazardKind::decreasing:
        if (s == 1) return spec.rho1;
        return 1.0 - (1.0 - spec.rho1) * std::pow(spec.lambda, 1.0 / sm1);
    }
    return spec.rho1;
}

enum class ServiceFamily { binomial, poisson, geometric, uniform, lognormal };

inline std::string to_string(ServiceFamily f)
{
    switch (f) {
    case ServiceFamily::binomial: return "binomial";
    case ServiceFamily::poisson: return "poisson";
    case ServiceFamily::geometric: return "geometric";
    case ServiceFamily::uniform: return "uniform";
    case ServiceFamily::lognormal: return "lognormal";
    }
    return "?";
}

/// Service-time law in whole quanta, clamped to [1, s_max].
///
/// Parameter use per family:
///   binomial(n = a, p = b)          s_max = n
///   poisson(mean = a)               s_max = smallest s with CDF(s) >= 1 - 1e-6
///   geometric(q = a), support 1,2.. s_max as for poisson
///   uniform(lo = a, hi = b, delta)  tau = ceil(U / delta), s_max = ceil(hi / delta)
///   lognormal(mu = a, sigma = b, delta, max = cap)  X clamped to cap, s_max = ceil(cap / delta)
struct ServiceDistSpec {
    ServiceFamily family = ServiceFamily::poisson;
    double a = 5.0;
    double b = 0.0;
    double delta = 1.0;
    double cap = 0.0;

    static ServiceDistSpec binomial(int n, double p) { return {ServiceFamily::binomial, static_cast<double>(n), p, 1.0, 0.0}; }
    static ServiceDistSpec poisson(double mean) { return {ServiceFamily::poisson, mean, 0.0, 1.0, 0.0}; }
    static ServiceDistSpec geometric(double q) { return {ServiceFamily::geometric, q, 0.0, 1.0, 0.0}; }
    static ServiceDistSpec uniform(double lo, double hi, double delta) { return {ServiceFamily::uniform, lo, hi, delta, 0.0}; }
    static ServiceDistSpec lognormal(double mu, double sigma, double delta, double max) { return {ServiceFamily::lognormal, mu, sigma, delta, max}; }

    void validate() const
    {
        switch (family) {
        case ServiceFamily::binomial:
            detail::require(a >= 1.0 && a == std::floor(a), "binomial: n must be a positive integer");
            detail::require(b >= 0.0 && b <= 1.0, "binomial: p must lie in [0,1]");
            break;
        case ServiceFamily::poisson: detail::require(a > 0.0, "poisson: mean must be positive"); break;
        case ServiceFamily::geometric: detail::require(a > 0.0 && a <= 1.0, "geometric: q must lie in (0,1]"); break;
        case ServiceFamily::uniform:
            detail::require(a >= 0.0 && b > a, "uniform: need 0 <= lo < hi");
            detail::require(delta > 0.0, "uniform: delta must be positive");
            break;
        case ServiceFamily::lognormal:
            detail::require(b > 0.0, "lognormal: sigma must be positive");
            detail::require(delta > 0.0 && cap >= delta, "lognormal: need 0 < delta <= max");
            break;
        }
    }

    bool operator==(const ServiceDistSpec&) const = default;
};

namespace detail_sched {

constexpr double tail_mass = 1e-6;

inline std::size_t ceil_quanta(double v, double delta)
{
    // guard against v/delta landing a hair above an integer in floating point
    return static_cast<std::size_t>(std::max(0.0, std::ceil(v / delta - 1e-9)));
}

inline double poisson_pmf(double mean, std::size_t k)
{
    return std::exp(static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
}

inline double lognormal_cdf(double x, double mu, double sigma)
{
    if (x <= 0.0) return 0.0;
    return 0.5 * std::erfc(-(std::log(x) - mu) / (sigma * std::sqrt(2.0)));
}

} // namespace detail_sched

inline std::size_t service_cap(const ServiceDistSpec& spec)
{
    spec.validate();
    switch (spec.family) {
    case ServiceFamily::binomial: return static_cast<std::size_t>(spec.a);
    case ServiceFamily::poisson: {
        double cdf = 0.0;
        for (std::size_t s = 0;; ++s) {
            cdf += detail_sched::poisson_pmf(spec.a, s);
            if (cdf >= 1.0 - detail_sched::tail_mass) return std::max<std::size_t>(s, 1);
        }
    }
    case ServiceFamily::geometric: {
        if (spec.a >= 1.0) return 1;
        const double s = std::ceil(std::log(detail_sched::tail_mass) / std::log(1.0 - spec.a) - 1e-9);
        return std::max<std::size_t>(static_cast<std::size_t>(s), 1);
    }
    case ServiceFamily::uniform: return std::max<std::size_t>(detail_sched::ceil_quanta(spec.b, spec.delta), 1);
    case ServiceFamily::lognormal: return std::max<std::size_t>(detail_sched::ceil_quanta(spec.cap, spec.delta), 1);
    }
    return 1;
}

/// P(tau = k) for k = 0..s_max after clamping (entry 0 is always 0).
inline std::vector<double> service_pmf(const ServiceDistSpec& spec)
{
    const std::size_t smax = service_cap(spec);
    std::vector<double> raw(smax + 1, 0.0);
    switch (spec.family) {
    case ServiceFamily::binomial: {
        const auto n = static_cast<std::size_t>(spec.a);
        for (std::size_t k = 0; k <= n; ++k)
            raw[k] = std::exp(std::lgamma(spec.a + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) - std::lgamma(spec.a - static_cast<double>(k) + 1.0))
                     * std::pow(spec.b, static_cast<double>(k)) * std::pow(1.0 - spec.b, static_cast<double>(n - k));
        break;
    }
    case ServiceFamily::poisson:
        for (std::size_t k = 0; k <= smax; ++k) raw[k] = detail_sched::poisson_pmf(spec.a, k);
        break;
    case ServiceFamily::geometric:
        for (std::size_t k = 1; k <= smax; ++k) raw[k] = std::pow(1.0 - spec.a, static_cast<double>(k - 1)) * spec.a;
        break;
    case ServiceFamily::uniform:
        for (std::size_t k = 1; k <= smax; ++k) {
            const double lo = std::max(spec.a, static_cast<double>(k - 1) * spec.delta);
            const double hi = std::min(spec.b, static_cast<double>(k) * spec.delta);
            raw[k] = std::max(0.0, hi - lo) / (spec.b - spec.a);
        }
        break;
    case ServiceFamily::lognormal:
        for (std::size_t k = 1; k <= smax; ++k)
            raw[k] = detail_sched::lognormal_cdf(static_cast<double>(k) * spec.delta, spec.a, spec.b)
                     - detail_sched::lognormal_cdf(static_cast<double>(k - 1) * spec.delta, spec.a, spec.b);
        break;
    }
    // clamping: draws of 0 become 1, everything above s_max becomes s_max
    std::vector<double> pmf(smax + 1, 0.0);
    double inside = 0.0;
    for (std::size_t k = 1; k <= smax; ++k) inside += (pmf[k] = raw[k]);
    pmf[1] += raw[0];
    inside += raw[0];
    pmf[smax] += std::max(0.0, 1.0 - inside);
    return pmf;
}

inline std::size_t sample_service_time(const ServiceDistSpec& spec, RandomSource& rng)
{
    const std::size_t smax = service_cap(spec);
    double quanta = 0.0;
    switch (spec.family) {
    case ServiceFamily::binomial:
        quanta = static_cast<double>(std::binomial_distribution<int>(static_cast<int>(spec.a), spec.b)(rng.engine()));
        break;
    case ServiceFamily::poisson: quanta = static_cast<double>(std::poisson_distribution<long>(spec.a)(rng.engine())); break;
    case ServiceFamily::geometric:
        quanta = spec.a >= 1.0 ? 1.0 : 1.0 + static_cast<double>(std::geometric_distribution<long>(spec.a)(rng.engine()));
        break;
    case ServiceFamily::uniform: quanta = std::ceil(rng.uniform(spec.a, spec.b) / spec.delta); break;
    case ServiceFamily::lognormal: {
        const double x = std::min(spec.cap, std::lognormal_distribution<double>(spec.a, spec.b)(rng.engine()));
        quanta = std::ceil(x / spec.delta);
        break;
    }
    }
    return static_cast<std::size_t>(std::clamp(quanta, 1.0, static_cast<double>(smax)));
}

using JobSpec = std::variant<HazardSpec, ServiceDistSpec>;

inline std::size_t default_hazard_states() { return 50; }

/// Number of learner/oracle states for a job (including the finished state 0).
inline std::size_t job_num_states(const JobSpec& job, std::size_t hazard_states = default_hazard_states())
{
    if (const auto* h = std::get_if<HazardSpec>(&job)) return h->kind == HazardKind::constant ? 2 : hazard_states;
    return service_cap(std::get<ServiceDistSpec>(job)) + 1;
}

/// Probability that a serve given in `state` completes the job. The last
/// state completes deterministically.
inline std::vector<double> completion_hazards(const JobSpec& job, std::size_t hazard_states = default_hazard_states())
{
    const std::size_t n = job_num_states(job, hazard_states);
    std::vector<double> h(n, 0.0);
    if (const auto* hs = std::get_if<HazardSpec>(&job)) {
        hs->validate();
        for (std::size_t s = 1; s < n; ++s) h[s] = hazard_rate(*hs, s);
        if (hs->kind != HazardKind::constant) h[n - 1] = 1.0;
        return h;
    }
    const std::vector<double> pmf = service_pmf(std::get<ServiceDistSpec>(job));
    double survival = 1.0; // P(tau > age)
    for (std::size_t s = 1; s < n; ++s) {
        h[s] = survival > 0.0 ? std::clamp(pmf[s] / survival, 0.0, 1.0) : 1.0;
        survival -= pmf[s];
    }
    h[n - 1] = 1.0;
    return h;
}

/// Age-state chain used by the exact oracle: from s >= 1, finish (state 0)
/// with the completion probability, otherwise move to s + 1 (constant jobs
/// stay in 1). Expected reward on a serve equals the completion probability.
inline ArmModelPtr job_arm_model(const JobSpec& job, std::size_t hazard_states = default_hazard_states())
{
    const std::vector<double> h = completion_hazards(job, hazard_states);
    const std::size_t n = h.size();
    const bool memoryless = n == 2;
    std::vector<double> p(n * n, 0.0);
    std::vector<double> r(n, 0.0);
    p[0] = 1.0;
    for (std::size_t s = 1; s < n; ++s) {
        p[s * n + 0] = h[s];
        const std::size_t next = memoryless ? 1 : std::min(s + 1, n - 1);
        p[s * n + next] += 1.0 - h[s];
        r[s] = h[s];
    }
    return std::make_shared<const ArmModel>(n, std::move(p), std::move(r));
}

/// K hazard jobs of one kind with rho1 drawn uniformly from (0, 1).
inline std::vector<JobSpec> sample_hazard_batch(HazardKind kind, std::size_t k, double lambda, RandomSource& rng)
{
    std::vector<JobSpec> jobs;
    for (std::size_t i = 0; i < k; ++i) {
        double rho = 0.0;
        while (rho <= 0.0) rho = rng.uniform();
        jobs.push_back(HazardSpec{kind, rho, lambda});
    }
    return jobs;
}

} // namespace gittins::scheduling
