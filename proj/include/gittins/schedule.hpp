#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gittins/error.hpp"

namespace gittins {

enum class RateForm {
    decaying, ///< alpha: x/ceil(n/theta); beta: y/(1+ceil(n log n / kappa)) on the phi grid
    constant, ///< alpha: x; beta: y on the phi grid
};

enum class LogBase { natural, base2, base10 };

/// Two-timescale step sizes.
///
///   alpha(n) = x / ceil(n/theta)
///   beta(n)  = y / (1 + ceil(n log(n) / kappa))   when n mod phi == 0, else 0
///
/// Either rate can be switched to a constant (x, or y on the phi grid) which
/// is what the scheduling experiments use. Steps are counted from n = 1.
struct LearningRateSchedule {
    double x = 0.2;
    double y = 0.6;
    std::uint64_t theta = 5000;
    std::uint64_t kappa = 5000;
    std::uint64_t phi = 10;
    RateForm alpha_form = RateForm::decaying;
    RateForm beta_form = RateForm::decaying;
    LogBase log_base = LogBase::natural;

    void validate() const
    {
        detail::require(x > 0.0 && x <= 1.0, "LearningRateSchedule: x must lie in (0,1]");
        // y = 0 is accepted: it freezes the index estimates (used by the grid search).
        detail::require(y >= 0.0 && y <= 1.0, "LearningRateSchedule: y must lie in [0,1]");
        detail::require(theta >= 1 && kappa >= 1 && phi >= 1, "LearningRateSchedule: theta, kappa, phi must be >= 1");
    }

    [[nodiscard]] double alpha(std::uint64_t n) const
    {
        detail::require(n >= 1, "alpha_at: step counter starts at 1");
        if (alpha_form == RateForm::constant) return x;
        const std::uint64_t blocks = (n + theta - 1) / theta;
        return x / static_cast<double>(blocks);
    }

    [[nodiscard]] double beta(std::uint64_t n) const
    {
        detail::require(n >= 1, "beta_at: step counter starts at 1");
        if (n % phi != 0) return 0.0;
        if (beta_form == RateForm::constant) return y;
        const double dn = static_cast<double>(n);
        const double growth = std::ceil(dn * log_of(dn) / static_cast<double>(kappa));
        return y / (1.0 + growth);
    }

    [[nodiscard]] bool beta_active(std::uint64_t n) const { return n % phi == 0 && y > 0.0; }

private:
    [[nodiscard]] double log_of(double v) const
    {
        switch (log_base) {
        case LogBase::base2: return std::log2(v);
        case LogBase::base10: return std::log10(v);
        case LogBase::natural: break;
        }
        return std::log(v);
    }
};

inline double alpha_at(const LearningRateSchedule& schedule, std::uint64_t n) { return schedule.alpha(n); }
inline double beta_at(const LearningRateSchedule& schedule, std::uint64_t n) { return schedule.beta(n); }

/// Tuned toy-problem schedules.
inline LearningRateSchedule qgi_toy_schedule() { return {0.2, 0.6, 5000, 5000, 10}; }
inline LearningRateSchedule qwi_toy_schedule() { return {0.1, 0.2, 5000, 5000, 10}; }

/// Constant alpha, beta = y on every phi-th step.
inline LearningRateSchedule constant_schedule(double alpha, double beta, std::uint64_t phi)
{
    LearningRateSchedule s{alpha, beta, 1, 1, phi};
    s.alpha_form = RateForm::constant;
    s.beta_form = RateForm::constant;
    return s;
}

/// Multiplicative exploration decay: eps_n = max(floor, initial * decay^n), n >= 0.
struct EpsilonSchedule {
    double initial = 1.0;
    double decay = 1.0;
    double floor = 0.0;

    void validate() const
    {
        detail::require(initial >= 0.0 && initial <= 1.0, "EpsilonSchedule: initial must lie in [0,1]");
        detail::require(decay > 0.0 && decay <= 1.0, "EpsilonSchedule: decay must lie in (0,1]");
        detail::require(floor >= 0.0 && floor <= initial, "EpsilonSchedule: floor must lie in [0, initial]");
    }

    [[nodiscard]] double at(std::uint64_t n) const
    {
        return std::max(floor, initial * std::pow(decay, static_cast<double>(n)));
    }

    static EpsilonSchedule fixed(double eps) { return {eps, 1.0, eps}; }
};

// ---------------------------------------------------------------------------
// Two-timescale validator

struct TwoTimescaleReport {
    bool rates_bounded = false;      ///< alpha in (0,1] everywhere, beta in (0,1] on active steps
    bool ratio_non_increasing = false;
    bool ratio_decayed = false;      ///< final envelope < 0.1 * initial ratio
    double initial_ratio = 0.0;      ///< beta/alpha at the first beta-active step
    double final_ratio = 0.0;        ///< envelope over the last dyadic block
    std::vector<double> envelope;    ///< max beta/alpha over active steps in each dyadic block [2^k, 2^(k+1))
    std::string reason;

    [[nodiscard]] bool passed() const { return rates_bounded && ratio_non_increasing && ratio_decayed; }
};

/// Checks beta = o(alpha) numerically up to `horizon`.
///
/// The ratio beta(n)/alpha(n) is evaluated on every beta-active step (beta > 0).
/// Ceiling-based schedules make the raw ratio saw-toothed, so monotonicity is
/// judged on the per-block maximum over dyadic blocks [2^k, 2^(k+1)); the tail
/// is the second half of those blocks. The decay test compares the last
/// block's maximum against the ratio at the first active step.
template <class AlphaFn, class BetaFn>
TwoTimescaleReport validate_two_timescale(AlphaFn&& alpha, BetaFn&& beta, std::uint64_t horizon)
{
    TwoTimescaleReport report;
    if (horizon < 10000) {
        report.reason = "horizon must be at least 1e4";
        return report;
    }
    constexpr double slack = 1e-12;
    bool bounded = true;
    bool any_active = false;
    std::uint64_t block_end = 2;
    double block_max = -1.0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        if (n == block_end) {
            report.envelope.push_back(block_max);
            block_max = -1.0;
            block_end *= 2;
        }
        const double a = alpha(n);
        if (!(a > 0.0 && a <= 1.0 + slack)) bounded = false;
        const double b = beta(n);
        if (b == 0.0) continue;
        if (!(b > 0.0 && b <= 1.0 + slack)) bounded = false;
        const double ratio = b / a;
        if (!any_active) report.initial_ratio = ratio;
        any_active = true;
        block_max = std::max(block_max, ratio);
    }
    report.envelope.push_back(block_max);
    // Blocks with no active step carry -1; drop them.
    std::erase_if(report.envelope, [](double v) { return v < 0.0; });

    report.rates_bounded = bounded && any_active;
    if (!any_active) {
        report.reason = "beta is never active";
        return report;
    }
    const std::size_t blocks = report.envelope.size();
    const std::size_t tail_start = blocks / 2;
    report.ratio_non_increasing = true;
    for (std::size_t k = std::max<std::size_t>(tail_start, 1); k < blocks; ++k) {
        if (report.envelope[k] > report.envelope[k - 1] * (1.0 + slack)) report.ratio_non_increasing = false;
    }
    report.final_ratio = report.envelope.back();
    report.ratio_decayed = report.final_ratio < 0.1 * report.initial_ratio;
    if (!report.rates_bounded) report.reason = "rates leave (0,1]";
    else if (!report.ratio_non_increasing) report.reason = "beta/alpha increases over the tail";
    else if (!report.ratio_decayed) report.reason = "beta/alpha has not fallen below 0.1x its initial value";
    return report;
}

inline TwoTimescaleReport validate_two_timescale(const LearningRateSchedule& schedule, std::uint64_t horizon)
{
    schedule.validate();
    return validate_two_timescale([&](std::uint64_t n) { return schedule.alpha(n); },
                                  [&](std::uint64_t n) { return schedule.beta(n); }, horizon);
}

} // namespace gittins
