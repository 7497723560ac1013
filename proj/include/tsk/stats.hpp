#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tsk/types.hpp"

namespace tsk {

/// Deterministic pairwise summation. The reduction tree depends only on the
/// length, so results are identical however the values were produced.
double pairwise_sum(std::span<const double> values);

/// 95% (by default) Wilson score interval for a binomial rate.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool overlaps(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959964);

/// Accumulated Monte-Carlo moments and tail counts over per-trial samples of
/// some statistic z (for moment experiments z = |Mx|^2 - 1).
struct TrialStatistics {
    std::uint64_t trials = 0;
    double mean_sample = 0.0;                    // mean of z
    std::map<double, double> moment_estimates;   // p -> (E|z|^p)^{1/p}
    std::map<double, std::uint64_t> tail_counts; // eps -> #{|z| > eps}

    /// mean of 1 + z; the estimate of E|Mx|^2 for moment experiments.
    double mean_sq_norm() const { return 1.0 + mean_sample; }

    double tail_rate(double eps) const;
    Interval tail_interval(double eps) const;

    /// Empirical p-norms are nondecreasing in p (power-mean inequality).
    bool moments_monotone() const;

    /// Reduce a full vector of per-trial samples. Deterministic for a given
    /// sample vector, independent of how many threads filled it.
    static TrialStatistics from_samples(std::span<const double> samples,
                                        std::span<const double> p_grid,
                                        std::span<const double> eps_grid);
};

/// Tolerance budget for the per-p moment checks.
struct MomentBudget {
    double epsilon = 0.25;
    double delta = 0.01;
    std::vector<double> p_grid;  // within [2, log(1/delta)]
    double slack = 2.0;

    /// {2, 4, 8} clipped to log(1/delta).
    static MomentBudget standard(double epsilon, double delta, double slack = 2.0);
    void validate() const;
};

}  // namespace tsk
