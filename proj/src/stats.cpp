#include "tsk/stats.hpp"

#include <cmath>

namespace tsk {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double TrialStatistics::tail_rate(double eps) const {
    auto it = tail_counts.find(eps);
    if (it == tail_counts.end()) throw InputError("tail_rate: epsilon not accumulated");
    return trials == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
}

Interval TrialStatistics::tail_interval(double eps) const {
    auto it = tail_counts.find(eps);
    if (it == tail_counts.end()) throw InputError("tail_interval: epsilon not accumulated");
    return wilson_interval(it->second, trials);
}

bool TrialStatistics::moments_monotone() const {
    double prev = 0.0;
    for (const auto& [p, v] : moment_estimates) {
        if (v + 1e-15 < prev) return false;
        prev = v;
    }
    return true;
}

TrialStatistics TrialStatistics::from_samples(std::span<const double> samples,
                                              std::span<const double> p_grid,
                                              std::span<const double> eps_grid) {
    TrialStatistics stats;
    stats.trials = samples.size();
    if (samples.empty()) return stats;
    double n = static_cast<double>(samples.size());

    stats.mean_sample = pairwise_sum(samples) / n;

    std::vector<double> powered(samples.size());
    for (double p : p_grid) {
        for (std::size_t i = 0; i < samples.size(); ++i)
            powered[i] = std::pow(std::fabs(samples[i]), p);
        stats.moment_estimates[p] = std::pow(pairwise_sum(powered) / n, 1.0 / p);
    }
    for (double eps : eps_grid) {
        std::uint64_t count = 0;
        for (double v : samples)
            if (std::fabs(v) > eps) ++count;
        stats.tail_counts[eps] = count;
    }
    return stats;
}

MomentBudget MomentBudget::standard(double epsilon, double delta, double slack) {
    MomentBudget budget;
    budget.epsilon = epsilon;
    budget.delta = delta;
    budget.slack = slack;
    double pmax = std::log(1.0 / delta);
    for (double p : {2.0, 4.0, 8.0})
        if (p <= pmax) budget.p_grid.push_back(p);
    if (budget.p_grid.empty()) budget.p_grid.push_back(2.0);
    budget.validate();
    return budget;
}

void MomentBudget::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("MomentBudget: epsilon in (0,1]");
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("MomentBudget: delta in (0,1]");
    if (!(slack >= 1.0)) throw ConfigError("MomentBudget: slack must be >= 1");
    if (p_grid.empty()) throw ConfigError("MomentBudget: empty p grid");
    double pmax = std::max(2.0, std::log(1.0 / delta));
    for (double p : p_grid) {
        if (p < 2.0) throw ConfigError("MomentBudget: p below 2");
        if (p > pmax * (1.0 + 1e-12)) throw ConfigError("MomentBudget: p above log(1/delta)");
    }
}

}  // namespace tsk
