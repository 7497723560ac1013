#include "tsk/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsk/rng.hpp"
#include "tsk/tensor_ops.hpp"

namespace tsk {

SketchFactory family_factory(SketchConfig cfg, std::uint64_t seed) {
    return [cfg, seed](std::uint64_t trial) {
        SketchConfig trial_cfg = cfg;
        trial_cfg.seed = trial_seed(seed, trial);
        return build_sketch(trial_cfg);
    };
}

namespace {

std::vector<DenseVector> normalized_factors(std::span<const DenseVector> factors) {
    std::vector<DenseVector> out(factors.begin(), factors.end());
    for (auto& f : out) {
        double n = norm2(f);
        if (n == 0.0) throw InputError("estimate_moments: zero factor vector");
        for (double& v : f) v /= n;
    }
    return out;
}

}  // namespace

TrialStatistics estimate_moments_with(const SketchFactory& factory,
                                      std::span<const DenseVector> factors,
                                      std::span<const double> p_grid, std::size_t trials,
                                      std::span<const double> eps_grid) {
    if (trials == 0) throw InputError("estimate_moments: need at least one trial");
    std::vector<DenseVector> unit = normalized_factors(factors);

    // Each trial owns a slot; statistics reduce over the slot array with a
    // fixed pairwise tree, so results do not depend on the thread count.
    std::vector<double> samples(trials);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
        auto sketch = factory(static_cast<std::uint64_t>(t));
        DenseVector y = sketch->apply_tensor(unit);
        samples[static_cast<std::size_t>(t)] = norm_sq(y) - 1.0;
    }
    return TrialStatistics::from_samples(samples, p_grid, eps_grid);
}

TrialStatistics estimate_moments(const SketchConfig& cfg, std::span<const DenseVector> factors,
                                 std::span<const double> p_grid, std::size_t trials,
                                 std::uint64_t seed, std::span<const double> eps_grid) {
    return estimate_moments_with(family_factory(cfg, seed), factors, p_grid, trials, eps_grid);
}

StrongJlReport strong_jl_check(const TrialStatistics& stats, const MomentBudget& budget) {
    budget.validate();
    StrongJlReport report;
    report.pass = true;
    double log_inv_delta = std::log(1.0 / budget.delta);
    for (double p : budget.p_grid) {
        auto it = stats.moment_estimates.find(p);
        if (it == stats.moment_estimates.end())
            throw InputError("strong_jl_check: statistics do not cover p in the budget grid");
        MomentCheck check;
        check.p = p;
        check.empirical = it->second;
        check.bound =
            budget.slack * (budget.epsilon / std::numbers::e) * std::sqrt(p / log_inv_delta);
        check.pass = check.empirical <= check.bound;  // boundary inclusive
        report.pass = report.pass && check.pass;
        report.checks.push_back(check);
    }
    return report;
}

std::vector<DenseVector> adversarial_vector(std::size_t d, std::size_t c) {
    if (d == 0) throw InputError("adversarial_vector: d must be positive");
    DenseVector ones(d, 1.0 / std::sqrt(static_cast<double>(d)));
    return std::vector<DenseVector>(c, ones);
}

const LowerBoundCell& LowerBoundReport::cell(const std::string& family, std::size_t order,
                                             std::size_t m) const {
    for (const auto& c : cells)
        if (c.family == family && c.c == order && c.m == m) return c;
    throw InputError("LowerBoundReport: no such cell");
}

LowerBoundReport lower_bound_experiment(std::span<const std::size_t> m_grid, std::size_t d,
                                        std::size_t c, double epsilon, std::size_t trials,
                                        std::uint64_t seed) {
    if (d < c) throw InputError("lower_bound_experiment: requires d >= c");
    LowerBoundReport report;
    report.d = d;
    report.c = c;
    report.epsilon = epsilon;
    report.trials = trials;

    struct Variant {
        SketchFamily family;
        std::size_t order;
    };
    std::vector<Variant> variants = {
        {SketchFamily::dense_rows, c},
        {SketchFamily::count_sketch_tensor, c},
        {SketchFamily::fast_tensor_jl, c},
        {SketchFamily::dense_rows, c + 1},
    };

    for (const Variant& variant : variants) {
        std::vector<DenseVector> factors = adversarial_vector(d, variant.order);
        for (std::size_t m : m_grid) {
            SketchConfig cfg;
            cfg.family = variant.family;
            cfg.factor_dims.assign(variant.order, d);
            cfg.rows = m;
            cfg.seed = seed;

            // Reuse the per-trial substream across the m grid so the curves
            // over m are positively coupled.
            std::vector<double> fail(trials, 0.0);
            auto factory = family_factory(cfg, seed);
#pragma omp parallel for schedule(dynamic, 16)
            for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
                auto sketch = factory(static_cast<std::uint64_t>(t));
                DenseVector y = sketch->apply_tensor(factors);
                fail[static_cast<std::size_t>(t)] =
                    std::fabs(norm_sq(y) - 1.0) > epsilon ? 1.0 : 0.0;
            }
            LowerBoundCell cell;
            cell.family = family_name(variant.family);
            cell.c = variant.order;
            cell.m = m;
            cell.trials = trials;
            cell.failures = static_cast<std::uint64_t>(std::llround(pairwise_sum(fail)));
            cell.rate = static_cast<double>(cell.failures) / static_cast<double>(trials);
            cell.interval = wilson_interval(cell.failures, trials);
            report.cells.push_back(cell);
        }
    }

    // Monotonicity in m, within interval overlap, for the order-c variants.
    for (const Variant& variant : variants) {
        if (variant.order != c) continue;
        bool ok = true;
        const LowerBoundCell* prev = nullptr;
        for (std::size_t m : m_grid) {
            const LowerBoundCell& cur = report.cell(family_name(variant.family), c, m);
            if (prev && cur.rate > prev->rate && !cur.interval.overlaps(prev->interval))
                ok = false;
            prev = &cur;
        }
        report.monotone_ok[family_name(variant.family)] = ok;
    }

    if (!m_grid.empty()) {
        std::size_t m_last = m_grid.back();
        const LowerBoundCell& low = report.cell("dense_rows", c, m_last);
        const LowerBoundCell& high = report.cell("dense_rows", c + 1, m_last);
        report.higher_order_exceeds = high.rate > low.rate;
        report.higher_order_separated = !high.interval.overlaps(low.interval);
    }
    return report;
}

namespace {

// Recursively peels the last axis: for every sign pattern of sigma^(last),
// contracts it away and recurses on the remaining tensor.
double khintchine_recurse(std::span<const double> a, std::span<const std::size_t> dims) {
    if (dims.empty()) return std::pow(a[0], 4);
    std::size_t d_last = dims.back();
    std::size_t rest = a.size() / d_last;
    std::vector<double> contracted(rest);
    double acc = 0.0;
    std::size_t patterns = std::size_t{1} << d_last;
    for (std::size_t bits = 0; bits < patterns; ++bits) {
        for (std::size_t r = 0; r < rest; ++r) {
            double s = 0.0;
            const double* slice = a.data() + r * d_last;
            for (std::size_t j = 0; j < d_last; ++j)
                s += ((bits >> j) & 1u) ? slice[j] : -slice[j];
            contracted[r] = s;
        }
        acc += khintchine_recurse(contracted, dims.first(dims.size() - 1));
    }
    return acc / static_cast<double>(patterns);
}

}  // namespace

double khintchine_tensor_exact(std::span<const double> a, std::span<const std::size_t> dims) {
    std::size_t total = checked_dim_product(dims);
    if (total != a.size()) throw ShapeError("khintchine_tensor_exact: tensor size mismatch");
    if (total > (std::size_t{1} << 16))
        throw SizeError("khintchine_tensor_exact: tensor too large to enumerate");
    std::size_t sum_dims = 0;
    for (std::size_t d : dims) sum_dims += d;
    if (sum_dims > 20) throw SizeError("khintchine_tensor_exact: too many signs to enumerate");
    return khintchine_recurse(a, dims);
}

}  // namespace tsk
