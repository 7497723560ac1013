#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tsk/config.hpp"
#include "tsk/sketch.hpp"
#include "tsk/stats.hpp"

// Statistical and exact verification of the moment guarantees: Monte-Carlo
// moment/tail estimators, the per-p moment check, exact enumeration of the
// tensor Khintchine fourth moment, and the adversarial lower-bound
// experiment.

namespace tsk {

/// Builds a fresh sketch for trial t; the default factory derives the trial
/// seed from the experiment seed and builds the configured family. Tests
/// substitute hooks here.
using SketchFactory = std::function<std::unique_ptr<LinearSketch>(std::uint64_t trial)>;

SketchFactory family_factory(SketchConfig cfg, std::uint64_t seed);

inline constexpr double kDefaultEpsGridArr[] = {0.05, 0.1, 0.25, 0.5};
inline constexpr std::span<const double> kDefaultEpsGrid{kDefaultEpsGridArr};

/// Draws `trials` independent sketches, applies each to the (internally
/// normalized) rank-one tensor with the given factors, and accumulates
/// moments of |Mx|^2 - 1 plus tail counts. Deterministic given (config,
/// seed, trials) and invariant to the worker thread count.
TrialStatistics estimate_moments(const SketchConfig& cfg, std::span<const DenseVector> factors,
                                 std::span<const double> p_grid, std::size_t trials,
                                 std::uint64_t seed,
                                 std::span<const double> eps_grid = kDefaultEpsGrid);

/// Same estimator with an injected per-trial sketch factory.
TrialStatistics estimate_moments_with(const SketchFactory& factory,
                                      std::span<const DenseVector> factors,
                                      std::span<const double> p_grid, std::size_t trials,
                                      std::span<const double> eps_grid = kDefaultEpsGrid);

/// Per-p outcome of the moment-bound check.
struct MomentCheck {
    double p = 0.0;
    double empirical = 0.0;
    double bound = 0.0;  // slack * (eps/e) * sqrt(p / log(1/delta))
    bool pass = false;
};

struct StrongJlReport {
    bool pass = false;
    std::vector<MomentCheck> checks;
};

/// Pass iff every p in the budget grid satisfies
/// empirical <= slack * (eps/e) * sqrt(p/log(1/delta)), boundary inclusive.
StrongJlReport strong_jl_check(const TrialStatistics& stats, const MomentBudget& budget);

/// c copies of the all-ones vector scaled by 1/sqrt(d); their Kronecker
/// product is the unit-norm tensor on which sign-product sketches
/// concentrate worst.
std::vector<DenseVector> adversarial_vector(std::size_t d, std::size_t c);

struct LowerBoundCell {
    std::string family;
    std::size_t c = 0;
    std::size_t m = 0;
    std::uint64_t failures = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    Interval interval;
};

struct LowerBoundReport {
    std::size_t d = 0;
    std::size_t c = 0;
    double epsilon = 0.0;
    std::uint64_t trials = 0;
    std::vector<LowerBoundCell> cells;
    /// Per family: failure rate nonincreasing in m within interval overlap.
    std::map<std::string, bool> monotone_ok;
    /// dense_rows at order c+1 fails more often than at order c (largest m),
    /// with non-overlapping intervals.
    bool higher_order_exceeds = false;
    bool higher_order_separated = false;

    const LowerBoundCell& cell(const std::string& family, std::size_t order,
                               std::size_t m) const;
};

/// Failure rates Pr[| |My|^2 - 1 | > eps] on the adversarial vector across an
/// m grid for the dense, count-sketch and fast families, plus dense rows at
/// order c+1 for the order-effect comparison. One substream per trial shared
/// across the m grid, so curves are positively coupled.
LowerBoundReport lower_bound_experiment(std::span<const std::size_t> m_grid, std::size_t d,
                                        std::size_t c, double epsilon, std::size_t trials,
                                        std::uint64_t seed);

/// The exact fourth moment E <sigma^(1) x ... x sigma^(c), a>^4 by exhaustive
/// enumeration of all sign assignments. Requires prod(dims) <= 2^16 and
/// sum(dims) <= 20.
double khintchine_tensor_exact(std::span<const double> a, std::span<const std::size_t> dims);

}  // namespace tsk
