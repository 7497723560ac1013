#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tsk/linalg.hpp"
#include "tsk/sketch.hpp"
#include "tsk/stats.hpp"
#include "tsk/validation.hpp"

// Downstream guarantees as executable checks: approximate matrix
// multiplication, oblivious-subspace-embedding verification, and polynomial
// kernel feature maps with a sketched ridge regression demo.

namespace tsk {

struct SubspaceSpec {
    std::size_t ambient_dim = 0;
    std::size_t subspace_dim = 0;
    DenseMatrix basis;  // ambient_dim x subspace_dim, orthonormal columns

    /// Throws InputError unless basis columns are orthonormal within 1e-10.
    void validate() const;
};

/// Haar-ish random subspace: orthonormalized Gaussian basis.
SubspaceSpec random_subspace(std::size_t ambient_dim, std::size_t subspace_dim,
                             std::uint64_t seed);

/// Monte-Carlo distribution of |A^T M^T M B - A^T B|_F / (|A|_F |B|_F) over
/// fresh sketches. p=2 moment of the result is the RMS error.
TrialStatistics amm_error(const SketchConfig& cfg, const DenseMatrix& a, const DenseMatrix& b,
                          std::size_t trials, std::uint64_t seed);
TrialStatistics amm_error_with(const SketchFactory& factory, const DenseMatrix& a,
                               const DenseMatrix& b, std::size_t trials);

struct OseTrial {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double op_deviation = 0.0;  // max_j |sigma_j^2 - 1| = |U^T M^T M U - I|_2
    bool pass = false;
};

struct OseResult {
    double epsilon = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t passes = 0;
    double pass_rate = 0.0;
    Interval interval;
    std::vector<OseTrial> per_trial;
};

/// Per trial: sketch the orthonormal basis columns, take singular values of
/// MU, and pass iff max_j |sigma_j^2 - 1| <= 2 eps + eps^2 (the operator-norm
/// form of the subspace-embedding criterion).
OseResult ose_check(const SketchConfig& cfg, const SubspaceSpec& subspace, double epsilon,
                    std::size_t trials, std::uint64_t seed);
OseResult ose_check_with(const SketchFactory& factory, const SubspaceSpec& subspace,
                         double epsilon, std::size_t trials);

/// Degree-c polynomial P(t) = sum_k a_k t^k with nonnegative coefficients
/// and per-degree sketch row counts.
struct PolyKernelSpec {
    std::vector<double> coefficients;    // a_0..a_c
    std::vector<std::size_t> block_rows; // m_1..m_c (block_rows[k-1] for degree k)

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
    double evaluate(double t) const;  // Horner
    void validate() const;
};

/// Feature map z(x) = sqrt(a_0) (+) sqrt(a_1) M_1 x (+) sqrt(a_2) M_2(x(x)x)
/// (+) ... where M_k is a degree-k sketch of the chosen family. Satisfies
/// E<z(x), z(y)> = P(<x,y>). Blocks for zero coefficients are omitted.
class PolyFeatureMap {
  public:
    PolyFeatureMap(PolyKernelSpec spec, SketchFamily family, std::size_t input_dim,
                   std::uint64_t seed);

    /// Injected-sketch hook: one prebuilt sketch per active degree (ascending),
    /// each with factor_dims = k copies of input_dim.
    PolyFeatureMap(PolyKernelSpec spec, std::size_t input_dim,
                   std::vector<std::unique_ptr<LinearSketch>> sketches);

    std::size_t output_dim() const { return output_dim_; }
    const PolyKernelSpec& spec() const { return spec_; }
    DenseVector transform(const DenseVector& x) const;

  private:
    PolyKernelSpec spec_;
    std::size_t input_dim_;
    std::size_t output_dim_;
    std::vector<std::size_t> active_degrees_;
    std::vector<std::unique_ptr<LinearSketch>> sketches_;
};

/// One-shot feature map application (builds the per-degree sketches from the
/// seed, then transforms x).
DenseVector poly_kernel_features(const PolyKernelSpec& spec, SketchFamily family,
                                 const DenseVector& x, std::uint64_t seed);

struct RidgeDemoResult {
    DenseVector weights;        // in feature space
    double sketched_rmse = 0.0; // train RMSE of the sketched-feature solve
    double exact_rmse = 0.0;    // train RMSE of the exact-Gram kernel solve
    std::size_t feature_dim = 0;
};

/// Ridge regression on sketched polynomial features versus the exact
/// polynomial-kernel solution from the n x n Gram matrix. The sketched
/// problem is solved through whichever of the primal/dual normal equations
/// is smaller; both give the same minimizer.
RidgeDemoResult sketched_ridge_demo(const DenseMatrix& x_rows, const DenseVector& targets,
                                    const PolyKernelSpec& spec, SketchFamily family,
                                    double ridge, std::uint64_t seed);

/// Same solve against a caller-supplied feature map.
RidgeDemoResult sketched_ridge_demo(const DenseMatrix& x_rows, const DenseVector& targets,
                                    const PolyFeatureMap& map, double ridge);

struct Dataset {
    DenseMatrix features;  // n x d
    DenseVector targets;   // n
};

/// CSV with a header line; every following row is d feature columns plus the
/// target in the last column. Throws ParseError naming the offending line.
Dataset load_dataset_csv(const std::string& path);

/// Deterministic synthetic regression set: unit-norm rows, targets follow a
/// quadratic polynomial of a planted direction plus small noise.
Dataset make_synthetic_dataset(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace tsk
