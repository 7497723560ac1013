#pragma once

#include <memory>
#include <span>
#include <vector>

#include "tsk/config.hpp"
#include "tsk/types.hpp"

namespace tsk {

/// A frozen random linear map R^{d1*...*dc} -> R^m. All randomness is drawn
/// at construction from the config seed; two sketches with equal configs
/// produce bit-identical outputs. Instances are immutable and safe to share
/// across threads.
class LinearSketch {
  public:
    explicit LinearSketch(SketchConfig cfg);
    virtual ~LinearSketch() = default;

    const SketchConfig& config() const { return cfg_; }
    std::size_t order() const { return cfg_.order(); }
    std::size_t input_dim() const { return cfg_.input_dim(); }

    /// Output dimension. Equals config().rows except for the count-sketch
    /// family, which pads the bucket count to the next power of two so the
    /// factor sketches can be combined by radix-2 FFT convolution.
    virtual std::size_t output_dim() const { return cfg_.rows; }

    /// Fast application to a rank-one tensor given by its factors.
    DenseVector apply_tensor(std::span<const DenseVector> factors) const;

    /// Application to an arbitrary vector of the full tensor dimension,
    /// computed without materializing the sketch matrix. Guarded at 2^24.
    DenseVector apply(const DenseVector& x) const;

    /// The output_dim x input_dim matrix M with apply(x) = Mx, built
    /// column by column from apply on basis vectors. Guarded at 2^24 entries.
    DenseMatrix explicit_matrix() const;

  protected:
    virtual DenseVector do_apply_tensor(std::span<const DenseVector> factors) const = 0;
    virtual DenseVector do_apply(std::span<const double> x) const = 0;

    SketchConfig cfg_;
};

std::unique_ptr<LinearSketch> build_sketch(const SketchConfig& cfg);

// ---------------------------------------------------------------------------
// Families. The concrete classes are public so tests can reach structural
// accessors and the forced-randomness hooks.
// ---------------------------------------------------------------------------

/// Face-split of c independent m x d_i matrices with iid Rademacher or
/// Gaussian entries, applied as (1/sqrt(m)) (T1 x1 o ... o Tc xc).
class DenseRowsSketch final : public LinearSketch {
  public:
    explicit DenseRowsSketch(SketchConfig cfg);
    /// Forced-randomness hook: use the given factor matrices verbatim.
    DenseRowsSketch(SketchConfig cfg, std::vector<DenseMatrix> factors);

    const DenseMatrix& factor_matrix(std::size_t k) const { return factors_[k]; }

  protected:
    DenseVector do_apply_tensor(std::span<const DenseVector> factors) const override;
    DenseVector do_apply(std::span<const double> x) const override;

  private:
    std::vector<DenseMatrix> factors_;
    double scale_;
};

/// SHD sampled-Hadamard construction with a tensor-diagonal sign matrix:
/// per-factor Rademacher diagonals, one shared Hadamard rotation, and m
/// uniform coordinate samples stored decomposed per factor.
class FastTensorJlSketch final : public LinearSketch {
  public:
    explicit FastTensorJlSketch(SketchConfig cfg);

    const DenseVector& sign_vector(std::size_t k) const { return signs_[k]; }
    const std::vector<std::size_t>& sample_indices(std::size_t k) const { return samples_[k]; }
    const std::vector<std::size_t>& padded_dims() const { return padded_; }

  protected:
    DenseVector do_apply_tensor(std::span<const DenseVector> factors) const override;
    DenseVector do_apply(std::span<const double> x) const override;

  private:
    std::vector<DenseVector> signs_;                 // per factor, length d_k
    std::vector<std::vector<std::size_t>> samples_;  // per factor, length m
    std::vector<std::size_t> padded_;                // next_pow2(d_k)
    double scale_;
};

/// Classic tensor sketch: per-factor count sketches combined by circular
/// convolution (via FFT for c >= 2). Unscaled; buckets = next_pow2(rows).
class CountSketchTensor final : public LinearSketch {
  public:
    explicit CountSketchTensor(SketchConfig cfg);
    /// Forced-randomness hook: explicit hash and sign tables.
    CountSketchTensor(SketchConfig cfg, std::vector<std::vector<std::size_t>> hashes,
                      std::vector<DenseVector> signs);

    /// Identity-configured instance on dimension d (one factor, identity
    /// hash, all-plus signs); exact on any input when d is a power of two.
    static std::unique_ptr<CountSketchTensor> identity(std::size_t d, std::uint64_t seed = 0);

    std::size_t output_dim() const override { return buckets_; }
    std::size_t bucket_count() const { return buckets_; }
    const std::vector<std::size_t>& hash_table(std::size_t k) const { return hashes_[k]; }
    const DenseVector& sign_table(std::size_t k) const { return signs_[k]; }

    /// The count sketch of one factor vector (a length-buckets vector).
    DenseVector factor_sketch(std::size_t k, std::span<const double> x) const;

  protected:
    DenseVector do_apply_tensor(std::span<const DenseVector> factors) const override;
    DenseVector do_apply(std::span<const double> x) const override;

  private:
    std::vector<std::vector<std::size_t>> hashes_;  // per factor, [d_k] -> [buckets)
    std::vector<DenseVector> signs_;                // per factor, +-1
    std::size_t buckets_;
};

/// Sketch-and-reduce composition: an order-1 sampled-Hadamard stage for the
/// last factor, then one order-2 combine stage per remaining factor, applied
/// as v <- Q x_f o R v. The final stage has config().rows rows; inner stages
/// have round(rows * epsilon_split_scale).
class RecursiveSketch final : public LinearSketch {
  public:
    explicit RecursiveSketch(SketchConfig cfg);

    /// Stages indexed by the factor they consume: stage order()-1 is the
    /// order-1 base stage, stages order()-2 .. 0 are combine stages.
    std::size_t stage_rows(std::size_t factor) const { return stage_rows_[factor]; }

    /// Materialized map of one stage including its scale. The base stage is
    /// stage_rows x d_{c-1}; combine stage f is stage_rows(f) x (d_f *
    /// stage_rows(f+1)) with column index j * stage_rows(f+1) + k for
    /// e_j (x) e_k.
    DenseMatrix stage_matrix(std::size_t factor) const;

  protected:
    DenseVector do_apply_tensor(std::span<const DenseVector> factors) const override;
    DenseVector do_apply(std::span<const double> x) const override;

  private:
    struct SrhtPart {
        DenseVector sign;                 // meaningful entries of the diagonal
        std::vector<std::size_t> sample;  // row samples in [padded)
        std::size_t padded = 1;
    };

    DenseVector base_apply(std::span<const double> x) const;
    DenseVector combine_apply(std::size_t factor, std::span<const double> x,
                              std::span<const double> v) const;

    // q_[f], r_[f] valid for f < order()-1; base_ consumes factor order()-1.
    std::vector<SrhtPart> q_, r_;
    SrhtPart base_;
    std::vector<std::size_t> stage_rows_;
    std::vector<double> stage_scale_;
};

}  // namespace tsk
