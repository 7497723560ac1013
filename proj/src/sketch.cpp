#include "tsk/sketch.hpp"

#include <algorithm>
#include <cmath>

#include "tsk/fft.hpp"
#include "tsk/parallel.hpp"
#include "tsk/rng.hpp"
#include "tsk/tensor_ops.hpp"

namespace tsk {

namespace {

constexpr std::size_t kApplyGuard = std::size_t{1} << 24;

// Sign-diagonal + Walsh-Hadamard step shared by the sampled-Hadamard
// constructions: returns H (sign o x) zero-padded to `padded`.
DenseVector srht_transform(std::span<const double> sign, std::span<const double> x,
                           std::size_t padded) {
    DenseVector buf(padded, 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) buf[j] = sign[j] * x[j];
    fwht(buf);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearSketch
// ---------------------------------------------------------------------------

LinearSketch::LinearSketch(SketchConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

DenseVector LinearSketch::apply_tensor(std::span<const DenseVector> factors) const {
    if (factors.size() != cfg_.order())
        throw ShapeError("apply_tensor: expected " + std::to_string(cfg_.order()) +
                         " factors, got " + std::to_string(factors.size()));
    for (std::size_t k = 0; k < factors.size(); ++k)
        if (factors[k].size() != cfg_.factor_dims[k])
            throw ShapeError("apply_tensor: factor " + std::to_string(k) + " has dim " +
                             std::to_string(factors[k].size()) + ", expected " +
                             std::to_string(cfg_.factor_dims[k]));
    return do_apply_tensor(factors);
}

DenseVector LinearSketch::apply(const DenseVector& x) const {
    std::size_t dim = input_dim();
    if (x.size() != dim) throw ShapeError("apply: input dim mismatch");
    if (dim > kApplyGuard) throw SizeError("apply: input dimension exceeds 2^24 guard");
    return do_apply(x);
}

DenseMatrix LinearSketch::explicit_matrix() const {
    std::size_t dim = input_dim();
    std::size_t m = output_dim();
    if (dim > kApplyGuard / std::max<std::size_t>(m, 1))
        throw SizeError("explicit_matrix: more than 2^24 entries");
    DenseMatrix out(m, dim);
    parallel_for_index(dim, m * dim, std::size_t{1} << 16, [&](std::size_t j) {
        DenseVector e(dim, 0.0);
        e[j] = 1.0;
        DenseVector col = do_apply(e);
        for (std::size_t i = 0; i < m; ++i) out(i, j) = col[i];
    });
    return out;
}

std::unique_ptr<LinearSketch> build_sketch(const SketchConfig& cfg) {
    switch (cfg.family) {
        case SketchFamily::count_sketch_tensor: return std::make_unique<CountSketchTensor>(cfg);
        case SketchFamily::dense_rows: return std::make_unique<DenseRowsSketch>(cfg);
        case SketchFamily::fast_tensor_jl: return std::make_unique<FastTensorJlSketch>(cfg);
        case SketchFamily::recursive: return std::make_unique<RecursiveSketch>(cfg);
    }
    throw ConfigError("build_sketch: unknown family");
}

// ---------------------------------------------------------------------------
// DenseRowsSketch
// ---------------------------------------------------------------------------

DenseRowsSketch::DenseRowsSketch(SketchConfig cfg) : LinearSketch(std::move(cfg)) {
    std::size_t m = cfg_.rows;
    factors_.reserve(order());
    for (std::size_t k = 0; k < order(); ++k) {
        RngStream rng(cfg_.seed, k);
        DenseMatrix t(m, cfg_.factor_dims[k]);
        if (cfg_.entry_kind == EntryKind::rademacher) {
            for (double& v : t.data) v = rng.rademacher();
        } else {
            for (double& v : t.data) v = rng.gaussian();
        }
        factors_.push_back(std::move(t));
    }
    scale_ = 1.0 / std::sqrt(static_cast<double>(m));
}

DenseRowsSketch::DenseRowsSketch(SketchConfig cfg, std::vector<DenseMatrix> factors)
    : LinearSketch(std::move(cfg)), factors_(std::move(factors)) {
    if (factors_.size() != order()) throw ConfigError("DenseRowsSketch: factor count mismatch");
    for (std::size_t k = 0; k < order(); ++k)
        if (factors_[k].rows != cfg_.rows || factors_[k].cols != cfg_.factor_dims[k])
            throw ConfigError("DenseRowsSketch: factor matrix shape mismatch");
    scale_ = 1.0 / std::sqrt(static_cast<double>(cfg_.rows));
}

DenseVector DenseRowsSketch::do_apply_tensor(std::span<const DenseVector> factors) const {
    std::size_t m = cfg_.rows;
    DenseVector out(m, scale_);
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const DenseMatrix& t = factors_[k];
        const DenseVector& x = factors[k];
        parallel_for_index(m, m * t.cols, std::size_t{1} << 18, [&](std::size_t i) {
            const double* row = t.data.data() + i * t.cols;
            double s = 0.0;
            for (std::size_t j = 0; j < t.cols; ++j) s += row[j] * x[j];
            out[i] *= s;
        });
    }
    return out;
}

DenseVector DenseRowsSketch::do_apply(std::span<const double> x) const {
    std::size_t m = cfg_.rows;
    std::size_t dim = x.size();
    DenseVector out(m, 0.0);
    parallel_for_index(m, m * dim, std::size_t{1} << 18, [&](std::size_t i) {
        // Row i of the sketch is the Kronecker product of the factor rows.
        DenseVector w{1.0};
        for (const DenseMatrix& t : factors_) {
            DenseVector next(w.size() * t.cols);
            const double* row = t.data.data() + i * t.cols;
            std::size_t pos = 0;
            for (double wv : w)
                for (std::size_t j = 0; j < t.cols; ++j) next[pos++] = wv * row[j];
            w = std::move(next);
        }
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += w[j] * x[j];
        out[i] = scale_ * s;
    });
    return out;
}

// ---------------------------------------------------------------------------
// FastTensorJlSketch
// ---------------------------------------------------------------------------

FastTensorJlSketch::FastTensorJlSketch(SketchConfig cfg) : LinearSketch(std::move(cfg)) {
    std::size_t c = order();
    std::size_t m = cfg_.rows;
    signs_.resize(c);
    samples_.resize(c);
    padded_.resize(c);
    for (std::size_t k = 0; k < c; ++k) {
        padded_[k] = next_pow2(cfg_.factor_dims[k]);
        RngStream rng(cfg_.seed, k);
        signs_[k].resize(cfg_.factor_dims[k]);
        for (double& s : signs_[k]) s = rng.rademacher();
    }
    for (std::size_t k = 0; k < c; ++k) {
        RngStream rng(cfg_.seed, c + k);
        samples_[k].resize(m);
        for (std::size_t& idx : samples_[k]) idx = rng.uniform_index(padded_[k]);
    }
    scale_ = 1.0 / std::sqrt(static_cast<double>(m));
}

DenseVector FastTensorJlSketch::do_apply_tensor(std::span<const DenseVector> factors) const {
    std::size_t c = order();
    std::size_t m = cfg_.rows;
    std::vector<DenseVector> w(c);
    for (std::size_t k = 0; k < c; ++k) w[k] = srht_transform(signs_[k], factors[k], padded_[k]);
    DenseVector out(m);
    parallel_for_index(m, m * c, std::size_t{1} << 18, [&](std::size_t r) {
        double v = scale_;
        for (std::size_t k = 0; k < c; ++k) v *= w[k][samples_[k][r]];
        out[r] = v;
    });
    return out;
}

DenseVector FastTensorJlSketch::do_apply(std::span<const double> x) const {
    std::size_t c = order();
    std::size_t m = cfg_.rows;
    std::size_t padded_total = checked_dim_product(padded_);
    if (padded_total > (std::size_t{1} << 25))
        throw SizeError("fast_tensor_jl apply: padded dimension too large");

    // Strides of the padded tensor layout, leftmost factor most significant.
    std::vector<std::size_t> stride(c, 1);
    for (std::size_t k = c; k-- > 1;) stride[k - 1] = stride[k] * padded_[k];

    DenseVector buf(padded_total, 0.0);
    std::vector<std::size_t> parts(c, 0);
    for (std::size_t flat = 0; flat < x.size(); ++flat) {
        std::size_t pflat = 0;
        double sign = 1.0;
        for (std::size_t k = 0; k < c; ++k) {
            pflat += parts[k] * stride[k];
            sign *= signs_[k][parts[k]];
        }
        buf[pflat] = sign * x[flat];
        for (std::size_t k = c; k-- > 0;) {
            if (++parts[k] < cfg_.factor_dims[k]) break;
            parts[k] = 0;
        }
    }
    fwht(buf);
    DenseVector out(m);
    for (std::size_t r = 0; r < m; ++r) {
        std::size_t pflat = 0;
        for (std::size_t k = 0; k < c; ++k) pflat += samples_[k][r] * stride[k];
        out[r] = scale_ * buf[pflat];
    }
    return out;
}

// ---------------------------------------------------------------------------
// CountSketchTensor
// ---------------------------------------------------------------------------

CountSketchTensor::CountSketchTensor(SketchConfig cfg) : LinearSketch(std::move(cfg)) {
    buckets_ = next_pow2(cfg_.rows);
    std::size_t c = order();
    hashes_.resize(c);
    signs_.resize(c);
    for (std::size_t k = 0; k < c; ++k) {
        RngStream rng(cfg_.seed, k);
        std::size_t d = cfg_.factor_dims[k];
        hashes_[k].resize(d);
        signs_[k].resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            hashes_[k][j] = rng.uniform_index(buckets_);
            signs_[k][j] = rng.rademacher();
        }
    }
}

CountSketchTensor::CountSketchTensor(SketchConfig cfg,
                                     std::vector<std::vector<std::size_t>> hashes,
                                     std::vector<DenseVector> signs)
    : LinearSketch(std::move(cfg)), hashes_(std::move(hashes)), signs_(std::move(signs)) {
    buckets_ = next_pow2(cfg_.rows);
    if (hashes_.size() != order() || signs_.size() != order())
        throw ConfigError("CountSketchTensor: table count mismatch");
    for (std::size_t k = 0; k < order(); ++k) {
        if (hashes_[k].size() != cfg_.factor_dims[k] || signs_[k].size() != cfg_.factor_dims[k])
            throw ConfigError("CountSketchTensor: table length mismatch");
        for (std::size_t h : hashes_[k])
            if (h >= buckets_) throw ConfigError("CountSketchTensor: hash value out of range");
    }
}

std::unique_ptr<CountSketchTensor> CountSketchTensor::identity(std::size_t d, std::uint64_t seed) {
    SketchConfig cfg;
    cfg.family = SketchFamily::count_sketch_tensor;
    cfg.factor_dims = {d};
    cfg.rows = d;
    cfg.seed = seed;
    std::vector<std::size_t> hash(d);
    for (std::size_t j = 0; j < d; ++j) hash[j] = j;
    return std::make_unique<CountSketchTensor>(cfg, std::vector<std::vector<std::size_t>>{hash},
                                               std::vector<DenseVector>{DenseVector(d, 1.0)});
}

DenseVector CountSketchTensor::factor_sketch(std::size_t k, std::span<const double> x) const {
    DenseVector bucket(buckets_, 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) bucket[hashes_[k][j]] += signs_[k][j] * x[j];
    return bucket;
}

DenseVector CountSketchTensor::do_apply_tensor(std::span<const DenseVector> factors) const {
    if (order() == 1) return factor_sketch(0, factors[0]);
    // Spectra of the factor sketches multiplied together, one inverse FFT at
    // the end; for c=2 this is bit-identical to circular_convolve of the two
    // factor sketches.
    ComplexBuffer acc(buckets_);
    DenseVector first = factor_sketch(0, factors[0]);
    for (std::size_t i = 0; i < buckets_; ++i) acc[i] = first[i];
    fft_inplace(acc, false);
    for (std::size_t k = 1; k < order(); ++k) {
        DenseVector b = factor_sketch(k, factors[k]);
        ComplexBuffer fb(buckets_);
        for (std::size_t i = 0; i < buckets_; ++i) fb[i] = b[i];
        fft_inplace(fb, false);
        for (std::size_t i = 0; i < buckets_; ++i) acc[i] *= fb[i];
    }
    fft_inplace(acc, true);
    DenseVector out(buckets_);
    for (std::size_t i = 0; i < buckets_; ++i) out[i] = acc[i].real();
    return out;
}

DenseVector CountSketchTensor::do_apply(std::span<const double> x) const {
    std::size_t c = order();
    DenseVector out(buckets_, 0.0);
    std::size_t mask = buckets_ - 1;  // buckets_ is a power of two
    std::vector<std::size_t> parts(c, 0);
    for (std::size_t flat = 0; flat < x.size(); ++flat) {
        std::size_t h = 0;
        double sign = 1.0;
        for (std::size_t k = 0; k < c; ++k) {
            h += hashes_[k][parts[k]];
            sign *= signs_[k][parts[k]];
        }
        out[h & mask] += sign * x[flat];
        for (std::size_t k = c; k-- > 0;) {
            if (++parts[k] < cfg_.factor_dims[k]) break;
            parts[k] = 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// RecursiveSketch
// ---------------------------------------------------------------------------

RecursiveSketch::RecursiveSketch(SketchConfig cfg) : LinearSketch(std::move(cfg)) {
    std::size_t c = order();
    std::size_t inner = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(cfg_.rows) *
                                                 cfg_.epsilon_split_scale)));
    stage_rows_.resize(c);
    for (std::size_t f = 0; f < c; ++f) stage_rows_[f] = (f == 0) ? cfg_.rows : inner;

    stage_scale_.resize(c);
    for (std::size_t f = 0; f < c; ++f)
        stage_scale_[f] = 1.0 / std::sqrt(static_cast<double>(stage_rows_[f]));

    auto draw_part = [](RngStream& rng, std::size_t sign_len, std::size_t rows) {
        SrhtPart part;
        part.padded = next_pow2(sign_len);
        part.sign.resize(sign_len);
        for (double& s : part.sign) s = rng.rademacher();
        part.sample.resize(rows);
        for (std::size_t& idx : part.sample) idx = rng.uniform_index(part.padded);
        return part;
    };

    // Base stage consumes the last factor from stream c-1.
    {
        RngStream rng(cfg_.seed, c - 1);
        base_ = draw_part(rng, cfg_.factor_dims[c - 1], stage_rows_[c - 1]);
    }
    if (c >= 2) {
        q_.resize(c - 1);
        r_.resize(c - 1);
        for (std::size_t f = 0; f < c - 1; ++f) {
            RngStream rng(cfg_.seed, f);
            q_[f] = draw_part(rng, cfg_.factor_dims[f], stage_rows_[f]);
            r_[f] = draw_part(rng, stage_rows_[f + 1], stage_rows_[f]);
        }
    }
}

DenseVector RecursiveSketch::base_apply(std::span<const double> x) const {
    std::size_t c = order();
    DenseVector w = srht_transform(base_.sign, x, base_.padded);
    std::size_t m = stage_rows_[c - 1];
    DenseVector out(m);
    for (std::size_t r = 0; r < m; ++r) out[r] = stage_scale_[c - 1] * w[base_.sample[r]];
    return out;
}

DenseVector RecursiveSketch::combine_apply(std::size_t factor, std::span<const double> x,
                                           std::span<const double> v) const {
    const SrhtPart& q = q_[factor];
    const SrhtPart& r = r_[factor];
    DenseVector wq = srht_transform(q.sign, x, q.padded);
    DenseVector wr = srht_transform(r.sign, v, r.padded);
    std::size_t m = stage_rows_[factor];
    DenseVector out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = stage_scale_[factor] * wq[q.sample[i]] * wr[r.sample[i]];
    return out;
}

DenseVector RecursiveSketch::do_apply_tensor(std::span<const DenseVector> factors) const {
    std::size_t c = order();
    DenseVector v = base_apply(factors[c - 1]);
    for (std::size_t f = c - 1; f-- > 0;) v = combine_apply(f, factors[f], v);
    return v;
}

DenseVector RecursiveSketch::do_apply(std::span<const double> x) const {
    std::size_t c = order();
    if (c == 1) return base_apply(x);

    std::size_t d_last = cfg_.factor_dims[c - 1];
    std::size_t groups = x.size() / d_last;
    std::size_t m_in = stage_rows_[c - 1];

    // Reduce the last axis with the base stage.
    DenseVector y(groups * m_in);
    parallel_for_index(groups, groups * d_last, std::size_t{1} << 14, [&](std::size_t g) {
        DenseVector row = base_apply(std::span<const double>(x.data() + g * d_last, d_last));
        std::copy(row.begin(), row.end(), y.begin() + g * m_in);
    });

    // Fold in one factor per combine stage: each block of shape d_f x m_in is
    // mapped through Q on the factor axis and R on the reduced axis, sampling
    // the diagonal of the product.
    for (std::size_t f = c - 1; f-- > 0;) {
        std::size_t d_f = cfg_.factor_dims[f];
        std::size_t m_f = stage_rows_[f];
        std::size_t blocks = groups / d_f;
        const SrhtPart& q = q_[f];
        const SrhtPart& r = r_[f];

        DenseVector next(blocks * m_f);
        for (std::size_t b = 0; b < blocks; ++b) {
            const double* z = y.data() + b * d_f * m_in;
            DenseMatrix a(m_f, m_in);
            parallel_for_index(m_in, m_in * q.padded, std::size_t{1} << 15, [&](std::size_t k) {
                DenseVector col(q.padded, 0.0);
                for (std::size_t j = 0; j < d_f; ++j) col[j] = q.sign[j] * z[j * m_in + k];
                fwht(col);
                for (std::size_t row = 0; row < m_f; ++row) a(row, k) = col[q.sample[row]];
            });
            double* dst = next.data() + b * m_f;
            parallel_for_index(m_f, m_f * r.padded, std::size_t{1} << 15, [&](std::size_t row) {
                DenseVector buf(r.padded, 0.0);
                const double* arow = a.data.data() + row * m_in;
                for (std::size_t k = 0; k < m_in; ++k) buf[k] = r.sign[k] * arow[k];
                fwht(buf);
                dst[row] = stage_scale_[f] * buf[r.sample[row]];
            });
        }
        y = std::move(next);
        groups = blocks;
        m_in = m_f;
    }
    return y;
}

DenseMatrix RecursiveSketch::stage_matrix(std::size_t factor) const {
    std::size_t c = order();
    if (factor >= c) throw IndexError("stage_matrix: no such stage");
    if (factor == c - 1) {
        std::size_t d = cfg_.factor_dims[c - 1];
        DenseMatrix out(stage_rows_[c - 1], d);
        for (std::size_t j = 0; j < d; ++j) {
            DenseVector e(d, 0.0);
            e[j] = 1.0;
            DenseVector col = base_apply(e);
            for (std::size_t i = 0; i < out.rows; ++i) out(i, j) = col[i];
        }
        return out;
    }
    std::size_t d = cfg_.factor_dims[factor];
    std::size_t m_in = stage_rows_[factor + 1];
    DenseMatrix out(stage_rows_[factor], d * m_in);
    for (std::size_t j = 0; j < d; ++j) {
        DenseVector ex(d, 0.0);
        ex[j] = 1.0;
        for (std::size_t k = 0; k < m_in; ++k) {
            DenseVector ev(m_in, 0.0);
            ev[k] = 1.0;
            DenseVector col = combine_apply(factor, ex, ev);
            for (std::size_t i = 0; i < out.rows; ++i) out(i, j * m_in + k) = col[i];
        }
    }
    return out;
}

}  // namespace tsk
