#include "tsk/applications.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tsk/rng.hpp"

namespace tsk {

void SubspaceSpec::validate() const {
    if (basis.rows != ambient_dim || basis.cols != subspace_dim)
        throw InputError("SubspaceSpec: basis shape mismatch");
    DenseMatrix gram = transpose_matmul(basis, basis);
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (std::size_t j = 0; j < gram.cols; ++j) {
            double want = i == j ? 1.0 : 0.0;
            if (std::fabs(gram(i, j) - want) > 1e-10)
                throw InputError("SubspaceSpec: basis is not orthonormal");
        }
}

SubspaceSpec random_subspace(std::size_t ambient_dim, std::size_t subspace_dim,
                             std::uint64_t seed) {
    SubspaceSpec spec;
    spec.ambient_dim = ambient_dim;
    spec.subspace_dim = subspace_dim;
    spec.basis = DenseMatrix(ambient_dim, subspace_dim);
    RngStream rng(seed, 0);
    for (double& v : spec.basis.data) v = rng.gaussian();
    orthonormalize_columns(spec.basis);
    return spec;
}

namespace {

// Sketch every column of a through the map.
DenseMatrix sketch_columns(const LinearSketch& sketch, const DenseMatrix& a) {
    DenseMatrix out(sketch.output_dim(), a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) {
        DenseVector col(a.rows);
        for (std::size_t i = 0; i < a.rows; ++i) col[i] = a(i, j);
        DenseVector sketched = sketch.apply(col);
        for (std::size_t i = 0; i < out.rows; ++i) out(i, j) = sketched[i];
    }
    return out;
}

}  // namespace

TrialStatistics amm_error_with(const SketchFactory& factory, const DenseMatrix& a,
                               const DenseMatrix& b, std::size_t trials) {
    if (a.rows != b.rows) throw ShapeError("amm_error: A and B must have equal row counts");
    if (a.rows > (std::size_t{1} << 14)) throw SizeError("amm_error: ambient dim above 2^14");
    DenseMatrix exact = transpose_matmul(a, b);
    double denom = frobenius_norm(a) * frobenius_norm(b);
    if (denom == 0.0) throw InputError("amm_error: zero input matrix");

    std::vector<double> samples(trials);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
        auto sketch = factory(static_cast<std::uint64_t>(t));
        DenseMatrix ma = sketch_columns(*sketch, a);
        DenseMatrix mb = sketch_columns(*sketch, b);
        DenseMatrix approx = transpose_matmul(ma, mb);
        double err = 0.0;
        for (std::size_t i = 0; i < approx.data.size(); ++i) {
            double diff = approx.data[i] - exact.data[i];
            err += diff * diff;
        }
        samples[static_cast<std::size_t>(t)] = std::sqrt(err) / denom;
    }
    const double p_grid[] = {1.0, 2.0};
    return TrialStatistics::from_samples(samples, p_grid, kDefaultEpsGrid);
}

TrialStatistics amm_error(const SketchConfig& cfg, const DenseMatrix& a, const DenseMatrix& b,
                          std::size_t trials, std::uint64_t seed) {
    if (a.rows != cfg.input_dim()) throw ShapeError("amm_error: sketch/input dim mismatch");
    return amm_error_with(family_factory(cfg, seed), a, b, trials);
}

OseResult ose_check_with(const SketchFactory& factory, const SubspaceSpec& subspace,
                         double epsilon, std::size_t trials) {
    subspace.validate();
    if (subspace.ambient_dim > (std::size_t{1} << 14))
        throw SizeError("ose_check: ambient dim above 2^14");
    if (subspace.subspace_dim > 64) throw SizeError("ose_check: subspace dim above 64");

    OseResult result;
    result.epsilon = epsilon;
    result.trials = trials;
    result.per_trial.resize(trials);
    double threshold = 2.0 * epsilon + epsilon * epsilon;

#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
        auto sketch = factory(static_cast<std::uint64_t>(t));
        DenseMatrix mu = sketch_columns(*sketch, subspace.basis);
        DenseVector sv = singular_values(mu);
        OseTrial trial;
        trial.sigma_min = sv.front();
        trial.sigma_max = sv.back();
        for (double s : sv)
            trial.op_deviation = std::max(trial.op_deviation, std::fabs(s * s - 1.0));
        trial.pass = trial.op_deviation <= threshold;
        result.per_trial[static_cast<std::size_t>(t)] = trial;
    }
    for (const OseTrial& trial : result.per_trial)
        if (trial.pass) ++result.passes;
    result.pass_rate =
        trials == 0 ? 0.0 : static_cast<double>(result.passes) / static_cast<double>(trials);
    result.interval = wilson_interval(result.passes, trials);
    return result;
}

OseResult ose_check(const SketchConfig& cfg, const SubspaceSpec& subspace, double epsilon,
                    std::size_t trials, std::uint64_t seed) {
    if (subspace.ambient_dim != cfg.input_dim())
        throw ShapeError("ose_check: sketch/subspace dim mismatch");
    return ose_check_with(family_factory(cfg, seed), subspace, epsilon, trials);
}

double PolyKernelSpec::evaluate(double t) const {
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;) acc = acc * t + coefficients[k];
    return acc;
}

void PolyKernelSpec::validate() const {
    if (coefficients.empty()) throw ConfigError("PolyKernelSpec: no coefficients");
    bool any = false;
    for (double a : coefficients) {
        if (a < 0.0)
            throw ConfigError("PolyKernelSpec: coefficients must be nonnegative "
                              "(the per-degree blocks carry sqrt(a_k))");
        if (a > 0.0) any = true;
    }
    if (!any) throw ConfigError("PolyKernelSpec: at least one coefficient must be positive");
    if (block_rows.size() + 1 < coefficients.size())
        throw ConfigError("PolyKernelSpec: missing per-degree row counts");
    for (std::size_t k = 1; k < coefficients.size(); ++k)
        if (coefficients[k] > 0.0 && block_rows[k - 1] == 0)
            throw ConfigError("PolyKernelSpec: zero rows for an active degree");
}

PolyFeatureMap::PolyFeatureMap(PolyKernelSpec spec, SketchFamily family, std::size_t input_dim,
                               std::uint64_t seed)
    : spec_(std::move(spec)), input_dim_(input_dim) {
    spec_.validate();
    output_dim_ = 1;  // scalar block for a_0, kept even when a_0 = 0
    for (std::size_t k = 1; k < spec_.coefficients.size(); ++k) {
        if (spec_.coefficients[k] == 0.0) continue;
        SketchConfig cfg;
        cfg.family = family;
        cfg.factor_dims.assign(k, input_dim_);
        cfg.rows = spec_.block_rows[k - 1];
        cfg.seed = derive_seed(seed, k);
        auto sketch = build_sketch(cfg);
        output_dim_ += sketch->output_dim();
        active_degrees_.push_back(k);
        sketches_.push_back(std::move(sketch));
    }
}

PolyFeatureMap::PolyFeatureMap(PolyKernelSpec spec, std::size_t input_dim,
                               std::vector<std::unique_ptr<LinearSketch>> sketches)
    : spec_(std::move(spec)), input_dim_(input_dim), sketches_(std::move(sketches)) {
    spec_.validate();
    output_dim_ = 1;
    std::size_t next = 0;
    for (std::size_t k = 1; k < spec_.coefficients.size(); ++k) {
        if (spec_.coefficients[k] == 0.0) continue;
        if (next >= sketches_.size())
            throw ConfigError("PolyFeatureMap: missing sketch for an active degree");
        const LinearSketch& sketch = *sketches_[next];
        if (sketch.order() != k || sketch.input_dim() != checked_dim_product(
                                                             std::vector<std::size_t>(k, input_dim_)))
            throw ConfigError("PolyFeatureMap: sketch shape does not match its degree");
        output_dim_ += sketch.output_dim();
        active_degrees_.push_back(k);
        ++next;
    }
    if (next != sketches_.size())
        throw ConfigError("PolyFeatureMap: more sketches than active degrees");
}

DenseVector PolyFeatureMap::transform(const DenseVector& x) const {
    if (x.size() != input_dim_) throw ShapeError("PolyFeatureMap: input dim mismatch");
    DenseVector z;
    z.reserve(output_dim_);
    z.push_back(std::sqrt(spec_.coefficients[0]));
    for (std::size_t i = 0; i < active_degrees_.size(); ++i) {
        std::size_t k = active_degrees_[i];
        std::vector<DenseVector> factors(k, x);
        DenseVector block = sketches_[i]->apply_tensor(factors);
        double root = std::sqrt(spec_.coefficients[k]);
        for (double v : block) z.push_back(root * v);
    }
    return z;
}

DenseVector poly_kernel_features(const PolyKernelSpec& spec, SketchFamily family,
                                 const DenseVector& x, std::uint64_t seed) {
    return PolyFeatureMap(spec, family, x.size(), seed).transform(x);
}

RidgeDemoResult sketched_ridge_demo(const DenseMatrix& x_rows, const DenseVector& targets,
                                    const PolyKernelSpec& spec, SketchFamily family,
                                    double ridge, std::uint64_t seed) {
    PolyFeatureMap map(spec, family, x_rows.cols, seed);
    return sketched_ridge_demo(x_rows, targets, map, ridge);
}

RidgeDemoResult sketched_ridge_demo(const DenseMatrix& x_rows, const DenseVector& targets,
                                    const PolyFeatureMap& map, double ridge) {
    std::size_t n = x_rows.rows;
    std::size_t d = x_rows.cols;
    if (targets.size() != n) throw ShapeError("sketched_ridge_demo: target count mismatch");
    if (n > 10000 || d > 256) throw SizeError("sketched_ridge_demo: beyond desk scale");
    if (ridge < 0.0) throw ConfigError("sketched_ridge_demo: ridge must be nonnegative");

    const PolyKernelSpec& spec = map.spec();
    std::size_t feat = map.output_dim();
    DenseMatrix z(n, feat);
    for (std::size_t i = 0; i < n; ++i) {
        DenseVector row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = x_rows(i, j);
        DenseVector zi = map.transform(row);
        for (std::size_t j = 0; j < feat; ++j) z(i, j) = zi[j];
    }

    RidgeDemoResult result;
    result.feature_dim = feat;
    DenseVector preds;
    if (feat <= n) {
        DenseMatrix gram = transpose_matmul(z, z);  // feat x feat
        DenseVector rhs(feat, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < feat; ++j) rhs[j] += z(i, j) * targets[i];
        result.weights = cholesky_solve(std::move(gram), std::move(rhs), ridge);
        preds = matvec(z, result.weights);
    } else {
        // Dual form of the same normal equations: w = Z^T (Z Z^T + ridge I)^{-1} y.
        DenseMatrix gram(n, n);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            for (std::size_t j = 0; j <= static_cast<std::size_t>(i); ++j) {
                double s = dot(z.row(static_cast<std::size_t>(i)), z.row(j));
                gram(static_cast<std::size_t>(i), j) = s;
                gram(j, static_cast<std::size_t>(i)) = s;
            }
        DenseVector alpha = cholesky_solve(gram, targets, ridge);
        preds = matvec(gram, alpha);
        result.weights.assign(feat, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < feat; ++j) result.weights[j] += z(i, j) * alpha[i];
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double diff = preds[i] - targets[i];
        err += diff * diff;
    }
    result.sketched_rmse = std::sqrt(err / static_cast<double>(n));

    // Exact polynomial-kernel ridge from the n x n Gram oracle.
    DenseMatrix kernel(n, n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        for (std::size_t j = 0; j <= static_cast<std::size_t>(i); ++j) {
            double t = dot(x_rows.row(static_cast<std::size_t>(i)), x_rows.row(j));
            double v = spec.evaluate(t);
            kernel(static_cast<std::size_t>(i), j) = v;
            kernel(j, static_cast<std::size_t>(i)) = v;
        }
    DenseVector alpha = cholesky_solve(kernel, targets, ridge);
    DenseVector exact_preds = matvec(kernel, alpha);
    double exact_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double diff = exact_preds[i] - targets[i];
        exact_err += diff * diff;
    }
    result.exact_rmse = std::sqrt(exact_err / static_cast<double>(n));
    return result;
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file (header expected)");

    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(path + ": line " + std::to_string(line_no) +
                                 ": cannot parse value '" + cell + "'");
            }
        }
        if (row.size() < 2)
            throw ParseError(path + ": line " + std::to_string(line_no) +
                             ": need at least one feature and a target");
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw ParseError(path + ": line " + std::to_string(line_no) +
                             ": expected " + std::to_string(width) + " columns, got " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");

    Dataset ds;
    ds.features = DenseMatrix(rows.size(), width - 1);
    ds.targets.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j + 1 < width; ++j) ds.features(i, j) = rows[i][j];
        ds.targets[i] = rows[i][width - 1];
    }
    return ds;
}

Dataset make_synthetic_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
    Dataset ds;
    ds.features = DenseMatrix(n, d);
    ds.targets.resize(n);
    RngStream rng(seed, 0);
    DenseVector planted(d);
    for (double& v : planted) v = rng.gaussian();
    double pn = norm2(planted);
    for (double& v : planted) v /= pn;
    for (std::size_t i = 0; i < n; ++i) {
        DenseVector row(d);
        for (double& v : row) v = rng.gaussian();
        double rn = norm2(row);
        for (std::size_t j = 0; j < d; ++j) ds.features(i, j) = row[j] / rn;
        double t = 0.0;
        for (std::size_t j = 0; j < d; ++j) t += ds.features(i, j) * planted[j];
        ds.targets[i] = (1.0 + t) * (1.0 + t) + 0.01 * rng.gaussian();
    }
    return ds;
}

}  // namespace tsk
