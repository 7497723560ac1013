// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Every threshold is pinned here; nothing defers to later
// calibration. Expected runtime: about a minute on two cores.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tsk/applications.hpp"
#include "tsk/fft.hpp"
#include "tsk/linalg.hpp"
#include "tsk/reference.hpp"
#include "tsk/rng.hpp"
#include "tsk/sketch.hpp"
#include "tsk/tensor_ops.hpp"
#include "tsk/validation.hpp"

using namespace tsk;
using clk = std::chrono::steady_clock;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({id, name, pass, detail});
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

double seconds_since(clk::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clk::now() - start).count() /
           1000.0;
}

SketchConfig make_config(SketchFamily family, std::vector<std::size_t> dims, std::size_t rows,
                         std::uint64_t seed, EntryKind kind = EntryKind::rademacher) {
    SketchConfig cfg;
    cfg.family = family;
    cfg.factor_dims = std::move(dims);
    cfg.rows = rows;
    cfg.seed = seed;
    cfg.entry_kind = kind;
    return cfg;
}

const SketchFamily kFamilies[] = {
    SketchFamily::count_sketch_tensor,
    SketchFamily::dense_rows,
    SketchFamily::fast_tensor_jl,
    SketchFamily::recursive,
};

DenseVector random_unit(RngStream& rng, std::size_t n) {
    DenseVector v(n);
    for (double& x : v) x = rng.gaussian();
    double norm = norm2(v);
    for (double& x : v) x /= norm;
    return v;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// --------------------------------------------------------------------------
// 1. Oracle equivalence across the full small grid.
// --------------------------------------------------------------------------
void criterion_oracle() {
    auto start = clk::now();
    double worst = 0.0;
    std::size_t instances = 0;
    for (SketchFamily family : kFamilies) {
        for (std::size_t d : {2u, 3u, 4u}) {
            for (std::size_t c : {1u, 2u, 3u}) {
                for (std::size_t m : {1u, 4u, 8u}) {
                    for (std::uint64_t seed = 0; seed < 100; ++seed) {
                        SketchConfig cfg =
                            make_config(family, std::vector<std::size_t>(c, d), m,
                                        derive_seed(1000 + seed, c * 100 + d * 10 + m));
                        auto sketch = build_sketch(cfg);
                        RngStream rng(cfg.seed, 424242);
                        std::vector<DenseVector> factors;
                        DenseVector x{1.0};
                        for (std::size_t k = 0; k < c; ++k) {
                            DenseVector f(d);
                            for (double& v : f) v = rng.gaussian();
                            x = kron_vec(x, f);
                            factors.push_back(std::move(f));
                        }
                        DenseVector fast = sketch->apply_tensor(factors);
                        DenseVector slow = ref::matvec(sketch->explicit_matrix(), x);
                        double scale = 0.0, diff = 0.0;
                        for (std::size_t i = 0; i < fast.size(); ++i) {
                            scale = std::max(scale, std::fabs(slow[i]));
                            diff = std::max(diff, std::fabs(fast[i] - slow[i]));
                        }
                        worst = std::max(worst, diff / std::max(scale, 1e-300));
                        ++instances;
                    }
                }
            }
        }
    }
    double elapsed = seconds_since(start);
    bool pass = worst <= 1e-10 && elapsed < 30.0;
    record(1, "oracle equivalence (4 families x 2700 instances)", pass,
           fmt("max rel err %.2e (tol 1e-10), %zu instances, %.1f s (budget 30 s)", worst,
               instances, elapsed));
}

// --------------------------------------------------------------------------
// 2. Algebraic identities of the core transforms.
// --------------------------------------------------------------------------
void criterion_algebra() {
    RngStream rng(77, 0);
    double worst_mixed = 0.0, worst_inner = 0.0, worst_face = 0.0, worst_fwht = 0.0,
           worst_conv = 0.0;

    for (int rep = 0; rep < 50; ++rep) {
        DenseMatrix a(3, 2), b(2, 4), c(2, 3), d(4, 2);
        for (double& v : a.data) v = rng.gaussian();
        for (double& v : b.data) v = rng.gaussian();
        for (double& v : c.data) v = rng.gaussian();
        for (double& v : d.data) v = rng.gaussian();
        DenseMatrix lhs = matmul(kron_mat(a, b), kron_mat(c, d));
        DenseMatrix rhs = kron_mat(matmul(a, c), matmul(b, d));
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < lhs.data.size(); ++i) {
            num += (lhs.data[i] - rhs.data[i]) * (lhs.data[i] - rhs.data[i]);
            den += rhs.data[i] * rhs.data[i];
        }
        worst_mixed = std::max(worst_mixed, std::sqrt(num / den));
    }

    for (int rep = 0; rep < 50; ++rep) {
        std::size_t dim = 32;
        DenseVector x = random_unit(rng, dim), y = random_unit(rng, dim);
        DenseVector z = random_unit(rng, dim), t = random_unit(rng, dim);
        double lhs = dot(kron_vec(x, y), kron_vec(z, t));
        double rhs = dot(x, z) * dot(y, t);
        worst_inner = std::max(worst_inner, std::fabs(lhs - rhs));
    }

    for (int rep = 0; rep < 50; ++rep) {
        DenseMatrix a(3, 4), b(3, 2);
        for (double& v : a.data) v = rng.gaussian();
        for (double& v : b.data) v = rng.gaussian();
        DenseVector x(4), y(2);
        for (double& v : x) v = rng.gaussian();
        for (double& v : y) v = rng.gaussian();
        DenseVector lhs = ref::matvec(face_split(a, b), kron_vec(x, y));
        DenseVector rhs = hadamard_prod(ref::matvec(a, x), ref::matvec(b, y));
        double scale = 0.0;
        for (double v : rhs) scale = std::max(scale, std::fabs(v));
        for (std::size_t i = 0; i < lhs.size(); ++i)
            worst_face = std::max(worst_face, std::fabs(lhs[i] - rhs[i]) / scale);
    }

    for (std::size_t dim : {2u, 8u, 64u, 256u, 1024u}) {
        for (int rep = 0; rep < 10; ++rep) {
            DenseVector x(dim);
            for (double& v : x) v = rng.gaussian();
            DenseVector fast = fwht_inplace(x);
            DenseVector naive = ref::hadamard_naive(x);
            double scale = 0.0;
            for (double v : naive) scale = std::max(scale, std::fabs(v));
            for (std::size_t i = 0; i < fast.size(); ++i)
                worst_fwht = std::max(worst_fwht, std::fabs(fast[i] - naive[i]) / scale);
        }
    }

    for (std::size_t m : {2u, 16u, 64u, 256u}) {
        for (int rep = 0; rep < 13; ++rep) {
            DenseVector x(m), y(m);
            for (double& v : x) v = rng.gaussian();
            for (double& v : y) v = rng.gaussian();
            DenseVector fast = circular_convolve(x, y);
            DenseVector naive = ref::convolve_naive(x, y);
            double scale = 0.0;
            for (double v : naive) scale = std::max(scale, std::fabs(v));
            for (std::size_t i = 0; i < fast.size(); ++i)
                worst_conv = std::max(worst_conv, std::fabs(fast[i] - naive[i]) / scale);
        }
    }

    bool pass = worst_mixed <= 1e-12 && worst_inner <= 1e-12 && worst_face <= 1e-12 &&
                worst_fwht <= 1e-12 && worst_conv <= 1e-10;
    record(2, "algebraic identities (mixed product, inner product, face split, FWHT, FFT)",
           pass,
           fmt("mixed %.1e inner %.1e face %.1e fwht %.1e conv %.1e", worst_mixed, worst_inner,
               worst_face, worst_fwht, worst_conv));
}

// --------------------------------------------------------------------------
// 3. Unbiasedness of every family at 1e5 trials.
// --------------------------------------------------------------------------
void criterion_unbiasedness() {
    auto start = clk::now();
    RngStream rng(4242, 0);
    std::vector<DenseVector> factors{random_unit(rng, 32), random_unit(rng, 32)};
    const double p_grid[] = {2.0};
    bool pass = true;
    std::ostringstream detail;
    for (SketchFamily family : kFamilies) {
        SketchConfig cfg = make_config(family, {32, 32}, 64, 99);
        TrialStatistics stats = estimate_moments(cfg, factors, p_grid, 100000, 31);
        double mean = stats.mean_sq_norm();
        bool ok = mean >= 0.98 && mean <= 1.02;
        pass = pass && ok;
        detail << family_name(family) << " " << fmt("%.4f", mean) << "  ";
    }
    double elapsed = seconds_since(start);
    pass = pass && elapsed < 120.0;
    record(3, "unbiasedness E|Mx|^2 in [0.98,1.02], 1e5 trials per family", pass,
           detail.str() + fmt("(%.1f s, budget 120 s)", elapsed));
}

// --------------------------------------------------------------------------
// 4. Generalized Khintchine fourth-moment bound by exact enumeration.
// --------------------------------------------------------------------------
void criterion_khintchine() {
    DenseVector hand{1.0, 1.0};
    std::vector<std::size_t> dims1{2};
    double hand_moment = khintchine_tensor_exact(hand, dims1);
    bool pass = std::fabs(hand_moment - 8.0) <= 1e-12 && hand_moment <= 12.0;

    RngStream rng(9091, 0);
    double worst_ratio = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        DenseVector a(9);
        for (double& v : a) v = rng.gaussian();
        std::vector<std::size_t> dims{3, 3};
        double moment = khintchine_tensor_exact(a, dims);
        double bound = 9.0 * norm_sq(a) * norm_sq(a);
        worst_ratio = std::max(worst_ratio, moment / bound);
        pass = pass && moment <= bound * (1.0 + 1e-12);
    }
    record(4, "generalized Khintchine 4th moment <= 3^c |a|^4 (exact enumeration)", pass,
           fmt("hand case %.1f <= 12, worst ratio to bound %.3f over 100 tensors", hand_moment,
               worst_ratio));
}

// --------------------------------------------------------------------------
// 5. Concentration ordering on the adversarial all-ones tensor.
// --------------------------------------------------------------------------
void criterion_adversarial() {
    std::vector<std::size_t> m_grid{256};
    LowerBoundReport report = lower_bound_experiment(m_grid, 64, 2, 0.25, 10000, 2025);
    const LowerBoundCell& dense2 = report.cell("dense_rows", 2, 256);
    const LowerBoundCell& dense3 = report.cell("dense_rows", 3, 256);
    const LowerBoundCell& count = report.cell("count_sketch_tensor", 2, 256);
    const LowerBoundCell& ftjl = report.cell("fast_tensor_jl", 2, 256);

    bool ftjl_below = ftjl.rate < count.rate && !ftjl.interval.overlaps(count.interval);
    bool dense_below = dense2.rate < count.rate && !dense2.interval.overlaps(count.interval);
    bool order_effect = dense3.rate > dense2.rate && !dense3.interval.overlaps(dense2.interval);
    bool pass = ftjl_below && dense_below && order_effect;
    record(5, "adversarial concentration ordering at d=64, c=2, m=256, eps=0.25", pass,
           fmt("rates: ftjl %.4f [%.4f,%.4f], dense %.4f [%.4f,%.4f], count %.4f [%.4f,%.4f], "
               "dense c=3 %.4f [%.4f,%.4f]; ftjl<count %s, dense<count %s, c3>c2 %s",
               ftjl.rate, ftjl.interval.lo, ftjl.interval.hi, dense2.rate, dense2.interval.lo,
               dense2.interval.hi, count.rate, count.interval.lo, count.interval.hi,
               dense3.rate, dense3.interval.lo, dense3.interval.hi,
               ftjl_below ? "yes" : "NO", dense_below ? "yes" : "NO",
               order_effect ? "yes" : "NO"));
    if (!pass)
        std::printf(
            "       note: on the all-ones tensor the convolution sketch has per-trial variance "
            "about 2(2^c-1)/m, below the (3-2/d)^c-1)/m of the sign-product families, so the "
            "asserted ordering reverses at these parameters; it holds only for d <~ 8.\n");
}

// --------------------------------------------------------------------------
// 6. Gaussian c=1 moment scaling against the chi-square closed form.
// --------------------------------------------------------------------------
void criterion_moment_scaling() {
    RngStream rng(555, 0);
    std::vector<DenseVector> factors{random_unit(rng, 32)};
    const double p_grid[] = {2.0};
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t m : {16u, 64u, 256u}) {
        SketchConfig cfg =
            make_config(SketchFamily::dense_rows, {32}, m, 7, EntryKind::gaussian);
        TrialStatistics stats = estimate_moments(cfg, factors, p_grid, 100000, 17);
        double emp = stats.moment_estimates.at(2.0);
        double want = std::sqrt(2.0 / static_cast<double>(m));
        double err = std::fabs(emp - want) / want;
        pass = pass && err <= 0.10;
        detail << fmt("m=%zu: %.4f vs %.4f (%.1f%%)  ", m, emp, want, err * 100.0);
    }
    record(6, "Gaussian dense p=2 moment matches sqrt(2/m) within 10%", pass, detail.str());
}

// --------------------------------------------------------------------------
// 7. AMM error scales as K/sqrt(m) with stable K.
// --------------------------------------------------------------------------
void criterion_amm() {
    RngStream rng(6006, 0);
    DenseMatrix a(64, 8), b(64, 8);
    for (double& v : a.data) v = rng.gaussian();
    for (double& v : b.data) v = rng.gaussian();
    std::vector<double> fitted;
    std::ostringstream detail;
    for (std::size_t m : {64u, 256u, 1024u}) {
        SketchConfig cfg = make_config(SketchFamily::dense_rows, {64}, m, 909);
        TrialStatistics stats = amm_error(cfg, a, b, 300, 313);
        double rms = stats.moment_estimates.at(2.0);
        double k = rms * std::sqrt(static_cast<double>(m));
        fitted.push_back(k);
        detail << fmt("m=%zu: rms %.4f K %.3f  ", m, rms, k);
    }
    double lo = *std::min_element(fitted.begin(), fitted.end());
    double hi = *std::max_element(fitted.begin(), fitted.end());
    bool pass = hi / lo <= 1.25;
    record(7, "AMM Frobenius error fits K/sqrt(m), K stable within 25%", pass,
           detail.str() + fmt("spread %.1f%%", (hi / lo - 1.0) * 100.0));
}

// --------------------------------------------------------------------------
// 8. OSE: singular values of MU inside [1-eps, 1+eps] in >= 95% of trials.
// --------------------------------------------------------------------------
void criterion_ose() {
    SketchConfig cfg = make_config(SketchFamily::fast_tensor_jl, {8, 8}, 1024, 4711);
    SubspaceSpec sub = random_subspace(64, 4, 8888);
    OseResult res = ose_check(cfg, sub, 0.3, 200, 4243);
    std::size_t in_interval = 0;
    for (const OseTrial& t : res.per_trial)
        if (t.sigma_min >= 0.7 && t.sigma_max <= 1.3) ++in_interval;
    double rate = static_cast<double>(in_interval) / 200.0;
    bool pass = rate >= 0.95;
    record(8, "OSE singular values within [0.7, 1.3] in >= 95% of 200 trials", pass,
           fmt("interval rate %.3f, operator-norm pass rate %.3f", rate, res.pass_rate));
}

// --------------------------------------------------------------------------
// 9. Polynomial kernel contract and the sketched ridge demo.
// --------------------------------------------------------------------------
void criterion_kernel() {
    PolyKernelSpec spec;
    spec.coefficients = {1.0, 1.0, 1.0};
    spec.block_rows = {4096, 4096};
    PolyFeatureMap map(spec, SketchFamily::fast_tensor_jl, 16, 20250);
    RngStream rng(1113, 0);
    std::size_t hits = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        DenseVector x = random_unit(rng, 16);
        DenseVector y = random_unit(rng, 16);
        double got = dot(map.transform(x), map.transform(y));
        double want = spec.evaluate(dot(x, y));
        if (std::fabs(got - want) <= 0.1) ++hits;
    }
    bool kernel_ok = hits >= 900;

    Dataset ds = make_synthetic_dataset(512, 16, 321);
    RidgeDemoResult demo =
        sketched_ridge_demo(ds.features, ds.targets, spec, SketchFamily::fast_tensor_jl, 1.0,
                            777);
    double rel = std::fabs(demo.sketched_rmse - demo.exact_rmse) /
                 std::max(demo.exact_rmse, 1e-300);
    bool ridge_ok = rel <= 0.10;
    record(9, "kernel estimate within 0.1 for >=90% pairs; ridge RMSE within 10% of oracle",
           kernel_ok && ridge_ok,
           fmt("pairs within 0.1: %zu/1000; ridge rmse %.4f vs exact %.4f (%.1f%%)", hits,
               demo.sketched_rmse, demo.exact_rmse, rel * 100.0));
}

// --------------------------------------------------------------------------
// 10. Fast-family timing: speedup over dense and near-linear growth in d.
// --------------------------------------------------------------------------
volatile double g_timing_sink = 0.0;

double median_apply_ns(const LinearSketch& sketch, std::span<const DenseVector> factors) {
    g_timing_sink = sketch.apply_tensor(factors)[0];  // warm-up
    std::vector<double> times;
    for (int rep = 0; rep < 11; ++rep) {
        auto t0 = clk::now();
        DenseVector out = sketch.apply_tensor(factors);
        auto t1 = clk::now();
        g_timing_sink = out[0];
        times.push_back(static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void criterion_performance() {
    RngStream rng(31017, 0);
    std::vector<std::size_t> d_grid{1024, 2048, 4096, 8192, 16384};
    std::vector<double> log_d, log_t;
    double fast_at_8192 = 0.0;
    for (std::size_t d : d_grid) {
        std::vector<DenseVector> factors(2);
        for (auto& f : factors) {
            f.resize(d);
            for (double& v : f) v = rng.gaussian();
        }
        SketchConfig cfg = make_config(SketchFamily::fast_tensor_jl, {d, d}, 4096, 5150);
        auto sketch = build_sketch(cfg);
        double ns = median_apply_ns(*sketch, factors);
        if (d == 8192) fast_at_8192 = ns;
        log_d.push_back(std::log2(static_cast<double>(d)));
        log_t.push_back(std::log2(ns));
    }
    double dense_ns;
    {
        std::size_t d = 8192;
        std::vector<DenseVector> factors(2);
        for (auto& f : factors) {
            f.resize(d);
            for (double& v : f) v = rng.gaussian();
        }
        SketchConfig cfg = make_config(SketchFamily::dense_rows, {d, d}, 4096, 5150);
        auto sketch = build_sketch(cfg);
        dense_ns = median_apply_ns(*sketch, factors);
    }
    double ratio = dense_ns / fast_at_8192;

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log_d.size(); ++i) {
        mx += log_d[i];
        my += log_t[i];
    }
    mx /= log_d.size();
    my /= log_t.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < log_d.size(); ++i) {
        num += (log_d[i] - mx) * (log_t[i] - my);
        den += (log_d[i] - mx) * (log_d[i] - mx);
    }
    double slope = num / den;
    bool pass = ratio >= 20.0 && slope >= 0.8 && slope <= 1.3;
    record(10, "fast family >=20x dense at d=2^13, log-log slope in [0.8, 1.3]", pass,
           fmt("speedup %.0fx (dense %.2f ms vs fast %.3f ms), slope %.2f", ratio,
               dense_ns / 1e6, fast_at_8192 / 1e6, slope));
}

// --------------------------------------------------------------------------
// 11. Determinism across reruns and thread counts.
// --------------------------------------------------------------------------
std::string suite_fingerprint() {
    std::ostringstream os;
    os.precision(17);

    SketchConfig cfg = make_config(SketchFamily::fast_tensor_jl, {8, 8}, 64, 3);
    RngStream rng(1, 0);
    std::vector<DenseVector> factors{random_unit(rng, 8), random_unit(rng, 8)};
    const double p_grid[] = {2.0, 4.0};
    TrialStatistics stats = estimate_moments(cfg, factors, p_grid, 5000, 5);
    os << stats.mean_sample << "|";
    for (const auto& [p, v] : stats.moment_estimates) os << p << ":" << v << "|";
    for (const auto& [eps, count] : stats.tail_counts) os << eps << ":" << count << "|";

    std::vector<std::size_t> m_grid{16, 64};
    LowerBoundReport lb = lower_bound_experiment(m_grid, 16, 2, 0.25, 2000, 9);
    for (const LowerBoundCell& cell : lb.cells)
        os << cell.family << cell.c << "," << cell.m << "," << cell.failures << "|";

    DenseMatrix a(16, 3), b(16, 3);
    RngStream mrng(2, 0);
    for (double& v : a.data) v = mrng.gaussian();
    for (double& v : b.data) v = mrng.gaussian();
    SketchConfig amm_cfg = make_config(SketchFamily::dense_rows, {16}, 32, 11);
    TrialStatistics amm = amm_error(amm_cfg, a, b, 200, 13);
    os << amm.moment_estimates.at(2.0) << "|";

    SubspaceSpec sub = random_subspace(16, 4, 15);
    SketchConfig ose_cfg = make_config(SketchFamily::recursive, {4, 4}, 128, 17);
    OseResult ose = ose_check(ose_cfg, sub, 0.3, 50, 19);
    os << ose.passes << "|";
    for (const OseTrial& t : ose.per_trial) os << t.op_deviation << ";";
    return os.str();
}

void criterion_determinism() {
    std::string first = suite_fingerprint();
    std::string second = suite_fingerprint();
    bool rerun_ok = first == second;
    bool threads_ok = true;
#ifdef _OPENMP
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    std::string one_thread = suite_fingerprint();
    omp_set_num_threads(2);
    std::string two_threads = suite_fingerprint();
    omp_set_num_threads(saved);
    threads_ok = one_thread == first && two_threads == first;
#endif
    record(11, "suites byte-identical across reruns and thread counts", rerun_ok && threads_ok,
           fmt("rerun %s, threads %s", rerun_ok ? "identical" : "DIFFERS",
               threads_ok ? "identical" : "DIFFERS"));
}

}  // namespace

int main() {
    auto start = clk::now();
    criterion_oracle();
    criterion_algebra();
    criterion_unbiasedness();
    criterion_khintchine();
    criterion_adversarial();
    criterion_moment_scaling();
    criterion_amm();
    criterion_ose();
    criterion_kernel();
    criterion_performance();
    criterion_determinism();

    int failures = 0;
    for (const Criterion& c : g_results)
        if (!c.pass) ++failures;
    std::printf("----\n%zu criteria, %d failed, total %.1f s\n", g_results.size(), failures,
                seconds_since(start));
    return failures;
}
