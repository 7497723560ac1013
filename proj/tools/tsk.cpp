// Command-line front end: reproducible verification suites, benchmarks,
// batch sketching, and the kernel regression demo. Exit codes: 0 all checks
// passed, 1 a suite failed (or an execution error), 2 usage error.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "tsk/applications.hpp"
#include "tsk/fft.hpp"
#include "tsk/reference.hpp"
#include "tsk/report.hpp"
#include "tsk/rng.hpp"
#include "tsk/sketch.hpp"
#include "tsk/tensor_ops.hpp"
#include "tsk/validation.hpp"

using nlohmann::json;
using namespace tsk;

namespace {

struct CommonOpts {
    std::string family = "fast_tensor_jl";
    std::vector<std::size_t> dims{8, 8};
    std::size_t rows = 256;
    std::uint64_t seed = 42;  // fixed default so bare invocations reproduce
    std::size_t trials = 20000;
    double epsilon = 0.25;
    double delta = 0.01;
    std::string out;
    std::string format = "json";
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--family", opts.family,
                    "Sketch family: count_sketch_tensor, dense_rows, fast_tensor_jl, recursive")
        ->capture_default_str();
    cmd->add_option("--dims", opts.dims, "Comma-separated factor dimensions d_1..d_c")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--rows", opts.rows, "Output rows m")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Master seed")->capture_default_str();
    cmd->add_option("--trials", opts.trials, "Monte-Carlo trials")->capture_default_str();
    cmd->add_option("--epsilon", opts.epsilon, "Distortion budget epsilon")
        ->capture_default_str();
    cmd->add_option("--delta", opts.delta, "Failure budget delta")->capture_default_str();
    cmd->add_option("--out", opts.out, "Output report path");
    cmd->add_option("--format", opts.format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = library default)")
        ->capture_default_str();
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

SketchConfig config_from(const CommonOpts& opts) {
    SketchConfig cfg;
    cfg.family = family_from_name(opts.family);
    cfg.factor_dims = opts.dims;
    cfg.rows = opts.rows;
    cfg.seed = opts.seed;
    cfg.validate();
    return cfg;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

ExperimentReport verify_oracle(const SketchConfig& cfg) {
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t d : {2u, 3u, 4u}) {
        for (std::size_t c : {1u, 2u, 3u}) {
            for (std::size_t m : {1u, 4u, 8u}) {
                for (std::uint64_t s = 0; s < 20; ++s) {
                    SketchConfig small = cfg;
                    small.factor_dims.assign(c, d);
                    small.rows = m;
                    small.seed = derive_seed(cfg.seed, s);
                    auto sketch = build_sketch(small);
                    RngStream rng(small.seed, 999);
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
                    ++checked;
                }
            }
        }
    }
    ExperimentReport report;
    report.name = "oracle_equivalence";
    report.pass = worst <= 1e-10;
    json j;
    j["family"] = family_name(cfg.family);
    j["instances"] = checked;
    j["max_rel_err"] = worst;
    j["tolerance"] = 1e-10;
    report.json_payload = j.dump();
    report.csv_header = {"metric", "value"};
    report.csv_rows = {{"max_rel_err", fmt(worst)}, {"instances", std::to_string(checked)}};
    return report;
}

ExperimentReport verify_moments(const SketchConfig& cfg, const CommonOpts& opts) {
    MomentBudget budget = MomentBudget::standard(opts.epsilon, opts.delta, 2.0);
    RngStream rng(cfg.seed, 12345);
    std::vector<DenseVector> factors;
    for (std::size_t d : cfg.factor_dims) {
        DenseVector f(d);
        for (double& v : f) v = rng.gaussian();
        factors.push_back(std::move(f));
    }
    TrialStatistics stats = estimate_moments(
        cfg, factors, budget.p_grid, std::max<std::size_t>(opts.trials, 1000), cfg.seed);
    StrongJlReport check = strong_jl_check(stats, budget);
    bool unbiased = stats.mean_sq_norm() >= 0.98 && stats.mean_sq_norm() <= 1.02;

    ExperimentReport report;
    report.name = "strong_jl_moments";
    report.pass = check.pass && unbiased && stats.moments_monotone();
    json j;
    j["config"] = json::parse(cfg.to_json_string());
    j["trials"] = stats.trials;
    j["mean_sq_norm"] = stats.mean_sq_norm();
    j["unbiased_ok"] = unbiased;
    j["epsilon"] = budget.epsilon;
    j["delta"] = budget.delta;
    j["slack"] = budget.slack;
    j["checks"] = json::array();
    report.csv_header = {"metric", "value"};
    report.csv_rows.push_back({"mean_sq_norm", fmt(stats.mean_sq_norm())});
    for (const MomentCheck& c : check.checks) {
        j["checks"].push_back(
            {{"p", c.p}, {"empirical", c.empirical}, {"bound", c.bound}, {"pass", c.pass}});
        report.csv_rows.push_back({"moment_p" + std::to_string(int(c.p)), fmt(c.empirical)});
        report.csv_rows.push_back({"bound_p" + std::to_string(int(c.p)), fmt(c.bound)});
    }
    for (const auto& [eps, count] : stats.tail_counts) {
        Interval iv = stats.tail_interval(eps);
        j["tails"][fmt(eps)] = {{"rate", stats.tail_rate(eps)}, {"lo", iv.lo}, {"hi", iv.hi}};
    }
    report.json_payload = j.dump();
    return report;
}

ExperimentReport verify_khintchine(const SketchConfig& cfg) {
    bool pass = true;
    std::vector<std::size_t> dims1{2};
    DenseVector ones{1.0, 1.0};
    double hand = khintchine_tensor_exact(ones, dims1);
    pass = pass && std::fabs(hand - 8.0) <= 1e-12 && hand <= 12.0;

    RngStream rng(cfg.seed, 777);
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
    ExperimentReport report;
    report.name = "generalized_khintchine";
    report.pass = pass;
    json j;
    j["hand_case_moment"] = hand;
    j["worst_ratio_to_bound"] = worst_ratio;
    report.json_payload = j.dump();
    report.csv_header = {"metric", "value"};
    report.csv_rows = {{"hand_case_moment", fmt(hand)},
                       {"worst_ratio_to_bound", fmt(worst_ratio)}};
    return report;
}

ExperimentReport verify_amm(const SketchConfig& cfg, const CommonOpts& opts) {
    std::size_t dim = cfg.input_dim();
    SketchConfig base = cfg;
    if (dim > 4096) {
        base.factor_dims = {64};
        dim = 64;
    }
    RngStream rng(cfg.seed, 31337);
    DenseMatrix a(dim, 4), b(dim, 4);
    for (double& v : a.data) v = rng.gaussian();
    for (double& v : b.data) v = rng.gaussian();
    std::size_t trials = std::clamp<std::size_t>(opts.trials / 50, 100, 400);

    SketchConfig small = base;
    SketchConfig large = base;
    large.rows = base.rows * 4;
    TrialStatistics s = amm_error(small, a, b, trials, cfg.seed);
    TrialStatistics l = amm_error(large, a, b, trials, cfg.seed);
    double rms_small = s.moment_estimates.at(2.0);
    double rms_large = l.moment_estimates.at(2.0);
    double ratio = rms_large / rms_small;  // expect ~0.5 for a 4x row increase

    ExperimentReport report;
    report.name = "approximate_matrix_multiplication";
    report.pass = ratio <= 0.8;
    json j;
    j["ambient_dim"] = dim;
    j["rows_small"] = small.rows;
    j["rows_large"] = large.rows;
    j["rms_small"] = rms_small;
    j["rms_large"] = rms_large;
    j["ratio"] = ratio;
    report.json_payload = j.dump();
    report.csv_header = {"metric", "value"};
    report.csv_rows = {
        {"rms_small", fmt(rms_small)}, {"rms_large", fmt(rms_large)}, {"ratio", fmt(ratio)}};
    return report;
}

ExperimentReport verify_ose(const SketchConfig& cfg, const CommonOpts& opts) {
    std::size_t dim = cfg.input_dim();
    SketchConfig base = cfg;
    if (dim > 4096) {
        base.factor_dims = {64};
        dim = 64;
    }
    std::size_t lambda = std::min<std::size_t>(4, dim);
    SubspaceSpec sub = random_subspace(dim, lambda, derive_seed(cfg.seed, 555));
    std::size_t trials = std::clamp<std::size_t>(opts.trials / 200, 50, 200);
    double eps = std::max(opts.epsilon, 0.3);
    OseResult res = ose_check(base, sub, eps, trials, cfg.seed);

    ExperimentReport report;
    report.name = "oblivious_subspace_embedding";
    report.pass = res.pass_rate >= 0.9;
    json j;
    j["ambient_dim"] = dim;
    j["lambda"] = lambda;
    j["rows"] = base.rows;
    j["epsilon"] = eps;
    j["trials"] = trials;
    j["pass_rate"] = res.pass_rate;
    j["interval"] = {res.interval.lo, res.interval.hi};
    report.json_payload = j.dump();
    report.csv_header = {"metric", "value"};
    report.csv_rows = {{"pass_rate", fmt(res.pass_rate)}};
    return report;
}

int cmd_verify(const CommonOpts& opts) {
    apply_threads(opts.threads);
    SketchConfig cfg = config_from(opts);

    std::vector<ExperimentReport> reports;
    reports.push_back(verify_oracle(cfg));
    reports.push_back(verify_moments(cfg, opts));
    reports.push_back(verify_khintchine(cfg));
    reports.push_back(verify_amm(cfg, opts));
    reports.push_back(verify_ose(cfg, opts));

    bool all = true;
    for (const ExperimentReport& r : reports) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "\n";
        all = all && r.pass;
    }
    std::string path = opts.out;
    if (path.empty())
        path = "tsk_verify_" + std::string(family_name(cfg.family)) +
               (opts.format == "csv" ? ".csv" : ".json");
    write_text_file(path,
                    opts.format == "csv" ? reports_to_csv(reports) : reports_to_json(reports));
    std::cout << (all ? "verify: all suites passed" : "verify: some suites FAILED") << "\n"
              << "report written to " << path << "\n";
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchOpts {
    CommonOpts common;
    std::size_t order = 2;
    std::size_t dense_cap = 8192;
};

volatile double g_timing_sink = 0.0;

double median_apply_ns(const LinearSketch& sketch, std::span<const DenseVector> factors) {
    using clock = std::chrono::steady_clock;
    g_timing_sink = sketch.apply_tensor(factors)[0];  // warm-up excluded from the stats
    std::vector<double> times;
    times.reserve(11);
    for (int rep = 0; rep < 11; ++rep) {
        auto start = clock::now();
        DenseVector out = sketch.apply_tensor(factors);
        auto stop = clock::now();
        g_timing_sink = out[0];
        times.push_back(static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

int cmd_bench(const BenchOpts& bench) {
    const CommonOpts& opts = bench.common;
    apply_threads(opts.threads);
    std::vector<SketchFamily> families;
    if (opts.family == "all") {
        families = {SketchFamily::dense_rows, SketchFamily::fast_tensor_jl,
                    SketchFamily::count_sketch_tensor, SketchFamily::recursive};
    } else {
        families = {family_from_name(opts.family)};
    }

    std::ostringstream csv;
    csv << "family,d,c,m,median_ns,ratio_to_dense\n";
    for (std::size_t d : opts.dims) {
        RngStream rng(opts.seed, d);
        std::vector<DenseVector> factors;
        for (std::size_t k = 0; k < bench.order; ++k) {
            DenseVector f(d);
            for (double& v : f) v = rng.gaussian();
            factors.push_back(std::move(f));
        }
        double dense_ns = 0.0;
        if (d <= bench.dense_cap) {
            SketchConfig cfg;
            cfg.family = SketchFamily::dense_rows;
            cfg.factor_dims.assign(bench.order, d);
            cfg.rows = opts.rows;
            cfg.seed = opts.seed;
            auto sketch = build_sketch(cfg);
            dense_ns = median_apply_ns(*sketch, factors);
        }
        for (SketchFamily family : families) {
            double ns;
            if (family == SketchFamily::dense_rows) {
                if (d > bench.dense_cap) continue;
                ns = dense_ns;
            } else {
                SketchConfig cfg;
                cfg.family = family;
                cfg.factor_dims.assign(bench.order, d);
                cfg.rows = opts.rows;
                cfg.seed = opts.seed;
                auto sketch = build_sketch(cfg);
                ns = median_apply_ns(*sketch, factors);
            }
            csv << family_name(family) << "," << d << "," << bench.order << "," << opts.rows
                << "," << static_cast<long long>(ns) << ",";
            if (dense_ns > 0.0) csv << fmt(dense_ns / ns);
            csv << "\n";
        }
    }
    if (opts.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text_file(opts.out, csv.str());
        std::cout << "benchmark table written to " << opts.out << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sketch
// ---------------------------------------------------------------------------

struct SketchOpts {
    CommonOpts common;
    std::string input;
};

int cmd_sketch(const SketchOpts& sk) {
    apply_threads(sk.common.threads);
    SketchConfig cfg = config_from(sk.common);
    auto sketch = build_sketch(cfg);
    std::size_t c = cfg.order();

    std::ifstream in(sk.input);
    if (!in) throw ParseError("cannot open input file: " + sk.input);
    std::string out_path = sk.common.out.empty() ? sk.input + ".sketched.csv" : sk.common.out;
    std::ostringstream out;
    out.precision(17);

    std::string line;
    std::size_t line_no = 0, record = 0;
    std::vector<DenseVector> factors;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        DenseVector f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                f.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(sk.input + ": line " + std::to_string(line_no) +
                                 ": cannot parse value '" + cell + "'");
            }
        }
        std::size_t k = factors.size();
        if (f.size() != cfg.factor_dims[k])
            throw ParseError(sk.input + ": record " + std::to_string(record + 1) + " (line " +
                             std::to_string(line_no) + "): factor " + std::to_string(k) +
                             " has " + std::to_string(f.size()) + " values, expected " +
                             std::to_string(cfg.factor_dims[k]));
        factors.push_back(std::move(f));
        if (factors.size() == c) {
            DenseVector y = sketch->apply_tensor(factors);
            for (std::size_t i = 0; i < y.size(); ++i) out << (i ? "," : "") << y[i];
            out << "\n";
            factors.clear();
            ++record;
        }
    }
    if (!factors.empty())
        throw ParseError(sk.input + ": truncated record " + std::to_string(record + 1) +
                         ": got " + std::to_string(factors.size()) + " of " +
                         std::to_string(c) + " factor lines");
    if (record == 0) throw ParseError(sk.input + ": no records");
    write_text_file(out_path, out.str());
    std::cout << "sketched " << record << " records -> " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// kernel-demo
// ---------------------------------------------------------------------------

struct KernelOpts {
    CommonOpts common;
    std::string data;
    std::vector<double> coeffs{1.0, 1.0, 1.0};
    double ridge = 1.0;
};

int cmd_kernel_demo(const KernelOpts& ko) {
    apply_threads(ko.common.threads);
    Dataset ds = load_dataset_csv(ko.data);
    PolyKernelSpec spec;
    spec.coefficients = ko.coeffs;
    spec.block_rows.assign(spec.degree(), ko.common.rows);
    spec.validate();
    SketchFamily family = family_from_name(ko.common.family);

    RidgeDemoResult res =
        sketched_ridge_demo(ds.features, ds.targets, spec, family, ko.ridge, ko.common.seed);
    std::cout << "rows: " << ds.features.rows << "  features: " << res.feature_dim << "\n"
              << "sketched train RMSE: " << res.sketched_rmse << "\n"
              << "exact kernel  RMSE: " << res.exact_rmse << "\n";
    if (!ko.common.out.empty()) {
        json j;
        j["n"] = ds.features.rows;
        j["d"] = ds.features.cols;
        j["coefficients"] = spec.coefficients;
        j["rows_per_degree"] = ko.common.rows;
        j["family"] = family_name(family);
        j["ridge"] = ko.ridge;
        j["sketched_rmse"] = res.sketched_rmse;
        j["exact_rmse"] = res.exact_rmse;
        write_text_file(ko.common.out, j.dump(2));
        std::cout << "report written to " << ko.common.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-sketch verification and benchmarking tool"};
    app.require_subcommand(1);

    CommonOpts verify_opts;
    CLI::App* verify = app.add_subcommand(
        "verify", "Run oracle, moment, Khintchine, AMM and OSE suites for one family");
    add_common(verify, verify_opts);

    BenchOpts bench_opts;
    bench_opts.common.family = "all";
    bench_opts.common.dims = {1024, 2048, 4096, 8192, 16384};
    bench_opts.common.rows = 4096;
    CLI::App* bench = app.add_subcommand(
        "bench", "Median apply_tensor wall times over a d grid (CSV output)");
    add_common(bench, bench_opts.common);
    bench->add_option("--order", bench_opts.order, "Tensor order c")->capture_default_str();
    bench->add_option("--dense-cap", bench_opts.dense_cap, "Largest d for the dense baseline")
        ->capture_default_str();

    SketchOpts sketch_opts;
    CLI::App* sketch = app.add_subcommand(
        "sketch", "Sketch records from a CSV of factor vectors (c lines per record)");
    add_common(sketch, sketch_opts.common);
    sketch->add_option("--input", sketch_opts.input, "Input CSV path")->required();

    KernelOpts kernel_opts;
    CLI::App* kernel = app.add_subcommand(
        "kernel-demo", "Sketched polynomial-kernel ridge regression vs the exact Gram oracle");
    add_common(kernel, kernel_opts.common);
    kernel->add_option("--data", kernel_opts.data, "Dataset CSV (header, target last)")
        ->required();
    kernel
        ->add_option("--coeffs", kernel_opts.coeffs,
                     "Polynomial coefficients a_0..a_c (nonnegative)")
        ->delimiter(',')
        ->capture_default_str();
    kernel->add_option("--ridge", kernel_opts.ridge, "Ridge regularizer")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(verify_opts);
        if (bench->parsed()) return cmd_bench(bench_opts);
        if (sketch->parsed()) return cmd_sketch(sketch_opts);
        if (kernel->parsed()) return cmd_kernel_demo(kernel_opts);
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
