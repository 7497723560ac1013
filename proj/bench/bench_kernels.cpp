// Compares the OpenMP kernels against the serial reference implementations
// and reports speedups plus agreement. Build and run:
//   cmake --build build && ./build/bench/bench_kernels
// A kernel row reports MISMATCH only if the two routes disagree; timing
// ratios are informational (several kernels are memory-bound and cannot
// scale on few cores).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tsk/linalg.hpp"
#include "tsk/reference.hpp"
#include "tsk/rng.hpp"
#include "tsk/tensor_ops.hpp"
#include "tsk/validation.hpp"

using namespace tsk;
using clk = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        fn();
        auto t1 = clk::now();
        times.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() / 1e6);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void row(const char* kernel, const char* size, double serial_ms, double parallel_ms,
         double max_err) {
    std::printf("%-22s %-12s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n",
                kernel, size, serial_ms, parallel_ms, serial_ms / parallel_ms,
                max_err == 0.0 ? "bitwise-equal" : "MISMATCH");
}

template <typename Fn>
auto with_one_thread(Fn&& fn) {
#ifdef _OPENMP
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    fn();
    omp_set_num_threads(saved);
#else
    fn();
#endif
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    RngStream rng(7, 0);

    {
        std::size_t m = 4096, d = 8192;
        DenseMatrix a(m, d);
        for (double& v : a.data) v = rng.rademacher();
        DenseVector x(d);
        for (double& v : x) v = rng.gaussian();
        DenseVector ys, yp;
        double serial = time_ms([&] { ys = ref::matvec(a, x); }, 5);
        double parallel = time_ms([&] { yp = matvec(a, x); }, 5);
        row("matvec", "4096x8192", serial, parallel, max_abs_diff(ys, yp));
    }

    {
        std::size_t n = std::size_t{1} << 20;
        DenseVector x(n);
        for (double& v : x) v = rng.gaussian();
        DenseVector serial_out, parallel_out;
        double serial = time_ms(
            [&] {
                with_one_thread([&] {
                    serial_out = x;
                    fwht(serial_out);
                });
            },
            5);
        double parallel = time_ms(
            [&] {
                parallel_out = x;
                fwht(parallel_out);
            },
            5);
        row("fwht", "2^20", serial, parallel, max_abs_diff(serial_out, parallel_out));
    }

    {
        SketchConfig cfg;
        cfg.family = SketchFamily::fast_tensor_jl;
        cfg.factor_dims = {32, 32};
        cfg.rows = 64;
        cfg.seed = 3;
        RngStream frng(11, 0);
        std::vector<DenseVector> factors;
        for (std::size_t k = 0; k < 2; ++k) {
            DenseVector f(32);
            for (double& v : f) v = frng.gaussian();
            factors.push_back(std::move(f));
        }
        const double p_grid[] = {2.0};
        TrialStatistics ss, sp;
        double serial = time_ms(
            [&] { with_one_thread([&] { ss = estimate_moments(cfg, factors, p_grid, 20000, 5); }); },
            3);
        double parallel =
            time_ms([&] { sp = estimate_moments(cfg, factors, p_grid, 20000, 5); }, 3);
        double err = std::fabs(ss.mean_sample - sp.mean_sample) +
                     std::fabs(ss.moment_estimates.at(2.0) - sp.moment_estimates.at(2.0));
        row("monte_carlo_trials", "20000", serial, parallel, err);
    }

    return 0;
}
