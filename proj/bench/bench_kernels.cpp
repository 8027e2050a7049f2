// Compares the OpenMP kernels against their serial references: the LSG
// period scan and the per-iteration candidate grid. Also verifies that the
// parallel paths return bit-identical results.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qpf/forecast.hpp"
#include "qpf/manifest.hpp"
#include "qpf/period.hpp"
#include "qpf/synth.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void bench_scan(const qpf::Series& series, int reps) {
    const int t_max = static_cast<int>(series.size() / 2);

    auto t0 = Clock::now();
    qpf::PeriodScan serial;
    for (int r = 0; r < reps; ++r) {
        serial = qpf::scan_semi_period_serial(series, 2, t_max);
    }
    const double serial_ms = ms_since(t0) / reps;

    t0 = Clock::now();
    qpf::PeriodScan parallel;
    for (int r = 0; r < reps; ++r) {
        parallel = qpf::scan_semi_period(series, 2, t_max);
    }
    const double parallel_ms = ms_since(t0) / reps;

    bool identical = serial.best_period == parallel.best_period &&
                     serial.scores.size() == parallel.scores.size();
    if (identical) {
        for (std::size_t i = 0; i < serial.scores.size(); ++i) {
            if (serial.scores[i] != parallel.scores[i]) {
                identical = false;
                break;
            }
        }
    }

    std::printf("lsg scan (n=%zu, %d candidates)  serial %8.2f ms  parallel %8.2f ms  "
                "speedup %.2fx  bit-identical: %s\n",
                series.size(), t_max - 1, serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "yes" : "NO");
}

void bench_fit(const qpf::Series& series, std::size_t test_length) {
    qpf::FitOptions options;
    options.test_length = test_length;
    options.max_iterations = 2;

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    auto t0 = Clock::now();
    const qpf::Model serial = qpf::fit(series, options);
    const double serial_ms = ms_since(t0);

#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
    t0 = Clock::now();
    const qpf::Model parallel = qpf::fit(series, options);
    const double parallel_ms = ms_since(t0);

    const qpf::DatasetInfo info;
    const bool identical =
        qpf::render_manifest(serial, info) == qpf::render_manifest(parallel, info);

    std::printf("candidate grid (n=%zu, %zu iterations) serial %8.2f ms  parallel %8.2f ms  "
                "speedup %.2fx  bit-identical: %s\n",
                series.size(), serial.iterations.size(), serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    int scale = 1;
    if (argc > 1) scale = std::max(1, std::atoi(argv[1]));

    std::printf("threads: %d\n", threads());

    const auto recipe = qpf::parse_recipe("trend=50,0.01;sin=24,8;sin=168,3;noise=0.5");
    bench_scan(qpf::synth(recipe, 2048UL * scale, 1), 5);
    bench_scan(qpf::synth(recipe, 4096UL * scale, 1), 3);
    bench_fit(qpf::synth(recipe, 1200UL * scale, 2), 120UL * scale);
    return 0;
}
