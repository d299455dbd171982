// Timing comparison of the serial reference kernels against their OpenMP
// counterparts, plus the trial-pool scaling of the experiment runner.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "ubad/field.hpp"
#include "ubad/harness.hpp"
#include "ubad/kernels.hpp"
#include "ubad/rng.hpp"

using namespace ubad;
using kernels::Exec;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    const auto start = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* name, int n, double serial_ms, double parallel_ms) {
    std::printf("%-16s n=%-5d serial %9.3f ms   omp %9.3f ms   speedup %.2fx\n", name,
                n, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());

    RandomStream rng(1);
    for (int n : {256, 512, 1024, 2048}) {
        Matrix m(n, n);
        Vector x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x(i) = rng.normal();
            for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
        }
        const int reps = n >= 1024 ? 20 : 100;
        report("matvec", n,
               time_ms([&] { kernels::matvec(m, x, y, Exec::Serial); }, reps),
               time_ms([&] { kernels::matvec(m, x, y, Exec::Parallel); }, reps));
        report("matvec_t", n,
               time_ms([&] { kernels::matvec_transpose(m, x, y, Exec::Serial); }, reps),
               time_ms([&] { kernels::matvec_transpose(m, x, y, Exec::Parallel); }, reps));

        Vector u = x, v = x;
        report("score_argmax", n,
               time_ms([&] { kernels::score_argmax(u, v, 1.0, nullptr, Exec::Serial); },
                       reps),
               time_ms([&] { kernels::score_argmax(u, v, 1.0, nullptr, Exec::Parallel); },
                       reps));

        GridSpec grid{5.0, n};
        FieldModel field{FieldKind::Gaussian, 1.0, 1.0, {n / 2, n / 3}};
        report("synthesize", n,
               time_ms([&] { synthesize(grid, field, Exec::Serial); }, 5),
               time_ms([&] { synthesize(grid, field, Exec::Parallel); }, 5));
        std::printf("\n");
    }

    // trial pool: one fig1_small-shaped cell, serial vs the OpenMP pool
    ExperimentConfig cfg = preset("fig1_small");
    cfg.trials = 8;
    cfg.policies = {PolicyName::Ubad};
    cfg.out_dir.clear();
    const auto pool_start = Clock::now();
    run_experiment(cfg);
    const double pool_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - pool_start).count();

    const auto serial_start = Clock::now();
    for (int t = 0; t < cfg.trials; ++t) {
        FieldModel field{cfg.field_kind, cfg.spreads[0], cfg.amplitude,
                         cfg.resolved_source()};
        run_trial(cfg.grid, field, {0.0}, {PolicyName::Ubad, cfg.beta}, cfg.m,
                  cfg.solver, derive_seed(cfg.master_seed, 0, 0, t));
    }
    const double serial_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - serial_start).count();
    std::printf("trial pool      8 trials serial %9.1f ms   omp %9.1f ms   speedup %.2fx\n",
                serial_ms, pool_ms, serial_ms / pool_ms);
    return 0;
}
