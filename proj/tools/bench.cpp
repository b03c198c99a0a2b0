// Timing harness for the OpenMP trial/quadrature kernels against the serial
// reference path. Both paths produce identical output (see test_parallel);
// this just measures the speedup.

#include <chrono>
#include <cstdio>

#include "sdw/experiments.hpp"
#include "sdw/hsquad.hpp"
#include "sdw/parallel.hpp"

using namespace sdw;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class Fn>
void row(const char* name, Fn&& run) {
    const double t0 = now();
    run(1);
    const double serial = now() - t0;
    const double t1 = now();
    run(0); // all cores
    const double parallel = now() - t1;
    std::printf("%-28s %9.3fs %11.3fs %8.2fx\n", name, serial, parallel, serial / parallel);
    std::fflush(stdout);
}

} // namespace

int main() {
    std::printf("%-28s %10s %12s %9s   (%d hardware threads)\n", "kernel", "serial",
                "openmp", "speedup", hardware_jobs());

    row("eigenvector trials N=300", [](int jobs) {
        ExperimentConfig cfg;
        cfg.kind = ExperimentKind::eigenvector;
        cfg.N = 300;
        cfg.trials = 60;
        cfg.law = EntryLaw(LawKind::gaussian, 1.0);
        cfg.theta = 2.0;
        cfg.nu = SpectralMeasure::dirac(0.0);
        cfg.seed = 1;
        cfg.jobs = jobs;
        (void)run_eigenvector_fluctuations(cfg);
    });

    row("hs residue quadrature", [](int jobs) {
        (void)residue_check(SpectralMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}), 1.0, 2.0,
                            0.0, 3, {400, 400, 0.0}, jobs);
    });

    row("block variance n=120", [](int jobs) {
        const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(120, 120);
        (void)block_variance_estimate(zero, EntryLaw(LawKind::laplace, 1.0), 2.0, 16,
                                      {32, 32, 0.0}, 3, 3, jobs);
    });

    row("concentration scan", [](int jobs) {
        ExperimentConfig cfg;
        cfg.kind = ExperimentKind::concentration;
        cfg.N_list = {100, 160, 240};
        cfg.trials = 60;
        cfg.law = EntryLaw(LawKind::gaussian, 1.0);
        cfg.theta = 2.0;
        cfg.nu = SpectralMeasure::dirac(0.0);
        cfg.seed = 2;
        cfg.z_points = {cplx(0.0, 2.0)};
        cfg.jobs = jobs;
        (void)run_concentration_scan(cfg);
    });

    return 0;
}
