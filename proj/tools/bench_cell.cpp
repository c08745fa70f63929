// Times one coverage cell on the serial reference path and the OpenMP
// path, checks that the two summaries match bit for bit, and reports the
// speedup. Arguments: [replications] [n_draws] [threads].
#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twoway/experiments.hpp"

using namespace twoway;

namespace {

double seconds_for(ExecMode mode, const DgpSpec& spec, int replications,
                   const BootstrapConfig& bc, GridCellSummary& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_cell(spec, replications, bc, 0.95, 20260822, mode);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool identical(const GridCellSummary& a, const GridCellSummary& b) {
    return a.coverage_cgm == b.coverage_cgm && a.coverage_m == b.coverage_m &&
           a.mean_ci_length_cgm == b.mean_ci_length_cgm &&
           a.mean_ci_length_m == b.mean_ci_length_m &&
           a.negative_variance_rate == b.negative_variance_rate &&
           a.ks_distance == b.ks_distance && a.coverage_mc_se == b.coverage_mc_se;
}

}  // namespace

int main(int argc, char** argv) {
    const int replications = argc > 1 ? std::atoi(argv[1]) : 500;
    BootstrapConfig bc;
    bc.n_draws = argc > 2 ? std::atoi(argv[2]) : 399;
#ifdef _OPENMP
    if (argc > 3)
        omp_set_num_threads(std::atoi(argv[3]));
#endif

    DgpSpec spec;
    spec.n_rows = 50;
    spec.n_cols = 50;
    spec.n_factors = 1;
    spec.delta = 1.0;
    spec.phi = 0.5;

    GridCellSummary serial_out, parallel_out;
    const double t_serial = seconds_for(ExecMode::Serial, spec, replications, bc, serial_out);
    const double t_parallel =
        seconds_for(ExecMode::Parallel, spec, replications, bc, parallel_out);

    std::cout << "cell: delta=1 j=1 phi=0.5 n=50x50 replications=" << replications
              << " draws=" << bc.n_draws << '\n';
#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << '\n';
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif
    std::cout << "serial:   " << t_serial << " s\n";
    std::cout << "parallel: " << t_parallel << " s\n";
    std::cout << "speedup:  " << t_serial / t_parallel << "x\n";
    if (!identical(serial_out, parallel_out)) {
        std::cout << "MISMATCH: serial and parallel summaries differ\n";
        return 1;
    }
    std::cout << "summaries identical across modes\n";
    return 0;
}
