// Monte Carlo harness: per-cell coverage of the two-way cluster-robust and
// bootstrap intervals over replicated panels, grids over (delta, J, phi),
// and estimator samples for normality checks. Every replication owns a
// keyed substream, results are reduced in replication order, and grid
// cells are keyed by their coordinates, so output is bit-stable across
// worker counts and grid edits.
#pragma once

#include <cstdint>
#include <vector>

#include "twoway/bootstrap.hpp"
#include "twoway/diagnostics.hpp"

namespace twoway {

// ---- types ----

struct GridSpec {
    std::vector<double> deltas;
    std::vector<int> js;
    std::vector<double> phis;
    std::size_t n_rows = 50;
    std::size_t n_cols = 50;
    int replications = 2000;
    BootstrapConfig bootstrap;
    double level = 0.95;
    std::uint64_t master_seed = 0;
    // Multiplies the two-way variance before interval construction.
    double correction_factor = 1.0;

    void validate() const;
};

struct GridCellSummary {
    double delta = 0.0;
    int j = 0;
    double phi = 0.0;
    double coverage_cgm = 0.0;
    double coverage_m = 0.0;
    double mean_ci_length_cgm = 0.0;
    double mean_ci_length_m = 0.0;
    double negative_variance_rate = 0.0;
    double ks_distance = 0.0;
    int replications = 0;
    // sqrt(p(1-p)/R) at p = coverage_cgm.
    double coverage_mc_se = 0.0;
};

// ---- operations ----

// Replication r draws latents from the substream derive_seed(derive_seed(
// seed, replication tag), r), assembles the panel, and records coverage of
// the true mean by the two-way normal interval and by the bootstrap
// interval, interval lengths, clamp events, and the estimate itself; the
// estimates feed ks_distance. Requires replications >= 100.
GridCellSummary run_cell(const DgpSpec& spec, int replications,
                         const BootstrapConfig& bootstrap, double level,
                         std::uint64_t seed, ExecMode mode = ExecMode::Parallel,
                         double correction_factor = 1.0);

// Cartesian product over (delta, j, phi) in ascending lexicographic order.
// Cell streams are keyed by the cell's coordinate values (not its index),
// so adding or removing grid points never changes other cells' results.
std::vector<GridCellSummary> run_grid(const GridSpec& grid,
                                      ExecMode mode = ExecMode::Parallel);

// Estimator samples only; the fast path when no intervals are needed.
std::vector<double> theta_samples(const DgpSpec& spec, int replications,
                                  std::uint64_t seed, ExecMode mode = ExecMode::Parallel);

// normality_stats over theta_samples. Requires replications >= 100.
NormalityStats qq_cell(const DgpSpec& spec, int replications, std::uint64_t seed,
                       ExecMode mode = ExecMode::Parallel);

// The seed a grid cell derives from its coordinates.
std::uint64_t cell_seed(std::uint64_t master_seed, double delta, int j, double phi);

}  // namespace twoway
