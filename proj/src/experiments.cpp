#include "twoway/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "twoway/estimators.hpp"
#include "twoway/math.hpp"
#include "twoway/rng.hpp"

namespace twoway {

void GridSpec::validate() const {
    if (deltas.empty())
        throw std::invalid_argument("deltas must be non-empty");
    if (js.empty())
        throw std::invalid_argument("js must be non-empty");
    if (phis.empty())
        throw std::invalid_argument("phis must be non-empty");
    for (int j : js)
        if (j < 1)
            throw std::invalid_argument("js entries must be >= 1");
    for (double p : phis)
        if (!(p >= 0.0))
            throw std::invalid_argument("phis entries must be >= 0");
    if (n_rows < 2 || n_cols < 2)
        throw std::invalid_argument("n_rows and n_cols must be >= 2");
    if (replications < 100)
        throw std::invalid_argument("replications must be >= 100");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("level must lie in (0,1)");
    if (!(correction_factor > 0.0))
        throw std::invalid_argument("correction_factor must be > 0");
    bootstrap.validate();
}

std::uint64_t cell_seed(std::uint64_t master_seed, double delta, int j, double phi) {
    std::uint64_t s = derive_seed(master_seed, seed_tag::cell);
    s = derive_seed(s, std::bit_cast<std::uint64_t>(delta));
    s = derive_seed(s, static_cast<std::uint64_t>(j));
    s = derive_seed(s, std::bit_cast<std::uint64_t>(phi));
    return s;
}

namespace {

std::uint64_t replication_seed(std::uint64_t seed, std::size_t r) {
    return derive_seed(derive_seed(seed, seed_tag::replication), r);
}

}  // namespace

GridCellSummary run_cell(const DgpSpec& spec, int replications,
                         const BootstrapConfig& bootstrap, double level,
                         std::uint64_t seed, ExecMode mode, double correction_factor) {
    spec.validate();
    bootstrap.validate();
    if (replications < 100)
        throw std::invalid_argument("run_cell: replications must be >= 100");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("run_cell: level must lie in (0,1)");
    if (!(correction_factor > 0.0))
        throw std::invalid_argument("run_cell: correction_factor must be > 0");

    const double theta = true_mean(spec);
    const auto R = static_cast<std::size_t>(replications);
    std::vector<double> estimates(R), len_cgm(R), len_m(R);
    std::vector<std::uint8_t> covered_cgm(R), covered_m(R), clamped(R);

    auto one_rep = [&](std::size_t r) {
        RngStream rng(replication_seed(seed, r));
        const LatentDraw latents = sample_latents(spec, rng);
        const Panel panel = assemble_panel(spec, latents);
        // The bootstrap runs serially inside each replication; parallelism
        // lives at the replication level.
        const IntervalResult cgm = twcr_interval(panel, level, correction_factor);
        const IntervalResult boot = two_way_wild_bootstrap(
            panel, bootstrap, derive_seed(replication_seed(seed, r), seed_tag::bootstrap),
            ExecMode::Serial);
        estimates[r] = cgm.estimate;
        len_cgm[r] = cgm.length();
        len_m[r] = boot.length();
        covered_cgm[r] = cgm.covers(theta) ? 1 : 0;
        covered_m[r] = boot.covers(theta) ? 1 : 0;
        clamped[r] = cgm.has_flag(IntervalFlag::NegativeVarianceClamped) ? 1 : 0;
    };

    const auto count = static_cast<std::ptrdiff_t>(R);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < count; ++r)
            one_rep(static_cast<std::size_t>(r));
    } else {
        for (std::ptrdiff_t r = 0; r < count; ++r)
            one_rep(static_cast<std::size_t>(r));
    }

    // Serial reductions in replication order.
    std::size_t n_cgm = 0, n_m = 0, n_clamped = 0;
    for (std::size_t r = 0; r < R; ++r) {
        n_cgm += covered_cgm[r];
        n_m += covered_m[r];
        n_clamped += clamped[r];
    }

    GridCellSummary s;
    s.delta = spec.delta;
    s.j = static_cast<int>(spec.n_factors);
    s.phi = spec.phi;
    s.replications = replications;
    const double dr = static_cast<double>(R);
    s.coverage_cgm = static_cast<double>(n_cgm) / dr;
    s.coverage_m = static_cast<double>(n_m) / dr;
    s.negative_variance_rate = static_cast<double>(n_clamped) / dr;
    s.mean_ci_length_cgm = mean(len_cgm);
    s.mean_ci_length_m = mean(len_m);
    s.ks_distance = normality_stats(estimates).ks_distance;
    s.coverage_mc_se = std::sqrt(s.coverage_cgm * (1.0 - s.coverage_cgm) / dr);
    return s;
}

std::vector<GridCellSummary> run_grid(const GridSpec& grid, ExecMode mode) {
    grid.validate();

    auto deltas = grid.deltas;
    auto js = grid.js;
    auto phis = grid.phis;
    std::sort(deltas.begin(), deltas.end());
    std::sort(js.begin(), js.end());
    std::sort(phis.begin(), phis.end());

    std::vector<GridCellSummary> out;
    out.reserve(deltas.size() * js.size() * phis.size());
    for (double delta : deltas)
        for (int j : js)
            for (double phi : phis) {
                DgpSpec spec;
                spec.n_rows = grid.n_rows;
                spec.n_cols = grid.n_cols;
                spec.n_factors = static_cast<std::size_t>(j);
                spec.delta = delta;
                spec.phi = phi;
                try {
                    out.push_back(run_cell(spec, grid.replications, grid.bootstrap,
                                           grid.level,
                                           cell_seed(grid.master_seed, delta, j, phi),
                                           mode, grid.correction_factor));
                } catch (const std::exception& e) {
                    throw std::runtime_error(
                        "cell (delta=" + std::to_string(delta) + ", j=" + std::to_string(j) +
                        ", phi=" + std::to_string(phi) + "): " + e.what());
                }
            }
    return out;
}

std::vector<double> theta_samples(const DgpSpec& spec, int replications,
                                  std::uint64_t seed, ExecMode mode) {
    spec.validate();
    if (replications < 1)
        throw std::invalid_argument("theta_samples: replications must be >= 1");
    const auto R = static_cast<std::size_t>(replications);
    std::vector<double> estimates(R);
    auto one_rep = [&](std::size_t r) {
        RngStream rng(replication_seed(seed, r));
        const LatentDraw latents = sample_latents(spec, rng);
        estimates[r] = sample_mean(assemble_panel(spec, latents));
    };
    const auto count = static_cast<std::ptrdiff_t>(R);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < count; ++r)
            one_rep(static_cast<std::size_t>(r));
    } else {
        for (std::ptrdiff_t r = 0; r < count; ++r)
            one_rep(static_cast<std::size_t>(r));
    }
    return estimates;
}

NormalityStats qq_cell(const DgpSpec& spec, int replications, std::uint64_t seed,
                       ExecMode mode) {
    if (replications < 100)
        throw std::invalid_argument("qq_cell: replications must be >= 100");
    return normality_stats(theta_samples(spec, replications, seed, mode));
}

}  // namespace twoway
