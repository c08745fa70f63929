// Two-way wild bootstrap for the panel mean: perturbs the estimated row,
// column, and interaction components with independent external multipliers
// and inverts the empirical quantiles of the recentered draws.
#pragma once

#include <cstdint>

#include "twoway/estimators.hpp"
#include "twoway/exec.hpp"

namespace twoway {

enum class Multiplier { GaussianMultiplier, Rademacher };

struct BootstrapConfig {
    int n_draws = 399;
    Multiplier multiplier = Multiplier::GaussianMultiplier;
    // The interaction term is what tracks non-gaussian limits; disabling it
    // leaves a linear-parts-only wild bootstrap (useful as an ablation).
    bool include_degenerate_term = true;
    double level = 0.95;

    void validate() const;
};

// With row effects a[i] = rowmean_i - mean, column effects b[t] = colmean_t
// - mean, and interactions w[i][t] = D[i][t] - rowmean_i - colmean_t + mean,
// draw b computes
//   mean* = mean + N^-1 sum_i eta_i a[i] + T^-1 sum_t xi_t b[t]
//           + (NT)^-1 sum_{i,t} eta_i xi_t w[i][t]   (if the term is on)
// with fresh multipliers eta (rows) and xi (columns) per draw. The interval
// is [mean - q_{1-alpha/2}, mean - q_{alpha/2}] over quantiles q of
// {mean* - mean}. std_error reports the sample sd of the draws.
// Draw b uses the substream derive_seed(seed, b): results are identical in
// both exec modes and reproducible given the seed.
IntervalResult two_way_wild_bootstrap(const Panel& panel, const BootstrapConfig& config,
                                      std::uint64_t seed,
                                      ExecMode mode = ExecMode::Parallel);

}  // namespace twoway
