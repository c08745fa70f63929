// Oracle decomposition of the panel mean into row, column, interaction,
// and noise components, Monte Carlo estimators of the ratio conditions
// that govern asymptotic gaussianity, the martingale construction used to
// certify the interaction component, and normality summaries for samples
// of the estimator.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "twoway/dgp.hpp"
#include "twoway/exec.hpp"

namespace twoway {

// ---- types ----

// Scaled components: a[i] = a_kernel(alpha_i)/N, b[t] = b_kernel(gamma_t)/T,
// w[i][t] = w_kernel/(NT), r[i][t] = r_kernel/(NT). Their total equals the
// centered sample mean exactly in real arithmetic.
struct HoeffdingParts {
    std::vector<double> a;
    std::vector<double> b;
    Panel w;
    Panel r;
    // Closed-form variances of the summed components:
    //   l = delta^2 sum(w_j^2) (1/N + 1/T), w = sum(w_j^2)/(NT),
    //   r = phi^2/(NT).
    // Their total is the exact variance of the sample mean.
    struct VarianceShares {
        double l = 0.0, w = 0.0, r = 0.0;
    } variance_shares;
};

// Ratio conditions, all of which must vanish asymptotically for the
// estimator to be gaussian. Estimated by Monte Carlo over independent
// kernel evaluations except eigen_ratio, which is exact arithmetic on the
// weights. Every moment of the Gaussian factor kernels is finite and
// E[D^2] > 0 by construction, so the companion integrability conditions
// need no runtime check.
struct AssumptionReport {
    // N^-1 E[w^4] / (E[w^2])^2.
    double lyapunov_ratio = 0.0;
    // Average of the two symmetric conditional cross-product terms over
    // (E[w^2])^2. The average (not the sum) is used so the uniform-weight
    // factor model yields exactly the eigenvalue-concentration value 1/J.
    double hall_ratio = 0.0;
    // The two displayed ratios of the N=T moment conditions on the linear
    // kernels:
    //   first  = (E[a^4]+E[b^4]) / (N[(E[a^2])^2+(E[b^2])^2] + N^3 (E[w^2])^2)
    //   second = N(E[(a(x1)w(x1,y2))^2]+E[(b(y1)w(x2,y1))^2])
    //            / ((E[a^2])^2+(E[b^2])^2 + N^2 (E[w^2])^2)
    double a2_first_ratio = 0.0;
    double a2_second_ratio = 0.0;
    // sum(w_j^4)/(sum(w_j^2))^2; 1/J under uniform weights, 1 iff a single
    // factor carries all weight.
    double eigen_ratio = 0.0;
    struct StdErrors {
        double lyapunov = 0.0, hall = 0.0, a2_first = 0.0, a2_second = 0.0;
        double eigen = 0.0;  // exact, always 0
    } mc_std_errors;
};

struct NormalityStats {
    double ks_distance = 0.0;
    // The standardization parameters: the input sample's mean and sd
    // (ddof=1), not the post-standardization moments.
    double standardized_sample_mean = 0.0;
    double standardized_sample_sd = 0.0;
    // (theoretical quantile, sample quantile) pairs, ascending in the
    // theoretical coordinate.
    std::vector<std::pair<double, double>> qq_points;
};

struct MomentEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// ---- operations ----

HoeffdingParts hoeffding_decompose(const DgpSpec& spec, const LatentDraw& latents);

// mc_draws independent kernel evaluations; draw m uses the substream
// derive_seed(seed, m). Requires mc_draws >= 1000.
AssumptionReport assumption_report(const DgpSpec& spec, std::size_t mc_draws,
                                   std::uint64_t seed, ExecMode mode = ExecMode::Parallel);

// The triangular-to-rectangular scan of the scaled interaction array:
// for s <= N, U_s collects the new L-shaped slice (row s up to the
// diagonal plus column s above it); for s > N, the full column s. Scaled
// by 1/sigma_W with sigma_W^2 = sum(w_j^2)/(NT), so the U_s partition the
// total interaction sum and sum_s U_s has unit variance. Requires N <= T.
std::vector<double> martingale_sequence(const DgpSpec& spec, const LatentDraw& latents);

// Monte Carlo estimate of E[product of w_kernel(alpha_i, gamma_t) over the
// pattern] on a grid of at most 4x4 latent rows; 1-based indices. Whenever
// some row or column index appears exactly once the expectation is zero.
// Requires mc_draws >= 10000.
MomentEstimate vanishing_moment_check(const DgpSpec& spec,
                                      std::span<const std::pair<int, int>> pattern,
                                      std::size_t mc_draws, std::uint64_t seed,
                                      ExecMode mode = ExecMode::Parallel);

// Standardizes by sample mean/sd, then reports the sup distance between
// the empirical CDF and the normal CDF plus a quantile-quantile grid at
// p = 1/(n_qq_points+1) .. n_qq_points/(n_qq_points+1). Requires at least
// 100 samples and nonzero sd.
NormalityStats normality_stats(std::span<const double> samples,
                               std::size_t n_qq_points = 199);

}  // namespace twoway
