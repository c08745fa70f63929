#include "twoway/bootstrap.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "twoway/math.hpp"
#include "twoway/rng.hpp"

namespace twoway {

void BootstrapConfig::validate() const {
    if (n_draws < 1)
        throw std::invalid_argument("n_draws must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("level must lie in (0,1)");
}

namespace {

double draw_multiplier(RngStream& rng, Multiplier m) {
    return m == Multiplier::GaussianMultiplier ? rng.next_normal() : rng.next_rademacher();
}

}  // namespace

IntervalResult two_way_wild_bootstrap(const Panel& panel, const BootstrapConfig& config,
                                      std::uint64_t seed, ExecMode mode) {
    config.validate();
    if (panel.n_rows < 2 || panel.n_cols < 2)
        throw std::invalid_argument("two_way_wild_bootstrap: panel must be at least 2x2");

    const std::size_t N = panel.n_rows, T = panel.n_cols;
    const double theta = sample_mean(panel);

    std::vector<double> row_eff(N), col_eff(T);
    for (std::size_t i = 0; i < N; ++i) {
        CompensatedSum s;
        for (std::size_t t = 0; t < T; ++t)
            s.add(panel.at(i, t));
        row_eff[i] = s.value() / static_cast<double>(T) - theta;
    }
    for (std::size_t t = 0; t < T; ++t) {
        CompensatedSum s;
        for (std::size_t i = 0; i < N; ++i)
            s.add(panel.at(i, t));
        col_eff[t] = s.value() / static_cast<double>(N) - theta;
    }
    // Interaction residuals: w[i][t] = D - rowmean - colmean + theta.
    std::vector<double> inter(N * T);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t t = 0; t < T; ++t)
            inter[i * T + t] = panel.at(i, t) - (row_eff[i] + theta) - (col_eff[t] + theta) + theta;

    const int B = config.n_draws;
    std::vector<double> deltas(static_cast<std::size_t>(B));

    auto one_draw = [&](int b) {
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        std::vector<double> eta(N), xi(T);
        for (std::size_t i = 0; i < N; ++i)
            eta[i] = draw_multiplier(rng, config.multiplier);
        for (std::size_t t = 0; t < T; ++t)
            xi[t] = draw_multiplier(rng, config.multiplier);
        CompensatedSum row_part;
        for (std::size_t i = 0; i < N; ++i)
            row_part.add(eta[i] * row_eff[i]);
        CompensatedSum col_part;
        for (std::size_t t = 0; t < T; ++t)
            col_part.add(xi[t] * col_eff[t]);
        double d = row_part.value() / static_cast<double>(N) +
                   col_part.value() / static_cast<double>(T);
        if (config.include_degenerate_term) {
            CompensatedSum w_part;
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                const double* wrow = inter.data() + i * T;
                for (std::size_t t = 0; t < T; ++t)
                    acc += wrow[t] * xi[t];
                w_part.add(eta[i] * acc);
            }
            d += w_part.value() / static_cast<double>(N * T);
        }
        deltas[static_cast<std::size_t>(b)] = d;
    };

    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int b = 0; b < B; ++b)
            one_draw(b);
    } else {
        for (int b = 0; b < B; ++b)
            one_draw(b);
    }

    std::vector<double> sorted(deltas);
    std::sort(sorted.begin(), sorted.end());
    const double alpha = 1.0 - config.level;
    const double q_lo = empirical_quantile_sorted(sorted, 0.5 * alpha);
    const double q_hi = empirical_quantile_sorted(sorted, 1.0 - 0.5 * alpha);

    IntervalResult r;
    r.estimate = theta;
    r.std_error = B >= 2 ? sample_sd(deltas) : 0.0;
    r.ci_lower = theta - q_hi;
    r.ci_upper = theta - q_lo;
    r.level = config.level;
    r.method = Method::Bootstrap;
    if (r.ci_lower == r.ci_upper)
        r.flags |= static_cast<std::uint32_t>(IntervalFlag::DegenerateInterval);
    return r;
}

}  // namespace twoway
