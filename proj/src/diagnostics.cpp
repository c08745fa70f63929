#include "twoway/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "twoway/math.hpp"
#include "twoway/rng.hpp"

namespace twoway {

namespace {

double sum_sq(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs)
        s.add(x * x);
    return s.value();
}

}  // namespace

HoeffdingParts hoeffding_decompose(const DgpSpec& spec, const LatentDraw& latents) {
    spec.validate();
    if (latents.n_rows != spec.n_rows || latents.n_cols != spec.n_cols ||
        latents.n_factors != spec.n_factors)
        throw std::invalid_argument("hoeffding_decompose: latents do not match spec");
    const auto kernels = oracle_kernels(spec);
    const std::size_t N = spec.n_rows, T = spec.n_cols;
    const double inv_n = 1.0 / static_cast<double>(N);
    const double inv_t = 1.0 / static_cast<double>(T);
    const double inv_nt = 1.0 / static_cast<double>(N * T);

    HoeffdingParts parts;
    parts.a.resize(N);
    parts.b.resize(T);
    parts.w = Panel(N, T);
    parts.r = Panel(N, T);
    for (std::size_t i = 0; i < N; ++i)
        parts.a[i] = inv_n * kernels.a(latents.alpha_row(i));
    for (std::size_t t = 0; t < T; ++t)
        parts.b[t] = inv_t * kernels.b(latents.gamma_row(t));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t t = 0; t < T; ++t) {
            parts.w.at(i, t) = inv_nt * kernels.w(latents.alpha_row(i), latents.gamma_row(t));
            parts.r.at(i, t) = inv_nt * kernels.r(latents.eps[i * T + t]);
        }

    const double w2 = sum_sq(kernels.weights());
    parts.variance_shares.l = spec.delta * spec.delta * w2 * (inv_n + inv_t);
    parts.variance_shares.w = w2 * inv_nt;
    parts.variance_shares.r = spec.phi * spec.phi * inv_nt;
    return parts;
}

namespace {

// Sample means of per-draw primitives plus the covariance matrix of those
// means; fixed-order reductions so results do not depend on fill order.
struct MomentTable {
    std::vector<double> means;
    std::vector<double> cov;  // K x K covariance of the means (sample cov / M)
    std::size_t n_draws = 0;

    double cov_at(std::size_t j, std::size_t k) const { return cov[j * means.size() + k]; }
};

MomentTable summarize_columns(const std::vector<std::vector<double>>& cols) {
    MomentTable tab;
    const std::size_t k = cols.size();
    const std::size_t m = cols[0].size();
    tab.n_draws = m;
    tab.means.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        tab.means[j] = mean(cols[j]);
    tab.cov.assign(k * k, 0.0);
    std::vector<CompensatedSum> acc(k * k);
    for (std::size_t d = 0; d < m; ++d)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = j; l < k; ++l)
                acc[j * k + l].add((cols[j][d] - tab.means[j]) * (cols[l][d] - tab.means[l]));
    const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = j; l < k; ++l) {
            double c = acc[j * k + l].value() * scale;
            tab.cov[j * k + l] = c;
            tab.cov[l * k + j] = c;
        }
    return tab;
}

// Delta-method standard error of f(means): numerical gradient against the
// covariance of the means.
double plugin_se(const MomentTable& tab, const std::function<double(std::span<const double>)>& f) {
    const std::size_t k = tab.means.size();
    std::vector<double> g(k), probe(tab.means.begin(), tab.means.end());
    for (std::size_t j = 0; j < k; ++j) {
        const double h = std::max(1e-6 * std::abs(tab.means[j]), 1e-12);
        probe[j] = tab.means[j] + h;
        const double up = f(probe);
        probe[j] = tab.means[j] - h;
        const double dn = f(probe);
        probe[j] = tab.means[j];
        g[j] = (up - dn) / (2.0 * h);
    }
    double q = 0.0;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l)
            q += g[j] * tab.cov_at(j, l) * g[l];
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

double eigen_ratio_exact(std::span<const double> weights) {
    // Normalizing by the largest weight makes the uniform case exact
    // integer arithmetic, so the ratio is exactly fl(1/J) there.
    double wmax = 0.0;
    for (double w : weights)
        wmax = std::max(wmax, w);
    double s2 = 0.0, s4 = 0.0;
    for (double w : weights) {
        double u = w / wmax;
        double u2 = u * u;
        s2 += u2;
        s4 += u2 * u2;
    }
    return s4 / (s2 * s2);
}

}  // namespace

AssumptionReport assumption_report(const DgpSpec& spec, std::size_t mc_draws,
                                   std::uint64_t seed, ExecMode mode) {
    spec.validate();
    if (mc_draws < 1000)
        throw std::invalid_argument("assumption_report: mc_draws must be >= 1000");
    const auto kernels = oracle_kernels(spec);
    const auto weights = spec.resolved_weights();
    const std::size_t J = spec.n_factors;
    const double n = static_cast<double>(spec.n_rows);

    // Per-draw primitives:
    // 0 w11^2   1 w11^4   2 (E[w11 w21 | rows])^2   3 (E[w11 w12 | cols])^2
    // 4 a1^2    5 a1^4    6 b1^2    7 b1^4
    // 8 (a1 w12)^2        9 (b1 w21)^2
    constexpr std::size_t kCols = 10;
    std::vector<std::vector<double>> cols(kCols, std::vector<double>(mc_draws));

    auto one_draw = [&](std::size_t m) {
        RngStream rng(derive_seed(seed, m));
        std::vector<double> a1(J), a2(J), g1(J), g2(J);
        for (auto* v : {&a1, &a2, &g1, &g2})
            for (double& x : *v)
                x = rng.next_normal();
        const double w11 = kernels.w(a1, g1);
        const double w12 = kernels.w(a1, g2);
        const double w21 = kernels.w(a2, g1);
        // Conditional cross-products have the closed form
        // sum_j weight_j^2 * row1_j * row2_j for this DGP.
        double ca = 0.0, cg = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            ca += weights[j] * weights[j] * a1[j] * a2[j];
            cg += weights[j] * weights[j] * g1[j] * g2[j];
        }
        const double av = kernels.a(a1);
        const double bv = kernels.b(g1);
        cols[0][m] = w11 * w11;
        cols[1][m] = cols[0][m] * cols[0][m];
        cols[2][m] = ca * ca;
        cols[3][m] = cg * cg;
        cols[4][m] = av * av;
        cols[5][m] = cols[4][m] * cols[4][m];
        cols[6][m] = bv * bv;
        cols[7][m] = cols[6][m] * cols[6][m];
        cols[8][m] = (av * w12) * (av * w12);
        cols[9][m] = (bv * w21) * (bv * w21);
    };

    const auto count = static_cast<std::ptrdiff_t>(mc_draws);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t m = 0; m < count; ++m)
            one_draw(static_cast<std::size_t>(m));
    } else {
        for (std::ptrdiff_t m = 0; m < count; ++m)
            one_draw(static_cast<std::size_t>(m));
    }

    const MomentTable tab = summarize_columns(cols);

    auto lyapunov = [n](std::span<const double> v) { return v[1] / (n * v[0] * v[0]); };
    auto hall = [](std::span<const double> v) { return 0.5 * (v[2] + v[3]) / (v[0] * v[0]); };
    auto a2_first = [n](std::span<const double> v) {
        return (v[5] + v[7]) / (n * (v[4] * v[4] + v[6] * v[6]) + n * n * n * v[0] * v[0]);
    };
    auto a2_second = [n](std::span<const double> v) {
        return n * (v[8] + v[9]) / (v[4] * v[4] + v[6] * v[6] + n * n * v[0] * v[0]);
    };

    AssumptionReport rep;
    rep.lyapunov_ratio = lyapunov(tab.means);
    rep.hall_ratio = hall(tab.means);
    rep.a2_first_ratio = a2_first(tab.means);
    rep.a2_second_ratio = a2_second(tab.means);
    rep.eigen_ratio = eigen_ratio_exact(weights);
    rep.mc_std_errors.lyapunov = plugin_se(tab, lyapunov);
    rep.mc_std_errors.hall = plugin_se(tab, hall);
    rep.mc_std_errors.a2_first = plugin_se(tab, a2_first);
    rep.mc_std_errors.a2_second = plugin_se(tab, a2_second);
    rep.mc_std_errors.eigen = 0.0;
    return rep;
}

std::vector<double> martingale_sequence(const DgpSpec& spec, const LatentDraw& latents) {
    spec.validate();
    if (spec.n_rows > spec.n_cols)
        throw std::invalid_argument("martingale_sequence: requires n_rows <= n_cols");
    if (latents.n_rows != spec.n_rows || latents.n_cols != spec.n_cols ||
        latents.n_factors != spec.n_factors)
        throw std::invalid_argument("martingale_sequence: latents do not match spec");
    const auto kernels = oracle_kernels(spec);
    const std::size_t N = spec.n_rows, T = spec.n_cols;
    const double inv_nt = 1.0 / static_cast<double>(N * T);
    const double sigma_sq = sum_sq(kernels.weights()) * inv_nt;
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("martingale_sequence: degenerate interaction component");
    const double inv_sigma = 1.0 / std::sqrt(sigma_sq);

    Panel w(N, T);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t t = 0; t < T; ++t)
            w.at(i, t) = inv_nt * kernels.w(latents.alpha_row(i), latents.gamma_row(t));

    std::vector<double> u(T, 0.0);
    for (std::size_t s = 0; s < T; ++s) {
        CompensatedSum acc;
        if (s < N) {
            for (std::size_t t = 0; t < s; ++t)
                acc.add(w.at(s, t));
            acc.add(w.at(s, s));
            for (std::size_t i = 0; i < s; ++i)
                acc.add(w.at(i, s));
        } else {
            for (std::size_t i = 0; i < N; ++i)
                acc.add(w.at(i, s));
        }
        u[s] = inv_sigma * acc.value();
    }
    return u;
}

MomentEstimate vanishing_moment_check(const DgpSpec& spec,
                                      std::span<const std::pair<int, int>> pattern,
                                      std::size_t mc_draws, std::uint64_t seed,
                                      ExecMode mode) {
    spec.validate();
    if (pattern.empty())
        throw std::invalid_argument("vanishing_moment_check: empty pattern");
    for (auto [i, t] : pattern)
        if (i < 1 || i > 4 || t < 1 || t > 4)
            throw std::invalid_argument("vanishing_moment_check: indices must lie in 1..4");
    if (mc_draws < 10000)
        throw std::invalid_argument("vanishing_moment_check: mc_draws must be >= 10000");
    const auto kernels = oracle_kernels(spec);
    const std::size_t J = spec.n_factors;
    constexpr std::size_t kGrid = 4;

    std::vector<double> prods(mc_draws);
    auto one_draw = [&](std::size_t m) {
        RngStream rng(derive_seed(seed, m));
        // All 4+4 latent rows are drawn regardless of the pattern, so the
        // stream layout does not depend on which indices appear.
        std::vector<double> alpha(kGrid * J), gamma(kGrid * J);
        for (double& x : alpha)
            x = rng.next_normal();
        for (double& x : gamma)
            x = rng.next_normal();
        double prod = 1.0;
        for (auto [i, t] : pattern) {
            std::span<const double> ar{alpha.data() + (static_cast<std::size_t>(i) - 1) * J, J};
            std::span<const double> gr{gamma.data() + (static_cast<std::size_t>(t) - 1) * J, J};
            prod *= kernels.w(ar, gr);
        }
        prods[m] = prod;
    };

    const auto count = static_cast<std::ptrdiff_t>(mc_draws);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t m = 0; m < count; ++m)
            one_draw(static_cast<std::size_t>(m));
    } else {
        for (std::ptrdiff_t m = 0; m < count; ++m)
            one_draw(static_cast<std::size_t>(m));
    }

    MomentEstimate est;
    est.estimate = mean(prods);
    est.std_error = sample_sd(prods) / std::sqrt(static_cast<double>(mc_draws));
    return est;
}

NormalityStats normality_stats(std::span<const double> samples, std::size_t n_qq_points) {
    if (samples.size() < 100)
        throw std::invalid_argument("normality_stats: need at least 100 samples");
    if (n_qq_points < 1)
        throw std::invalid_argument("normality_stats: need at least one qq point");
    const double m = mean(samples);
    const double sd = sample_sd(samples);
    if (!(sd > 0.0))
        throw std::invalid_argument("normality_stats: zero sample sd");

    std::vector<double> z(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        z[i] = (samples[i] - m) / sd;
    std::sort(z.begin(), z.end());

    const double n = static_cast<double>(z.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double cdf = normal_cdf(z[i]);
        ks = std::max(ks, std::max((static_cast<double>(i) + 1.0) / n - cdf,
                                   cdf - static_cast<double>(i) / n));
    }

    NormalityStats stats;
    stats.ks_distance = ks;
    stats.standardized_sample_mean = m;
    stats.standardized_sample_sd = sd;
    stats.qq_points.reserve(n_qq_points);
    for (std::size_t k = 1; k <= n_qq_points; ++k) {
        const double p = static_cast<double>(k) / (static_cast<double>(n_qq_points) + 1.0);
        stats.qq_points.emplace_back(normal_quantile(p), empirical_quantile_sorted(z, p));
    }
    return stats;
}

}  // namespace twoway
