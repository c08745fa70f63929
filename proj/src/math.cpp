#include "twoway/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace twoway {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Rational approximation of the probit function (relative error ~1e-9
// before refinement). Three branches: lower tail, central, upper tail.
double probit_guess(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
    double x = probit_guess(p);
    // One Halley step against the erfc-based CDF; phi(x) never underflows
    // for the |x| <= ~8.3 reachable from double p.
    double e = normal_cdf(x) - p;
    double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    double u = e / phi;
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double empirical_quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty())
        throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("empirical_quantile: p must lie in [0,1]");
    const std::size_t n = sorted.size();
    if (n == 1)
        return sorted[0];
    double h = static_cast<double>(n - 1) * p;
    auto lo = static_cast<std::size_t>(h);
    if (lo >= n - 1)
        return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double empirical_quantile(std::span<const double> samples, double p) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return empirical_quantile_sorted(sorted, p);
}

double compensated_total(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs)
        acc.add(x);
    return acc.value();
}

double mean(std::span<const double> xs) {
    if (xs.empty())
        throw std::invalid_argument("mean: empty sample");
    return compensated_total(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2)
        throw std::invalid_argument("sample_variance: need at least two values");
    double m = mean(xs);
    CompensatedSum acc;
    for (double x : xs) {
        double d = x - m;
        acc.add(d * d);
    }
    return acc.value() / static_cast<double>(xs.size() - 1);
}

double sample_sd(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs));
}

}  // namespace twoway
