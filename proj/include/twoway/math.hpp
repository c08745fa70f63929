// Scalar numeric utilities: normal CDF/quantile, order-statistic quantiles,
// compensated summation. No external statistical dependencies.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace twoway {

// ---- normal distribution ----

// Phi(x), evaluated via erfc for full relative accuracy in both tails.
double normal_cdf(double x);

// Inverse of normal_cdf on (0,1). Rational initial guess refined by one
// Halley step against normal_cdf; absolute error well below 1e-9.
// Throws std::invalid_argument outside (0,1).
double normal_quantile(double p);

// ---- empirical quantiles ----

// Linear interpolation between adjacent order statistics: with n sorted
// values and h = (n-1)p, returns s[floor(h)] + (h - floor(h)) * (s[floor(h)+1]
// - s[floor(h)]). p=0 gives the minimum, p=1 the maximum.
// `sorted` must be ascending; empirical_quantile sorts a copy for callers
// holding unsorted data. Throws std::invalid_argument on empty input or
// p outside [0,1].
double empirical_quantile_sorted(std::span<const double> sorted, double p);
double empirical_quantile(std::span<const double> samples, double p);

// ---- summation ----

// Neumaier-compensated accumulator; deterministic for a fixed add order.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_total(std::span<const double> xs);
double mean(std::span<const double> xs);
// ddof=1 sample variance / sd; requires at least two values.
double sample_variance(std::span<const double> xs);
double sample_sd(std::span<const double> xs);

}  // namespace twoway
