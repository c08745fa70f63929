// Mean estimation for a two-way clustered panel with cluster-robust,
// one-way, and iid variance estimators, plus normal-theory confidence
// intervals. The two-way estimator clamps rather than reports a negative
// variance; the clamp is flagged and the degenerate interval it produces
// counts as non-covering unless it hits the target exactly.
#pragma once

#include <cstdint>
#include <string>

#include "twoway/dgp.hpp"

namespace twoway {

// ---- types ----

enum class Method { TWCR, OneWayRow, OneWayCol, IID, Bootstrap };

enum class IntervalFlag : std::uint32_t {
    NegativeVarianceClamped = 1u << 0,
    DegenerateInterval = 1u << 1,
};

struct IntervalResult {
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double level = 0.0;
    Method method = Method::TWCR;
    std::uint32_t flags = 0;

    bool has_flag(IntervalFlag f) const {
        return (flags & static_cast<std::uint32_t>(f)) != 0;
    }
    double length() const { return ci_upper - ci_lower; }
    bool covers(double value) const { return ci_lower <= value && value <= ci_upper; }
};

std::string method_name(Method m);
// "", or flag names joined by '|'.
std::string flag_names(std::uint32_t flags);

struct TwcrVariance {
    double variance = 0.0;      // max(raw, 0)
    double raw_variance = 0.0;  // can be negative
    bool clamped = false;
};

enum class Axis { Rows, Cols };

// ---- operations ----

double sample_mean(const Panel& panel);

// Variance of the sample mean treating both rows and columns as cluster
// dimensions: with u = D - mean, raw = (NT)^-2 [ sum_i (row sum of u)^2
// + sum_t (col sum of u)^2 - sum u^2 ]. Requires at least 2x2.
TwcrVariance twcr_variance(const Panel& panel);

// (NT)^-2 * sum over clusters of (within-cluster residual sum)^2; the
// clustered axis needs at least two clusters.
double oneway_variance(const Panel& panel, Axis axis);

// (NT)^-2 * sum u^2: the no-clustering plug-in; also the subtraction term
// of the two-way formula.
double iid_variance(const Panel& panel);

// estimate +- z_{(1+level)/2} * sqrt(variance); zero variance yields a point
// interval with DegenerateInterval flagged. extra_flags are merged in.
IntervalResult normal_ci(double estimate, double variance, double level,
                         Method method = Method::TWCR, std::uint32_t extra_flags = 0);

// Convenience composition: mean, clamped two-way variance scaled by
// correction_factor, normal CI, flags carried over.
IntervalResult twcr_interval(const Panel& panel, double level,
                             double correction_factor = 1.0);

}  // namespace twoway
