#include "twoway/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "twoway/math.hpp"

namespace twoway {

std::string method_name(Method m) {
    switch (m) {
        case Method::TWCR: return "twcr";
        case Method::OneWayRow: return "oneway_row";
        case Method::OneWayCol: return "oneway_col";
        case Method::IID: return "iid";
        case Method::Bootstrap: return "bootstrap";
    }
    return "unknown";
}

std::string flag_names(std::uint32_t flags) {
    std::string out;
    auto append = [&out](const char* name) {
        if (!out.empty())
            out += '|';
        out += name;
    };
    if (flags & static_cast<std::uint32_t>(IntervalFlag::NegativeVarianceClamped))
        append("negative_variance_clamped");
    if (flags & static_cast<std::uint32_t>(IntervalFlag::DegenerateInterval))
        append("degenerate_interval");
    return out;
}

double sample_mean(const Panel& panel) {
    if (panel.data.empty())
        throw std::invalid_argument("sample_mean: empty panel");
    return mean(panel.data);
}

namespace {

void require_min_2x2(const Panel& panel, const char* op) {
    if (panel.n_rows < 2 || panel.n_cols < 2)
        throw std::invalid_argument(std::string(op) + ": panel must be at least 2x2");
}

}  // namespace

TwcrVariance twcr_variance(const Panel& panel) {
    require_min_2x2(panel, "twcr_variance");
    // Composed from the one-way and iid pieces so the three-term identity
    // holds bit-for-bit, not just algebraically.
    TwcrVariance v;
    v.raw_variance = oneway_variance(panel, Axis::Rows) +
                     oneway_variance(panel, Axis::Cols) - iid_variance(panel);
    v.clamped = v.raw_variance < 0.0;
    v.variance = v.clamped ? 0.0 : v.raw_variance;
    return v;
}

double oneway_variance(const Panel& panel, Axis axis) {
    if (axis == Axis::Rows && panel.n_rows < 2)
        throw std::invalid_argument("oneway_variance: need at least two row clusters");
    if (axis == Axis::Cols && panel.n_cols < 2)
        throw std::invalid_argument("oneway_variance: need at least two column clusters");
    if (panel.data.empty())
        throw std::invalid_argument("oneway_variance: empty panel");
    const std::size_t N = panel.n_rows, T = panel.n_cols;
    const double theta = sample_mean(panel);
    const std::size_t clusters = axis == Axis::Rows ? N : T;
    CompensatedSum total;
    for (std::size_t c = 0; c < clusters; ++c) {
        CompensatedSum within;
        if (axis == Axis::Rows) {
            for (std::size_t t = 0; t < T; ++t)
                within.add(panel.at(c, t) - theta);
        } else {
            for (std::size_t i = 0; i < N; ++i)
                within.add(panel.at(i, c) - theta);
        }
        double s = within.value();
        total.add(s * s);
    }
    const double scale = 1.0 / (static_cast<double>(N * T) * static_cast<double>(N * T));
    return scale * total.value();
}

double iid_variance(const Panel& panel) {
    if (panel.data.empty())
        throw std::invalid_argument("iid_variance: empty panel");
    const std::size_t N = panel.n_rows, T = panel.n_cols;
    const double theta = sample_mean(panel);
    CompensatedSum sq;
    for (double x : panel.data) {
        double u = x - theta;
        sq.add(u * u);
    }
    const double scale = 1.0 / (static_cast<double>(N * T) * static_cast<double>(N * T));
    return scale * sq.value();
}

IntervalResult normal_ci(double estimate, double variance, double level, Method method,
                         std::uint32_t extra_flags) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("normal_ci: level must lie in (0,1)");
    if (!(variance >= 0.0))
        throw std::invalid_argument("normal_ci: variance must be >= 0");
    IntervalResult r;
    r.estimate = estimate;
    r.std_error = std::sqrt(variance);
    r.level = level;
    r.method = method;
    r.flags = extra_flags;
    if (variance == 0.0) {
        r.ci_lower = r.ci_upper = estimate;
        r.flags |= static_cast<std::uint32_t>(IntervalFlag::DegenerateInterval);
        return r;
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    r.ci_lower = estimate - z * r.std_error;
    r.ci_upper = estimate + z * r.std_error;
    return r;
}

IntervalResult twcr_interval(const Panel& panel, double level, double correction_factor) {
    if (!(correction_factor > 0.0))
        throw std::invalid_argument("twcr_interval: correction_factor must be > 0");
    const TwcrVariance v = twcr_variance(panel);
    std::uint32_t flags = 0;
    if (v.clamped)
        flags |= static_cast<std::uint32_t>(IntervalFlag::NegativeVarianceClamped);
    return normal_ci(sample_mean(panel), correction_factor * v.variance, level,
                     Method::TWCR, flags);
}

}  // namespace twoway
