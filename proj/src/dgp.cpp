#include "twoway/dgp.hpp"

#include <cmath>
#include <stdexcept>

namespace twoway {

std::vector<double> DgpSpec::resolved_weights() const {
    if (!weights.empty())
        return weights;
    return std::vector<double>(n_factors, 1.0 / static_cast<double>(n_factors));
}

void DgpSpec::validate() const {
    if (n_rows < 1)
        throw std::invalid_argument("n_rows must be >= 1");
    if (n_cols < 1)
        throw std::invalid_argument("n_cols must be >= 1");
    if (n_factors < 1)
        throw std::invalid_argument("n_factors must be >= 1");
    if (!std::isfinite(delta))
        throw std::invalid_argument("delta must be finite");
    if (!(phi >= 0.0) || !std::isfinite(phi))
        throw std::invalid_argument("phi must be finite and >= 0");
    if (!weights.empty()) {
        if (weights.size() != n_factors)
            throw std::invalid_argument("weights must have exactly n_factors entries");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("weights entries must be finite and > 0");
    }
}

double OracleKernels::a(std::span<const double> alpha_row) const {
    double s = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j)
        s += weights_[j] * alpha_row[j];
    return -delta_ * s;
}

double OracleKernels::b(std::span<const double> gamma_row) const {
    double s = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j)
        s += weights_[j] * gamma_row[j];
    return -delta_ * s;
}

double OracleKernels::w(std::span<const double> alpha_row,
                        std::span<const double> gamma_row) const {
    double s = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j)
        s += weights_[j] * alpha_row[j] * gamma_row[j];
    return s;
}

LatentDraw sample_latents(const DgpSpec& spec, RngStream& rng) {
    spec.validate();
    LatentDraw d;
    d.n_rows = spec.n_rows;
    d.n_cols = spec.n_cols;
    d.n_factors = spec.n_factors;
    d.alpha.resize(spec.n_rows * spec.n_factors);
    d.gamma.resize(spec.n_cols * spec.n_factors);
    d.eps.resize(spec.n_rows * spec.n_cols);
    for (double& x : d.alpha)
        x = rng.next_normal();
    for (double& x : d.gamma)
        x = rng.next_normal();
    for (double& x : d.eps)
        x = rng.next_normal();
    return d;
}

Panel assemble_panel(const DgpSpec& spec, const LatentDraw& latents) {
    spec.validate();
    if (latents.n_rows != spec.n_rows || latents.n_cols != spec.n_cols ||
        latents.n_factors != spec.n_factors)
        throw std::invalid_argument("latents dimensions do not match spec");
    const auto w = spec.resolved_weights();
    const std::size_t J = spec.n_factors;
    Panel p(spec.n_rows, spec.n_cols);
    for (std::size_t i = 0; i < spec.n_rows; ++i) {
        const double* ai = latents.alpha.data() + i * J;
        for (std::size_t t = 0; t < spec.n_cols; ++t) {
            const double* gt = latents.gamma.data() + t * J;
            double acc = 0.0;
            for (std::size_t j = 0; j < J; ++j)
                acc += w[j] * (ai[j] - spec.delta) * (gt[j] - spec.delta);
            p.at(i, t) = acc + spec.phi * latents.eps[i * spec.n_cols + t];
        }
    }
    return p;
}

double true_mean(const DgpSpec& spec) {
    spec.validate();
    const auto w = spec.resolved_weights();
    double s = 0.0;
    for (double wj : w)
        s += wj;
    return spec.delta * spec.delta * s;
}

OracleKernels oracle_kernels(const DgpSpec& spec) {
    spec.validate();
    return OracleKernels(spec.delta, spec.phi, spec.resolved_weights());
}

}  // namespace twoway
