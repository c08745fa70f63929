// Separately-exchangeable factor data-generating process: each panel entry
// is a weighted product of shifted row and column factors plus independent
// noise, D[i][t] = sum_j weights[j]*(alpha[i][j]-delta)*(gamma[t][j]-delta)
// + phi*eps[i][t]. Also exposes the closed-form centered kernels of the
// entry's conditional-expectation decomposition, which diagnostics consume.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "twoway/rng.hpp"

namespace twoway {

// ---- types ----

struct DgpSpec {
    std::size_t n_rows = 0;    // N
    std::size_t n_cols = 0;    // T
    std::size_t n_factors = 0; // J
    double delta = 0.0;
    double phi = 0.0;
    // One positive weight per factor; empty means uniform 1/n_factors.
    std::vector<double> weights;

    // Resolved weights: uniform when none were given.
    std::vector<double> resolved_weights() const;
    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct Panel {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> data;  // row-major, n_rows * n_cols

    Panel() = default;
    Panel(std::size_t rows, std::size_t cols)
        : n_rows(rows), n_cols(cols), data(rows * cols, 0.0) {}

    double& at(std::size_t i, std::size_t t) { return data[i * n_cols + t]; }
    double at(std::size_t i, std::size_t t) const { return data[i * n_cols + t]; }
};

struct LatentDraw {
    std::size_t n_rows = 0, n_cols = 0, n_factors = 0;
    std::vector<double> alpha;  // n_rows x n_factors, row-major
    std::vector<double> gamma;  // n_cols x n_factors, row-major
    std::vector<double> eps;    // n_rows x n_cols, row-major

    std::span<const double> alpha_row(std::size_t i) const {
        return {alpha.data() + i * n_factors, n_factors};
    }
    std::span<const double> gamma_row(std::size_t t) const {
        return {gamma.data() + t * n_factors, n_factors};
    }
};

// Closed-form centered kernels: the panel entry minus its mean splits
// exactly into a(alpha_i) + b(gamma_t) + w(alpha_i, gamma_t) + r(eps_it).
class OracleKernels {
public:
    OracleKernels(double delta, double phi, std::vector<double> weights)
        : delta_(delta), phi_(phi), weights_(std::move(weights)) {}

    double a(std::span<const double> alpha_row) const;
    double b(std::span<const double> gamma_row) const;
    double w(std::span<const double> alpha_row, std::span<const double> gamma_row) const;
    double r(double eps) const { return phi_ * eps; }

    std::span<const double> weights() const { return weights_; }

private:
    double delta_;
    double phi_;
    std::vector<double> weights_;
};

// ---- operations ----

// Fills alpha, gamma, eps (in that order, row-major) with independent
// standard normals from one stream; same seed, same arrays, bit for bit.
LatentDraw sample_latents(const DgpSpec& spec, RngStream& rng);
inline LatentDraw sample_latents(const DgpSpec& spec, std::uint64_t seed) {
    RngStream rng(seed);
    return sample_latents(spec, rng);
}

Panel assemble_panel(const DgpSpec& spec, const LatentDraw& latents);

// E[D] = delta^2 * sum of weights (delta^2 under uniform weights).
double true_mean(const DgpSpec& spec);

OracleKernels oracle_kernels(const DgpSpec& spec);

}  // namespace twoway
