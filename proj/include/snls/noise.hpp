#pragma once

#include <optional>
#include <span>

#include "snls/field.hpp"
#include "snls/rng.hpp"

namespace snls {

enum class NoiseKind { circular, real };

// Covariance operator, diagonal in the Fourier basis with a power-law
// symbol q_k = amplitude * (1+|k|^2)^{-decay/2}, optionally truncated at
// |k| > mode_cutoff. Smoothness requirements translate into warning
// thresholds on `decay` (see validation in the config layer).
struct CovarianceSpec {
    double amplitude = 1.0;
    double decay = 4.0;
    std::optional<double> mode_cutoff;
    NoiseKind kind = NoiseKind::circular;

    double symbol(double ksq) const;
    bool is_zero() const { return amplitude == 0.0; }
};

// Hilbert-Schmidt norm of Q into H^s over the grid's retained modes:
// sqrt( sum_k (1+|k|^2)^s q_k^2 ).
double hs_norm(const CovarianceSpec& q, double s, const Grid& grid);

// Wiener increment Q dW over a window dt, spectral representation,
// per-mode second moment q_k^2 dt (in the H-normalized mode convention).
// Consumes one stream counter tick.
Field sample_increment(const CovarianceSpec& q, GridPtr grid, double dt, NoiseStream& stream);

// Increment of the exactly integrated damped linear flow:
// per-mode variance q_k^2 (1 - e^{-2 lambda dt}) / (2 lambda)
// (q_k^2 dt when lambda == 0). Same Gaussian core as sample_increment,
// so equal stream keys produce proportionally identical draws.
Field sample_ou_increment(const CovarianceSpec& q, GridPtr grid, double lambda, double dt,
                          NoiseStream& stream);

// (1 - e^{-2 lambda dt}) / (2 lambda), continuous at lambda = 0.
double ou_increment_variance_scale(double lambda, double dt);

// One exact step of dG = -i*Lap(G) dt - lambda*G dt + Q dW:
// multiply each mode by e^{(i|k|^2 - lambda) dt}, then add the OU
// increment above. Input/output spectral.
Field gamma_exact_step(const Field& gamma, const CovarianceSpec& q, double lambda, double dt,
                       NoiseStream& stream);

// Normalized mode coefficient: the spectral value rescaled so that
// ||u||_H^2 == sum_k |coef_k|^2. Used by statistical tests.
std::complex<double> mode_coefficient(const Field& spectral, std::size_t linear_index);

namespace detail {
std::vector<double> symbol_table(const CovarianceSpec& q, const Grid& grid);
void fill_increment(std::span<const double> symbol, NoiseKind kind, const Grid& grid,
                    double var_scale, const NoiseStream& stream, Field& out);
}  // namespace detail

}  // namespace snls
