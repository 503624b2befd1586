#pragma once

#include <complex>
#include <cstdint>

#include "snls/field.hpp"

namespace snls {

// Brute-force constants for the two pointwise complex inequalities used
// by the contraction and irreducibility arguments. The oracles never
// touch the solver: they sample complex pairs and measure ratios.
struct InequalityReport {
    double sigma = 0.0;
    std::uint64_t sample_count = 0;
    double max_ratio = 0.0;                 // fitted constant
    std::complex<double> argmax_z, argmax_x;
    double stability_delta = 0.0;           // relative change under sample doubling
};

// | |z|^{2s-2} z^2 - |x|^{2s-2} x^2 |  <=  c(s) * |z-x|^{2s}          (s in [0,1/2])
// | |z|^{2s-2} z^2 - |x|^{2s-2} x^2 |  <=  c(s) * |z-x| (|x|^{2s-1}+|z|^{2s-1})  (s > 1/2)
InequalityReport lemma_modulus_square_constant(double sigma, std::uint64_t n_samples,
                                               std::uint64_t seed);

// | |z1|^{2s} z1 - |z2|^{2s} z2 |  <=  C(s) * |z1-z2| (|z1|^{2s}+|z2|^{2s})
InequalityReport elementary_ineq_constant(double sigma, std::uint64_t n_samples,
                                          std::uint64_t seed);

// Closed forms of one Fourier mode of the damped linear flow with
// additive noise: mean propagator e^{(i mu - lambda) t} and increment
// variance q^2 (1 - e^{-2 lambda t}) / (2 lambda) (q^2 t at lambda = 0).
struct OuClosedForm {
    std::complex<double> mean_factor;
    double variance;
};
OuClosedForm ou_mode_closed_forms(double q, double lambda, double mu, double t);

// u(t) = e^{-lambda t} S(t) u0 per mode: e^{(i|k|^2 - lambda) t} u_k.
// Ground truth for the sigma = 0, Q = 0 flow. Input must be spectral.
Field linear_exact_solution(const Field& u0, double lambda, double t);

}  // namespace snls
