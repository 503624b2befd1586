#pragma once

#include <span>
#include <string>
#include <vector>

#include "snls/field.hpp"

namespace snls {

// Coefficients of the damped stochastic NLS
//   du = -i*Lap(u) dt - i*alpha*|u|^{2s}u dt - lambda*u dt + Q dW.
// sigma == 0 is accepted as the fully linear equation (nonlinearity off).
struct ModelParams {
    double lambda = 1.0;   // damping, > 0 (0 allowed for conservative runs)
    int alpha = -1;        // +1 focusing, -1 defocusing
    double sigma = 1.0;    // nonlinearity exponent, >= 0
    double kappa = 1.0;    // mass-term weight of the focusing functional
    int dim = 1;
};

// Parameter-regime checks. Violations of the hard well-posedness window
// always throw; the stricter unique-ergodicity / mixing windows produce
// warnings unless `strict` is set.
std::vector<std::string> validate_model(const ModelParams& p, bool strict);

// 1 + 2*sigma/(2 - sigma*d); requires sigma*d < 2.
double sigma_d(double sigma, int dim);

// F_alpha(u) = -i*alpha*|u|^{2 sigma} u, pointwise; zero for sigma == 0.
Field nonlinearity(const Field& u, const ModelParams& p);

struct FunctionalReport {
    double phi = 0.0;      // Phi_alpha(u)
    double grad_sq = 0.0;  // ||grad u||_H^2
    double lp_pot = 0.0;   // ||u||_{L^{2+2s}}^{2+2s}
    double mass = 0.0;     // ||u||_H^2
    double time = 0.0;
};

// Lyapunov functional:
//   alpha = -1: grad_sq + lp_pot/(1+s) + mass
//   alpha = +1: grad_sq - lp_pot/(1+s) + kappa*mass^{sigma_d}
FunctionalReport phi_alpha(const Field& u, const ModelParams& p, double time = 0.0);

// Deterministic-flow invariant grad_sq - alpha*lp_pot/(1+s).
double hamiltonian(const FunctionalReport& r, const ModelParams& p);

// Smallest kappa (times safety factor 2) such that
//   100*||u||_{L^{2+2s}}^{2+2s} <= 1/2*||grad u||^2 + 1/2*kappa*||u||_H^{2 sigma_d}
// holds on every ensemble member. Needs sigma*d < 2 and at least one
// nonzero member.
double choose_kappa(double sigma, int dim, std::span<const Field> trial_ensemble);

// d_1(u, v) = ||u - v||_H clipped at 1.
double d1_distance(const Field& u, const Field& v);

}  // namespace snls
