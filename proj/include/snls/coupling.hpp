#pragma once

#include <limits>
#include <string>

#include "snls/integrator.hpp"

namespace snls {

// Parameters of the block coupling construction. `slope_constant` is
// the affine growth rate allowed for the energy process inside a
// coupling window (fitted or user supplied); `c1n` rescales the
// integral part of the energy process.
struct CouplingConfig {
    double theta = 1.0;
    double beta = 1.0;
    double block_length = 1.0;
    int moment_index = 1;  // n
    double c1n = 1.0;
    double slope_constant = 1.0;
};

void validate_coupling_config(const CouplingConfig& cfg);

inline constexpr long long kEllInfinity = -1;

// Two trajectories driven by one noise path, sampled on one time grid.
// gamma diagnostics are shared (one noise path means one stochastic
// convolution) and live in traj1.
struct CouplingRecord {
    std::vector<double> times;
    std::vector<double> w_norm;    // ||u1 - u2||_H
    std::vector<double> d1;        // w_norm clipped at 1
    std::vector<double> phi_pair;  // Phi(u1) + Phi(u2)
    std::vector<double> en1, en2;  // energy process per trajectory
    std::vector<double> cert_margin;  // per-interval certificate slack, size samples-1
    std::vector<long long> ell;       // ell(k), k = 0..K; kEllInfinity encodes "never"
    TrajectoryRecord traj1, traj2;
};

// Synchronous coupling driver. Block boundaries must sit on the
// diagnostics grid: block_length/(dt*stride) integral within 1e-9.
// When cert_C is finite the certificate margins are filled with it.
CouplingRecord couple_integrate(const Field& u0_1, const Field& u0_2, const ModelParams& p,
                                const CovarianceSpec& q, double horizon, const StepConfig& step,
                                const CouplingConfig& cfg, NoiseStream stream,
                                double cert_C = std::numeric_limits<double>::quiet_NaN());

// E_n(t) = Phi(u(t))^n + lambda * Int_0^t ( c1n Phi^n + n ||Gamma||_H^{2n}
//          + n ||Lap Gamma||_H^{2n} ) ds,  trapezoid rule on the sample grid.
std::vector<double> en_series(const TrajectoryRecord& traj, const CouplingConfig& cfg,
                              double lambda);

// Coupling event variable: least block index l <= k such that the pair
// is inside the beta-ball at lT and both energy processes stay under
// theta + beta^n + slope*(t - lT) on [lT, kT]. kEllInfinity if no l works.
long long ell_theta_beta(const CouplingRecord& rec, const CouplingConfig& cfg, long long k);

// Discrete check of the pathwise contraction inequality in per-interval
// log-slope form:
//   margin_j = [-2 lambda + C_hat * avg_j(||u1||_inf^{2s} + ||u2||_inf^{2s})]
//              - d/dt log ||w||^2 |_j.
// Nonnegative margins mean the certificate holds on that interval.
// Intervals where ||w|| is numerically zero (below 1e-13 of the field
// scale) are reported as zero margin: the pair is already synchronized.
std::vector<double> pathwise_certificate(const CouplingRecord& rec, const ModelParams& p,
                                         double C_hat);

// Fraction of certificate intervals with margin < -tol.
double certificate_violation_fraction(std::span<const double> margins, double tol = 0.0);

// Structural consistency of the ell outcomes of one record:
//   ell(k+1) = l <= k  implies  ell(k) = l,
//   ell(k) = k         implies  phi_pair(kT) <= beta.
struct EllCheck {
    bool ok = true;
    std::string violation;
};
EllCheck check_ell_properties(const CouplingRecord& rec, const CouplingConfig& cfg);

// Empirical coupling probability table over an ensemble of records.
// Rows with trials == 0 are "no data", never probability zero.
struct ProbRow {
    std::string kind;  // decouple_gap | decouple_from_zero | decouple_overall |
                       // recouple | proximity_l
    double key = 0.0;
    std::size_t events = 0;
    std::size_t trials = 0;
};
std::vector<ProbRow> coupling_statistics(std::span<const CouplingRecord> records,
                                         const CouplingConfig& cfg, double recouple_radius,
                                         double proximity_c0, double proximity_q);

}  // namespace snls
