#pragma once

#include <stdexcept>

#include "snls/model.hpp"
#include "snls/noise.hpp"

namespace snls {

struct StepConfig {
    double dt = 1e-3;
    double padding_factor = 1.5;  // in [1, 4]; nonlinear term evaluated on the padded grid
    int diagnostics_stride = 10;
    double blowup_ceiling = 1e6;
    int sup_refine = 1;  // L^inf refinement for diagnostics, in [1, 4]
};

void validate_step_config(const StepConfig& cfg);

// Thrown when the sup norm passes blowup_ceiling or turns non-finite.
struct BlowupError : std::runtime_error {
    double time;
    explicit BlowupError(double t)
        : std::runtime_error("solution blow-up detected at t = " + std::to_string(t)),
          time(t) {}
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<FunctionalReport> functionals;
    std::vector<double> sup_norms;
    std::vector<double> gamma_h;    // ||Gamma||_H, filled when gamma is tracked
    std::vector<double> gamma_lap;  // ||Lap Gamma||_H
    Field final_state;              // physical representation
    double requested_horizon = 0.0;
    double integrated_horizon = 0.0;
    double horizon_remainder = 0.0;  // requested - integrated (horizon not a dt multiple)
    bool tracked_gamma = false;

    std::size_t samples() const { return times.size(); }
};

// Exact pointwise subflow of du/dh = -i*alpha*|u|^{2s}u: a phase
// rotation u <- e^{-i alpha |u|^{2s} h} u. Moduli are invariant.
Field nonlinear_halfstep(const Field& u, const ModelParams& p, double h);

// Exact flow of the damped linear group with exact OU noise injection:
// per mode u_k <- e^{(i|k|^2 - lambda) dt} u_k + xi_k.
Field linear_noise_step(const Field& u, const CovarianceSpec& q, double lambda, double dt,
                        NoiseStream& stream);

// Strang composition N(dt/2) o (L+noise)(dt) o N(dt/2). One-shot
// convenience; ensemble work should use StrangIntegrator.
Field strang_step(const Field& u, const ModelParams& p, const CovarianceSpec& q, double dt,
                  NoiseStream& stream, const StepConfig& cfg = {});

// Reusable stepping engine: precomputes propagator/symbol tables and the
// padded grid. One instance per trajectory task; instances are
// independent and safe to use from different threads.
class StrangIntegrator {
public:
    StrangIntegrator(GridPtr grid, const ModelParams& p, const CovarianceSpec& q,
                     const StepConfig& cfg);

    // Advances a spectral state by one step; gamma (spectral) is
    // co-advanced with the identical noise draw when non-null.
    void step(Field& u_spectral, Field* gamma_spectral, NoiseStream& stream, double t_next);

    // Same draw applied to a coupled pair plus shared gamma.
    void step_pair(Field& u1_spectral, Field& u2_spectral, Field* gamma_spectral,
                   NoiseStream& stream, double t_next);

    const StepConfig& config() const { return cfg_; }
    GridPtr grid() const { return grid_; }

private:
    void nonlinear_half(Field& u_spectral, double t_next);
    void apply_linear(Field& u_spectral, const Field& xi) const;

    GridPtr grid_;
    GridPtr fine_grid_;  // == grid_ when padding_factor == 1
    ModelParams params_;
    CovarianceSpec q_;
    StepConfig cfg_;
    std::vector<std::complex<double>> propagator_;  // e^{(i|k|^2-lambda) dt}
    std::vector<double> symbol_;
    double ou_scale_ = 0.0;
    Field xi_;  // scratch
};

TrajectoryRecord integrate(const Field& u0, const ModelParams& p, const CovarianceSpec& q,
                           double horizon, const StepConfig& cfg, NoiseStream stream,
                           bool track_gamma = false);

}  // namespace snls
