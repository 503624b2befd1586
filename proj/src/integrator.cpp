#include "snls/integrator.hpp"

#include <cmath>

#include "snls/norms.hpp"

namespace snls {

namespace {

int padded_axis(int n, double factor) {
    if (factor <= 1.0) return n;
    int m = static_cast<int>(std::ceil(n * factor));
    if (m % 2 != 0) ++m;
    return std::max(m, n);
}

// In-place phase rotation e^{-i alpha |u|^{2s} h} u on physical values.
// Returns the grid max modulus for the blow-up guard.
double rotate_pointwise(std::vector<std::complex<double>>& v, int alpha, double sigma, double h) {
    double maxmod = 0.0;
    const double coef = -static_cast<double>(alpha) * h;
    if (sigma == 1.0) {
        for (auto& z : v) {
            const double m2 = std::norm(z);
            maxmod = std::max(maxmod, m2);
            const double phase = coef * m2;
            z *= std::complex<double>(std::cos(phase), std::sin(phase));
        }
        return std::sqrt(maxmod);
    }
    for (auto& z : v) {
        const double m2 = std::norm(z);
        maxmod = std::max(maxmod, m2);
        const double phase = coef * std::pow(m2, sigma);
        z *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return std::sqrt(maxmod);
}

}  // namespace

void validate_step_config(const StepConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("step config: dt must be > 0");
    if (cfg.padding_factor < 1.0 || cfg.padding_factor > 4.0) {
        throw std::invalid_argument("step config: padding_factor must be in [1, 4]");
    }
    if (cfg.diagnostics_stride < 1) {
        throw std::invalid_argument("step config: diagnostics_stride must be >= 1");
    }
    if (!(cfg.blowup_ceiling > 0.0)) {
        throw std::invalid_argument("step config: blowup_ceiling must be > 0");
    }
    if (cfg.sup_refine < 1 || cfg.sup_refine > 4) {
        throw std::invalid_argument("step config: sup_refine must be in [1, 4]");
    }
}

Field nonlinear_halfstep(const Field& u, const ModelParams& p, double h) {
    if (u.rep != Rep::physical) {
        throw std::invalid_argument("nonlinear_halfstep: input must be physical");
    }
    Field out = u;
    if (p.sigma == 0.0) return out;  // linear equation: subflow is the identity
    rotate_pointwise(out.values, p.alpha, p.sigma, h);
    return out;
}

Field linear_noise_step(const Field& u, const CovarianceSpec& q, double lambda, double dt,
                        NoiseStream& stream) {
    return gamma_exact_step(u, q, lambda, dt, stream);
}

StrangIntegrator::StrangIntegrator(GridPtr grid, const ModelParams& p, const CovarianceSpec& q,
                                   const StepConfig& cfg)
    : grid_(std::move(grid)), params_(p), q_(q), cfg_(cfg) {
    validate_step_config(cfg);
    validate_model(p, false);
    const int fine_n = padded_axis(grid_->n_per_dim(), cfg.padding_factor);
    fine_grid_ = (fine_n == grid_->n_per_dim())
                     ? grid_
                     : make_grid(grid_->dim(), fine_n, grid_->box_length());
    propagator_.resize(grid_->size());
    for (std::size_t i = 0; i < propagator_.size(); ++i) {
        propagator_[i] =
            std::exp(std::complex<double>(-p.lambda * cfg.dt, grid_->ksq()[i] * cfg.dt));
    }
    symbol_ = detail::symbol_table(q_, *grid_);
    ou_scale_ = ou_increment_variance_scale(p.lambda, cfg.dt);
    xi_ = make_field(grid_, Rep::spectral);
}

void StrangIntegrator::nonlinear_half(Field& u, double t_next) {
    if (params_.sigma == 0.0) return;
    const double h = 0.5 * cfg_.dt;
    double maxmod;
    if (fine_grid_ == grid_) {
        Field phys = to_physical(u);
        maxmod = rotate_pointwise(phys.values, params_.alpha, params_.sigma, h);
        u = to_spectral(phys);
    } else {
        Field phys = to_physical(pad_spectrum(u, fine_grid_));
        maxmod = rotate_pointwise(phys.values, params_.alpha, params_.sigma, h);
        u = downsample_spectrum(to_spectral(phys), grid_);
    }
    if (!(maxmod <= cfg_.blowup_ceiling)) {  // also catches NaN
        throw BlowupError(t_next);
    }
}

void StrangIntegrator::apply_linear(Field& u, const Field& xi) const {
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        u.values[i] = u.values[i] * propagator_[i] + xi.values[i];
    }
}

void StrangIntegrator::step(Field& u, Field* gamma, NoiseStream& stream, double t_next) {
    nonlinear_half(u, t_next);
    detail::fill_increment(symbol_, q_.kind, *grid_, ou_scale_, stream, xi_);
    stream.advance();
    apply_linear(u, xi_);
    if (gamma) apply_linear(*gamma, xi_);
    nonlinear_half(u, t_next);
}

void StrangIntegrator::step_pair(Field& u1, Field& u2, Field* gamma, NoiseStream& stream,
                                 double t_next) {
    nonlinear_half(u1, t_next);
    nonlinear_half(u2, t_next);
    detail::fill_increment(symbol_, q_.kind, *grid_, ou_scale_, stream, xi_);
    stream.advance();
    apply_linear(u1, xi_);
    apply_linear(u2, xi_);
    if (gamma) apply_linear(*gamma, xi_);
    nonlinear_half(u1, t_next);
    nonlinear_half(u2, t_next);
}

Field strang_step(const Field& u, const ModelParams& p, const CovarianceSpec& q, double dt,
                  NoiseStream& stream, const StepConfig& cfg) {
    StepConfig local = cfg;
    local.dt = dt;
    StrangIntegrator engine(u.grid, p, q, local);
    Field spec = (u.rep == Rep::spectral) ? u : to_spectral(u);
    engine.step(spec, nullptr, stream, dt);
    return (u.rep == Rep::spectral) ? spec : to_physical(spec);
}

TrajectoryRecord integrate(const Field& u0, const ModelParams& p, const CovarianceSpec& q,
                           double horizon, const StepConfig& cfg, NoiseStream stream,
                           bool track_gamma) {
    if (horizon < 0.0) throw std::invalid_argument("integrate: horizon must be >= 0");
    StrangIntegrator engine(u0.grid, p, q, cfg);

    TrajectoryRecord rec;
    rec.requested_horizon = horizon;
    rec.tracked_gamma = track_gamma;
    const long long n_steps = static_cast<long long>(std::floor(horizon / cfg.dt + 1e-9));
    rec.integrated_horizon = static_cast<double>(n_steps) * cfg.dt;
    rec.horizon_remainder = horizon - rec.integrated_horizon;

    Field u = (u0.rep == Rep::spectral) ? u0 : to_spectral(u0);
    Field gamma = make_field(u0.grid, Rep::spectral);

    const auto sample = [&](double t) {
        Field phys = to_physical(u);
        rec.times.push_back(t);
        rec.functionals.push_back(phi_alpha(phys, p, t));
        rec.sup_norms.push_back(sup_norm(phys, cfg.sup_refine));
        if (track_gamma) {
            rec.gamma_h.push_back(norm_sobolev(gamma, 0.0));
            rec.gamma_lap.push_back(laplacian_norm(gamma));
        }
    };

    sample(0.0);
    for (long long s = 1; s <= n_steps; ++s) {
        const double t = static_cast<double>(s) * cfg.dt;
        engine.step(u, track_gamma ? &gamma : nullptr, stream, t);
        if (s % cfg.diagnostics_stride == 0 || s == n_steps) sample(t);
    }
    rec.final_state = to_physical(u);
    return rec;
}

}  // namespace snls
