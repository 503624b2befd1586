#include "snls/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace snls {

double CovarianceSpec::symbol(double ksq) const {
    if (mode_cutoff && ksq > (*mode_cutoff) * (*mode_cutoff) * (1.0 + 1e-12)) {
        return 0.0;
    }
    return amplitude * std::pow(1.0 + ksq, -0.5 * decay);
}

double hs_norm(const CovarianceSpec& q, double s, const Grid& grid) {
    double acc = 0.0;
    for (const double ksq : grid.ksq()) {
        const double qk = q.symbol(ksq);
        acc += std::pow(1.0 + ksq, s) * qk * qk;
    }
    return std::sqrt(acc);
}

namespace detail {

std::vector<double> symbol_table(const CovarianceSpec& q, const Grid& grid) {
    std::vector<double> t(grid.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = q.symbol(grid.ksq()[i]);
    return t;
}

// Fills `out` (spectral) with independent per-mode draws of standard
// deviation sqrt(var_scale)*symbol[k] in the H-normalized convention,
// i.e. E||out||_H^2 = var_scale * sum_k symbol[k]^2. For kind == real
// the modes are Hermitian-paired so the physical increment is real.
// Draws are keyed purely by (stream, mode index).
void fill_increment(std::span<const double> symbol, NoiseKind kind, const Grid& grid,
                    double var_scale, const NoiseStream& stream, Field& out) {
    const auto& conj_idx = grid.conjugate_index();
    const double to_spec = 1.0 / std::sqrt(grid.cell_volume());
    const std::size_t n = grid.size();
    out.values.assign(n, {0.0, 0.0});
    if (var_scale == 0.0) return;

    for (std::size_t i = 0; i < n; ++i) {
        const double qk = symbol[i];
        if (qk == 0.0) continue;
        const std::size_t partner = conj_idx[i];
        if (kind == NoiseKind::real && partner < i) continue;  // filled by its partner

        const GaussianQuad g = stream.quad(i >> 1);
        const double a = (i & 1) ? g.z2 : g.z0;
        const double b = (i & 1) ? g.z3 : g.z1;

        if (kind == NoiseKind::circular) {
            const double sd = qk * std::sqrt(0.5 * var_scale) * to_spec;
            out.values[i] = {sd * a, sd * b};
        } else if (partner == i) {
            // self-conjugate mode: real amplitude
            out.values[i] = {qk * std::sqrt(var_scale) * to_spec * a, 0.0};
        } else {
            const double sd = qk * std::sqrt(0.5 * var_scale) * to_spec;
            out.values[i] = {sd * a, sd * b};
            out.values[partner] = {sd * a, -sd * b};
        }
    }
}

}  // namespace detail

Field sample_increment(const CovarianceSpec& q, GridPtr grid, double dt, NoiseStream& stream) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("sample_increment: dt must be > 0");
    }
    Field out = make_field(grid, Rep::spectral);
    detail::fill_increment(detail::symbol_table(q, *grid), q.kind, *grid, dt, stream, out);
    stream.advance();
    return out;
}

double ou_increment_variance_scale(double lambda, double dt) {
    if (lambda > 0.0) {
        return (1.0 - std::exp(-2.0 * lambda * dt)) / (2.0 * lambda);
    }
    return dt;  // limit form
}

Field sample_ou_increment(const CovarianceSpec& q, GridPtr grid, double lambda, double dt,
                          NoiseStream& stream) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("sample_ou_increment: dt must be > 0");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("sample_ou_increment: lambda must be >= 0");
    }
    Field out = make_field(grid, Rep::spectral);
    detail::fill_increment(detail::symbol_table(q, *grid), q.kind, *grid,
                           ou_increment_variance_scale(lambda, dt), stream, out);
    stream.advance();
    return out;
}

Field gamma_exact_step(const Field& gamma, const CovarianceSpec& q, double lambda, double dt,
                       NoiseStream& stream) {
    if (gamma.rep != Rep::spectral) {
        throw std::invalid_argument("gamma_exact_step: state must be spectral");
    }
    Field out = gamma;
    const auto& ksq = gamma.grid->ksq();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] *= std::exp(std::complex<double>(-lambda * dt, ksq[i] * dt));
    }
    Field xi = sample_ou_increment(q, gamma.grid, lambda, dt, stream);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += xi.values[i];
    return out;
}

std::complex<double> mode_coefficient(const Field& spectral, std::size_t linear_index) {
    if (spectral.rep != Rep::spectral) {
        throw std::invalid_argument("mode_coefficient: field must be spectral");
    }
    return spectral.values.at(linear_index) * std::sqrt(spectral.grid->cell_volume());
}

}  // namespace snls
