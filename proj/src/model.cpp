#include "snls/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snls/norms.hpp"

namespace snls {

std::vector<std::string> validate_model(const ModelParams& p, bool strict) {
    std::vector<std::string> warnings;
    if (p.alpha != 1 && p.alpha != -1) {
        throw std::invalid_argument("model: alpha must be +1 or -1");
    }
    if (p.dim < 1 || p.dim > 3) {
        throw std::invalid_argument("model: dim must be 1, 2 or 3");
    }
    if (!(p.sigma >= 0.0)) {
        throw std::invalid_argument("model: sigma must be >= 0");
    }
    if (!(p.lambda >= 0.0)) {
        throw std::invalid_argument("model: lambda must be >= 0");
    }
    if (!(p.kappa > 0.0)) {
        throw std::invalid_argument("model: kappa must be > 0");
    }
    if (p.sigma > 0.0) {
        if (p.alpha == 1 && !(p.sigma < 2.0 / p.dim)) {
            throw std::invalid_argument(
                "model: focusing runs need sigma < 2/d (subcritical window)");
        }
        if (p.alpha == -1 && p.dim == 3 && !(p.sigma < 2.0)) {
            throw std::invalid_argument("model: defocusing d=3 needs sigma < 2");
        }
        if (p.dim == 3 && !(p.sigma < 1.5)) {
            warnings.push_back("sigma >= 3/2 in d=3: outside the unique-ergodicity window");
        }
        if (p.dim == 3 && !(p.sigma > 1.0 / 6.0 && p.sigma < 1.5)) {
            warnings.push_back("sigma outside (1/6, 3/2) in d=3: outside the mixing window");
        }
    }
    if (strict && !warnings.empty()) {
        throw std::invalid_argument("model (strict): " + warnings.front());
    }
    return warnings;
}

double sigma_d(double sigma, int dim) {
    if (!(sigma * dim < 2.0)) {
        throw std::invalid_argument("sigma_d: requires sigma*d < 2");
    }
    return 1.0 + 2.0 * sigma / (2.0 - sigma * dim);
}

Field nonlinearity(const Field& u, const ModelParams& p) {
    if (u.rep != Rep::physical) {
        throw std::invalid_argument("nonlinearity: input must be physical");
    }
    Field out = u;
    if (p.sigma == 0.0) {
        for (auto& v : out.values) v = {0.0, 0.0};
        return out;
    }
    const std::complex<double> factor(0.0, -static_cast<double>(p.alpha));
    for (auto& v : out.values) {
        v *= factor * std::pow(std::norm(v), p.sigma);
    }
    return out;
}

FunctionalReport phi_alpha(const Field& u, const ModelParams& p, double time) {
    if (p.alpha != 1 && p.alpha != -1) {
        throw std::invalid_argument("phi_alpha: alpha must be +1 or -1");
    }
    FunctionalReport r;
    r.time = time;
    const double g = gradient_norm(u);
    r.grad_sq = g * g;
    const double m = norm_sobolev(u, 0.0);
    r.mass = m * m;
    const double pot = norm_lp(u.rep == Rep::physical ? u : to_physical(u), 2.0 + 2.0 * p.sigma);
    r.lp_pot = std::pow(pot, 2.0 + 2.0 * p.sigma);
    if (p.alpha == -1) {
        r.phi = r.grad_sq + r.lp_pot / (1.0 + p.sigma) + r.mass;
    } else {
        const double sd = sigma_d(p.sigma, p.dim);
        r.phi = r.grad_sq - r.lp_pot / (1.0 + p.sigma) + p.kappa * std::pow(r.mass, sd);
    }
    return r;
}

double hamiltonian(const FunctionalReport& r, const ModelParams& p) {
    return r.grad_sq - p.alpha * r.lp_pot / (1.0 + p.sigma);
}

double choose_kappa(double sigma, int dim, std::span<const Field> trial_ensemble) {
    const double sd = sigma_d(sigma, dim);  // throws unless sigma*d < 2
    if (trial_ensemble.empty()) {
        throw std::invalid_argument("choose_kappa: empty trial ensemble");
    }
    double kappa_min = 0.0;
    bool any_nonzero = false;
    for (const auto& u : trial_ensemble) {
        const double mass = norm_sobolev(u, 0.0);
        if (mass == 0.0) continue;
        any_nonzero = true;
        const double g = gradient_norm(u);
        const double pot =
            std::pow(norm_lp(u.rep == Rep::physical ? u : to_physical(u), 2.0 + 2.0 * sigma),
                     2.0 + 2.0 * sigma);
        const double need = 2.0 * (100.0 * pot - 0.5 * g * g) / std::pow(mass * mass, sd);
        kappa_min = std::max(kappa_min, need);
    }
    if (!any_nonzero) {
        throw std::invalid_argument("choose_kappa: all ensemble members are zero");
    }
    return std::max(2.0 * kappa_min, 1e-9);
}

double d1_distance(const Field& u, const Field& v) {
    if (u.grid != v.grid) {
        throw std::invalid_argument("d1_distance: fields live on different grids");
    }
    return std::min(l2_distance(u, v), 1.0);
}

}  // namespace snls
