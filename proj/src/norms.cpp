#include "snls/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace snls {

void require_finite(const Field& f, const char* where) {
    if (!finite(f)) {
        throw std::invalid_argument(std::string(where) + ": field has NaN/Inf entries");
    }
}

double norm_sobolev(const Field& f, double s) {
    require_finite(f, "norm_sobolev");
    const Field spec = (f.rep == Rep::spectral) ? f : to_spectral(f);
    const auto& ksq = spec.grid->ksq();
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        acc += std::pow(1.0 + ksq[i], s) * std::norm(spec.values[i]);
    }
    return std::sqrt(spec.grid->cell_volume() * acc);
}

double sup_norm(const Field& f, int sup_refine) {
    require_finite(f, "sup_norm");
    const Field phys = (sup_refine == 1 && f.rep == Rep::physical) ? f : upsample(f, sup_refine);
    double m = 0.0;
    for (const auto& v : phys.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_lp(const Field& f, double p, int sup_refine) {
    if (p < 1.0) {
        throw std::invalid_argument("norm_lp: p must be >= 1");
    }
    if (std::isinf(p)) return sup_norm(f, sup_refine);
    require_finite(f, "norm_lp");
    const Field phys = (f.rep == Rep::physical) ? f : to_physical(f);
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& v : phys.values) acc += std::norm(v);
    } else {
        for (const auto& v : phys.values) acc += std::pow(std::abs(v), p);
    }
    return std::pow(phys.grid->cell_volume() * acc, 1.0 / p);
}

double norm_hsp(const Field& f, double s, double p, int sup_refine) {
    if (p < 1.0) {
        throw std::invalid_argument("norm_hsp: p must be >= 1");
    }
    require_finite(f, "norm_hsp");
    Field spec = (f.rep == Rep::spectral) ? f : to_spectral(f);
    const auto& ksq = spec.grid->ksq();
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        spec.values[i] *= std::pow(1.0 + ksq[i], 0.5 * s);
    }
    return norm_lp(spec, p, sup_refine);
}

double gradient_norm(const Field& f) {
    require_finite(f, "gradient_norm");
    const Field spec = (f.rep == Rep::spectral) ? f : to_spectral(f);
    const auto& ksq = spec.grid->ksq();
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        acc += ksq[i] * std::norm(spec.values[i]);
    }
    return std::sqrt(spec.grid->cell_volume() * acc);
}

double laplacian_norm(const Field& f) {
    require_finite(f, "laplacian_norm");
    const Field spec = (f.rep == Rep::spectral) ? f : to_spectral(f);
    const auto& ksq = spec.grid->ksq();
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        acc += ksq[i] * ksq[i] * std::norm(spec.values[i]);
    }
    return std::sqrt(spec.grid->cell_volume() * acc);
}

double l2_distance(const Field& u, const Field& v) {
    if (u.grid != v.grid) {
        throw std::invalid_argument("l2_distance: fields live on different grids");
    }
    if (u.rep != v.rep) {
        throw std::invalid_argument("l2_distance: representation mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        acc += std::norm(u.values[i] - v.values[i]);
    }
    return std::sqrt(u.grid->cell_volume() * acc);
}

double inner_h(const Field& u, const Field& v) {
    if (u.grid != v.grid || u.rep != v.rep) {
        throw std::invalid_argument("inner_h: incompatible fields");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        acc += (u.values[i] * std::conj(v.values[i])).real();
    }
    return u.grid->cell_volume() * acc;
}

}  // namespace snls
