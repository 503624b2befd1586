#include "snls/states.hpp"

#include <cmath>
#include <stdexcept>

#include "snls/model.hpp"
#include "snls/noise.hpp"

namespace snls {

Field constant_field(GridPtr grid, std::complex<double> c) {
    Field f = make_field(std::move(grid));
    for (auto& v : f.values) v = c;
    return f;
}

Field gaussian_bump(GridPtr grid, double amplitude, double width, double center_frac) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be > 0");
    Field f = make_field(grid);
    const double L = grid->box_length();
    const double c = center_frac * L;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double s = 0.0;
        for (int a = 0; a < grid->dim(); ++a) {
            double dx = std::abs(grid->node_coordinate(i, a) - c);
            dx = std::min(dx, L - dx);  // nearest periodic image
            s += dx * dx;
        }
        f.values[i] = amplitude * std::exp(-s / (2.0 * width * width));
    }
    return f;
}

Field plane_wave(GridPtr grid, double amplitude, const std::vector<int>& freq) {
    if (static_cast<int>(freq.size()) != grid->dim()) {
        throw std::invalid_argument("plane_wave: frequency tuple length != dim");
    }
    Field f = make_field(grid);
    const double dk = 2.0 * M_PI / grid->box_length();
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double phase = 0.0;
        for (int a = 0; a < grid->dim(); ++a) {
            phase += dk * freq[a] * grid->node_coordinate(i, a);
        }
        f.values[i] = amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return f;
}

Field random_smooth(GridPtr grid, double amplitude, double spectral_decay,
                    const NoiseStream& stream) {
    Field f = make_field(grid, Rep::spectral);
    const auto& ksq = grid->ksq();
    double weight_sum = 0.0;
    for (double k2 : ksq) weight_sum += std::pow(1.0 + k2, -spectral_decay);
    const double norm = amplitude / std::sqrt(weight_sum * grid->cell_volume());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const GaussianQuad g = stream.quad(i >> 1);
        const double a = (i & 1) ? g.z2 : g.z0;
        const double b = (i & 1) ? g.z3 : g.z1;
        const double sd = norm * std::pow(1.0 + ksq[i], -0.5 * spectral_decay) * std::sqrt(0.5);
        f.values[i] = {sd * a, sd * b};
    }
    return f;
}

void shrink_pair_to_phi_budget(Field& u1, Field& u2, const ModelParams& p, double budget) {
    if (!(budget > 0.0)) throw std::invalid_argument("phi budget must be > 0");
    for (int iter = 0; iter < 200; ++iter) {
        const double sum = phi_alpha(u1, p).phi + phi_alpha(u2, p).phi;
        if (sum <= budget) return;
        for (auto& v : u1.values) v *= 0.8;
        for (auto& v : u2.values) v *= 0.8;
    }
    throw std::runtime_error("shrink_pair_to_phi_budget: did not converge");
}

}  // namespace snls
