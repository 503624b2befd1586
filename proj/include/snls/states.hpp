#pragma once

#include "snls/field.hpp"
#include "snls/rng.hpp"

namespace snls {

Field constant_field(GridPtr grid, std::complex<double> c);

// Periodized gaussian profile amplitude * exp(-sum_a (x_a - c_a)^2 / (2 w^2)),
// centered at center_frac * L on every axis.
Field gaussian_bump(GridPtr grid, double amplitude, double width, double center_frac = 0.5);

// amplitude * e^{i k.x} for an integer frequency tuple.
Field plane_wave(GridPtr grid, double amplitude, const std::vector<int>& freq);

// Random field with spectrum amplitude * (1+|k|^2)^{-spectral_decay/2} g_k,
// g_k standard complex normal; normalized so E||u||_H^2 = amplitude^2.
Field random_smooth(GridPtr grid, double amplitude, double spectral_decay,
                    const NoiseStream& stream);

// Rescales a pair until phi_alpha(u1)+phi_alpha(u2) <= budget (halving
// amplitudes; the functional is continuous and vanishes at zero).
void shrink_pair_to_phi_budget(Field& u1, Field& u2, const struct ModelParams& p, double budget);

}  // namespace snls
