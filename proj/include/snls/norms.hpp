#pragma once

#include "snls/field.hpp"

namespace snls {

// All norms use the quadrature weights of the grid: physical sums carry
// cell_volume, spectral sums carry cell_volume * |.|^2 of the unitary
// coefficients, which makes the two Parseval-consistent.

// H^s norm: sqrt( V_cell * sum_k (1+|k|^2)^s |u_k|^2 ).
double norm_sobolev(const Field& f, double s);

// L^p quadrature norm; p = infinity is the grid max modulus, optionally
// refined by trigonometric upsampling (sup_refine in [1, 4]).
double norm_lp(const Field& f, double p, int sup_refine = 1);

// Bessel-potential norm: multiplier (1+|k|^2)^{s/2}, then L^p.
double norm_hsp(const Field& f, double s, double p, int sup_refine = 1);

// sqrt( V_cell * sum_k |k|^2 |u_k|^2 )
double gradient_norm(const Field& f);

// sqrt( V_cell * sum_k |k|^4 |u_k|^2 )
double laplacian_norm(const Field& f);

double sup_norm(const Field& f, int sup_refine = 1);

// ||u - v||_H on a shared grid.
double l2_distance(const Field& u, const Field& v);

// Re <u, v>_H with cell_volume weights.
double inner_h(const Field& u, const Field& v);

void require_finite(const Field& f, const char* where);

}  // namespace snls
