#pragma once

#include <complex>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

enum class Rep { physical, spectral };

// Complex state on a Grid, tagged with its current representation.
// Transforms are unitary (1/sqrt(N) each way), so Parseval holds with
// no extra factors and round trips are the identity to rounding.
struct Field {
    GridPtr grid;
    Rep rep = Rep::physical;
    std::vector<std::complex<double>> values;
};

Field make_field(GridPtr grid, Rep rep = Rep::physical);

Field to_spectral(const Field& f);
Field to_physical(const Field& f);
// In-place variants reusing the argument's storage.
void to_spectral_inplace(Field& f);
void to_physical_inplace(Field& f);

bool finite(const Field& f);

// Trigonometric interpolation of a (physical or spectral) field onto a
// refined grid with `factor` times as many points per axis. factor == 1
// returns physical values on the original grid.
Field upsample(const Field& f, int factor);

// Embeds a spectrum into the Fourier box of a finer grid (same box
// length), rescaled so the unitary convention is preserved.
Field pad_spectrum(const Field& spectral, GridPtr fine);

// Band-limit projection of a field living on a finer grid back onto
// `coarse`; inverse of pad_spectrum for band-limited data.
Field downsample_spectrum(const Field& fine_spectral, GridPtr coarse);

}  // namespace snls
