#include "snls/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace snls {

namespace {

struct PlanSet {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW planning is not thread safe; execution on distinct buffers is.
// Plans are created once per (dim, n) with FFTW_ESTIMATE so the chosen
// algorithm (and therefore round-off) is reproducible run to run.
const PlanSet& plans_for(int dim, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, PlanSet> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({dim, n});
    if (it != cache.end()) return it->second;

    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    std::vector<std::complex<double>> in(total), out(total);
    std::vector<int> shape(dim, n);
    PlanSet ps;
    ps.forward = fftw_plan_dft(dim, shape.data(),
                               reinterpret_cast<fftw_complex*>(in.data()),
                               reinterpret_cast<fftw_complex*>(out.data()),
                               FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    ps.backward = fftw_plan_dft(dim, shape.data(),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!ps.forward || !ps.backward) {
        throw std::runtime_error("fftw: plan creation failed");
    }
    return cache.emplace(std::make_pair(dim, n), ps).first->second;
}

void execute(const Field& f, Field& out, int sign) {
    const auto& ps = plans_for(f.grid->dim(), f.grid->n_per_dim());
    out.grid = f.grid;
    out.values.resize(f.values.size());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(
        const_cast<std::complex<double>*>(f.values.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.values.data());
    fftw_execute_dft(sign == FFTW_FORWARD ? ps.forward : ps.backward, in_ptr, out_ptr);
    const double scale = 1.0 / std::sqrt(static_cast<double>(f.grid->size()));
    for (auto& v : out.values) v *= scale;
}

}  // namespace

Field make_field(GridPtr grid, Rep rep) {
    Field f;
    f.grid = std::move(grid);
    f.rep = rep;
    f.values.assign(f.grid->size(), {0.0, 0.0});
    return f;
}

Field to_spectral(const Field& f) {
    if (f.rep != Rep::physical) {
        throw std::invalid_argument("to_spectral: input must be physical");
    }
    Field out;
    execute(f, out, FFTW_FORWARD);
    out.rep = Rep::spectral;
    return out;
}

Field to_physical(const Field& f) {
    if (f.rep != Rep::spectral) {
        throw std::invalid_argument("to_physical: input must be spectral");
    }
    Field out;
    execute(f, out, FFTW_BACKWARD);
    out.rep = Rep::physical;
    return out;
}

void to_spectral_inplace(Field& f) { f = to_spectral(f); }

void to_physical_inplace(Field& f) { f = to_physical(f); }

bool finite(const Field& f) {
    for (const auto& v : f.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

namespace {

// Scatter/gather between Fourier boxes of different sizes, same box
// length. Frequencies are matched; the coarse Nyquist row is carried
// as frequency -n/2 (see Grid).
std::size_t map_index(std::size_t lin, const Grid& from, const Grid& to) {
    const auto nf = static_cast<std::size_t>(from.n_per_dim());
    const auto nt = static_cast<std::size_t>(to.n_per_dim());
    std::size_t rest = lin;
    std::size_t out = 0;
    std::size_t stride = 1;
    for (int a = 0; a < from.dim(); ++a) {
        const auto idx = static_cast<int>(rest % nf);
        rest /= nf;
        const int freq = (idx <= from.n_per_dim() / 2 - 1) ? idx : idx - from.n_per_dim();
        const std::size_t tidx = (freq >= 0)
                                     ? static_cast<std::size_t>(freq)
                                     : nt + static_cast<std::size_t>(freq);
        out += tidx * stride;
        stride *= nt;
    }
    return out;
}

}  // namespace

Field pad_spectrum(const Field& spectral, GridPtr fine) {
    if (spectral.rep != Rep::spectral) {
        throw std::invalid_argument("pad_spectrum: input must be spectral");
    }
    if (fine->n_per_dim() < spectral.grid->n_per_dim() ||
        fine->dim() != spectral.grid->dim()) {
        throw std::invalid_argument("pad_spectrum: target grid must refine the source");
    }
    Field pad = make_field(std::move(fine), Rep::spectral);
    const double scale = std::sqrt(static_cast<double>(pad.grid->size()) /
                                   static_cast<double>(spectral.grid->size()));
    for (std::size_t lin = 0; lin < spectral.values.size(); ++lin) {
        pad.values[map_index(lin, *spectral.grid, *pad.grid)] = spectral.values[lin] * scale;
    }
    return pad;
}

Field upsample(const Field& f, int factor) {
    if (factor < 1 || factor > 8) {
        throw std::invalid_argument("upsample: factor must be in [1, 8]");
    }
    if (factor == 1) {
        return f.rep == Rep::physical ? f : to_physical(f);
    }
    const Field spec = (f.rep == Rep::spectral) ? f : to_spectral(f);
    GridPtr fine = make_grid(f.grid->dim(), f.grid->n_per_dim() * factor, f.grid->box_length());
    return to_physical(pad_spectrum(spec, std::move(fine)));
}

Field downsample_spectrum(const Field& fine_spectral, GridPtr coarse) {
    if (fine_spectral.rep != Rep::spectral) {
        throw std::invalid_argument("downsample_spectrum: input must be spectral");
    }
    if (fine_spectral.grid->n_per_dim() < coarse->n_per_dim()) {
        throw std::invalid_argument("downsample_spectrum: target grid is finer than input");
    }
    Field out = make_field(coarse, Rep::spectral);
    const double scale = std::sqrt(static_cast<double>(coarse->size()) /
                                   static_cast<double>(fine_spectral.grid->size()));
    for (std::size_t lin = 0; lin < out.values.size(); ++lin) {
        out.values[lin] =
            fine_spectral.values[map_index(lin, *coarse, *fine_spectral.grid)] * scale;
    }
    return out;
}

}  // namespace snls
