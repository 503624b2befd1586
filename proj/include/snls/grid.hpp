#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace snls {

// Uniform periodic grid on [0, L)^d with the matching Fourier mode set.
// Wavenumbers follow FFT storage order [0, 1, ..., n/2-1, -n/2, ..., -1]
// scaled by 2*pi/L. The single unpaired Nyquist row (index n/2) is kept
// and treated as frequency -n/2; all built-in operators touch it only
// through |k|^2, which is insensitive to that sign choice.
class Grid {
public:
    Grid(int dim, int n_per_dim, double box_length);

    int dim() const { return dim_; }
    int n_per_dim() const { return n_per_dim_; }
    double box_length() const { return box_length_; }
    std::size_t size() const { return size_; }
    double cell_volume() const { return cell_volume_; }

    // Per-axis wavenumber table, FFT order, length n_per_dim.
    const std::vector<double>& axis_wavenumbers() const { return axis_k_; }
    // |k|^2 per linear index, length size().
    const std::vector<double>& ksq() const { return ksq_; }
    double kmax() const { return kmax_; }

    // Linear index of the mode whose per-axis FFT indices are given.
    std::size_t mode_index(const std::vector<int>& fft_indices) const;
    // FFT index of the conjugate mode (-k), per linear index.
    const std::vector<std::uint32_t>& conjugate_index() const { return conj_; }

    // Physical coordinates of grid node `linear` along axis `axis`.
    double node_coordinate(std::size_t linear, int axis) const;

private:
    int dim_;
    int n_per_dim_;
    double box_length_;
    std::size_t size_;
    double cell_volume_;
    double kmax_;
    std::vector<double> axis_k_;
    std::vector<double> ksq_;
    std::vector<std::uint32_t> conj_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int n_per_dim, double box_length);

}  // namespace snls
