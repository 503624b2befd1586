#include "snls/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace snls {

Grid::Grid(int dim, int n_per_dim, double box_length)
    : dim_(dim), n_per_dim_(n_per_dim), box_length_(box_length) {
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("grid: dim must be 1, 2 or 3");
    }
    if (n_per_dim < 4 || n_per_dim % 2 != 0) {
        throw std::invalid_argument("grid: n_per_dim must be even and >= 4");
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw std::invalid_argument("grid: box_length must be positive and finite");
    }

    size_ = 1;
    for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_per_dim_);
    const double h = box_length_ / n_per_dim_;
    cell_volume_ = std::pow(h, dim_);

    const double dk = 2.0 * M_PI / box_length_;
    axis_k_.resize(n_per_dim_);
    for (int m = 0; m < n_per_dim_; ++m) {
        const int freq = (m <= n_per_dim_ / 2 - 1) ? m : m - n_per_dim_;
        axis_k_[m] = dk * freq;
    }
    kmax_ = dk * (n_per_dim_ / 2);

    ksq_.resize(size_);
    conj_.resize(size_);
    const auto n = static_cast<std::size_t>(n_per_dim_);
    for (std::size_t lin = 0; lin < size_; ++lin) {
        std::size_t rest = lin;
        double s = 0.0;
        std::size_t conj_lin = 0;
        std::size_t stride = 1;
        for (int a = 0; a < dim_; ++a) {
            const std::size_t idx = rest % n;
            rest /= n;
            const double k = axis_k_[idx];
            s += k * k;
            const std::size_t cidx = (n - idx) % n;
            conj_lin += cidx * stride;
            stride *= n;
        }
        ksq_[lin] = s;
        conj_[lin] = static_cast<std::uint32_t>(conj_lin);
    }
}

std::size_t Grid::mode_index(const std::vector<int>& fft_indices) const {
    if (static_cast<int>(fft_indices.size()) != dim_) {
        throw std::invalid_argument("grid: index tuple length != dim");
    }
    std::size_t lin = 0;
    std::size_t stride = 1;
    for (int a = 0; a < dim_; ++a) {
        int idx = fft_indices[a];
        if (idx < 0) idx += n_per_dim_;
        if (idx < 0 || idx >= n_per_dim_) {
            throw std::invalid_argument("grid: mode index out of range");
        }
        lin += static_cast<std::size_t>(idx) * stride;
        stride *= static_cast<std::size_t>(n_per_dim_);
    }
    return lin;
}

double Grid::node_coordinate(std::size_t linear, int axis) const {
    const auto n = static_cast<std::size_t>(n_per_dim_);
    std::size_t rest = linear;
    for (int a = 0; a < axis; ++a) rest /= n;
    const std::size_t idx = rest % n;
    return box_length_ / n_per_dim_ * static_cast<double>(idx);
}

GridPtr make_grid(int dim, int n_per_dim, double box_length) {
    return std::make_shared<const Grid>(dim, n_per_dim, box_length);
}

}  // namespace snls
