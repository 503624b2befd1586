#include "snls/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "snls/rng.hpp"

namespace snls {

namespace {

// Log-uniform modulus over [1e-6, 1e6], uniform phase. Both inequalities
// are homogeneous, so sweeping scales logarithmically probes the ratio
// surface evenly.
std::complex<double> sample_point(double u_mod, double u_phase) {
    const double log_lo = std::log(1e-6);
    const double log_hi = std::log(1e6);
    const double r = std::exp(log_lo + (log_hi - log_lo) * u_mod);
    const double th = 2.0 * M_PI * u_phase;
    return {r * std::cos(th), r * std::sin(th)};
}

template <typename RatioFn>
InequalityReport scan_ratio(double sigma, std::uint64_t n_samples, std::uint64_t seed,
                            RatioFn ratio) {
    if (sigma < 0.0) throw std::invalid_argument("inequality oracle: sigma must be >= 0");
    if (n_samples == 0) throw std::invalid_argument("inequality oracle: need samples");
    InequalityReport rep;
    rep.sigma = sigma;
    rep.sample_count = n_samples;
    double half_max = 0.0;
    for (std::uint64_t i = 0; i < 2 * n_samples; ++i) {
        const PhiloxBlock b = philox4x64({i, 0, 0x0aceULL, 0}, seed, 0x7261746f72ULL);
        const auto z = sample_point(uniform_open01(b.words[0]), uniform_open01(b.words[1]));
        const auto x = sample_point(uniform_open01(b.words[2]), uniform_open01(b.words[3]));
        const double r = ratio(z, x);
        if (i < n_samples && r > half_max) half_max = r;
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.argmax_z = z;
            rep.argmax_x = x;
        }
    }
    // Stability under doubling: the first n samples vs all 2n.
    rep.stability_delta =
        rep.max_ratio > 0.0 ? (rep.max_ratio - half_max) / rep.max_ratio : 0.0;
    // Report the doubled count the max was taken over.
    rep.sample_count = 2 * n_samples;
    return rep;
}

std::complex<double> modulus_power_dir(std::complex<double> z, double pw, int dir_power) {
    // |z|^pw * (z/|z|)^dir_power, stable for tiny |z|.
    const double m = std::abs(z);
    if (m == 0.0) return {0.0, 0.0};
    const double th = std::arg(z);
    return std::polar(std::pow(m, pw), th * dir_power);
}

}  // namespace

InequalityReport lemma_modulus_square_constant(double sigma, std::uint64_t n_samples,
                                               std::uint64_t seed) {
    if (sigma <= 0.5) {
        return scan_ratio(sigma, n_samples, seed,
                          [sigma](std::complex<double> z, std::complex<double> x) {
                              const auto lhs = modulus_power_dir(z, 2.0 * sigma, 2) -
                                               modulus_power_dir(x, 2.0 * sigma, 2);
                              const double den = std::pow(std::abs(z - x), 2.0 * sigma);
                              return den > 0.0 ? std::abs(lhs) / den : 0.0;
                          });
    }
    return scan_ratio(sigma, n_samples, seed,
                      [sigma](std::complex<double> z, std::complex<double> x) {
                          const auto lhs = modulus_power_dir(z, 2.0 * sigma, 2) -
                                           modulus_power_dir(x, 2.0 * sigma, 2);
                          const double den =
                              std::abs(z - x) * (std::pow(std::abs(x), 2.0 * sigma - 1.0) +
                                                 std::pow(std::abs(z), 2.0 * sigma - 1.0));
                          return den > 0.0 ? std::abs(lhs) / den : 0.0;
                      });
}

InequalityReport elementary_ineq_constant(double sigma, std::uint64_t n_samples,
                                          std::uint64_t seed) {
    return scan_ratio(sigma, n_samples, seed,
                      [sigma](std::complex<double> z1, std::complex<double> z2) {
                          const auto lhs = modulus_power_dir(z1, 2.0 * sigma + 1.0, 1) -
                                           modulus_power_dir(z2, 2.0 * sigma + 1.0, 1);
                          const double den =
                              std::abs(z1 - z2) * (std::pow(std::abs(z1), 2.0 * sigma) +
                                                   std::pow(std::abs(z2), 2.0 * sigma));
                          return den > 0.0 ? std::abs(lhs) / den : 0.0;
                      });
}

OuClosedForm ou_mode_closed_forms(double q, double lambda, double mu, double t) {
    OuClosedForm out;
    out.mean_factor = std::exp(std::complex<double>(-lambda * t, mu * t));
    if (lambda > 0.0) {
        out.variance = q * q * (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda);
    } else {
        out.variance = q * q * t;
    }
    return out;
}

Field linear_exact_solution(const Field& u0, double lambda, double t) {
    if (u0.rep != Rep::spectral) {
        throw std::invalid_argument("linear_exact_solution: input must be spectral");
    }
    Field out = u0;
    const auto& ksq = u0.grid->ksq();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] *= std::exp(std::complex<double>(-lambda * t, ksq[i] * t));
    }
    return out;
}

}  // namespace snls
