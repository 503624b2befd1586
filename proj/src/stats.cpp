#include "snls/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace snls {

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be > 0");
    if (successes > n) throw std::invalid_argument("wilson_interval: successes > n");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

TrendTest mann_kendall(std::span<const double> series) {
    TrendTest t;
    t.n = series.size();
    if (series.size() < 3) return t;
    long long s = 0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            const double d = series[j] - series[i];
            if (d > 0) ++s;
            else if (d < 0) --s;
        }
    }
    t.s = s;
    // tie correction
    std::map<double, std::size_t> ties;
    for (double v : series) ++ties[v];
    const double n = static_cast<double>(series.size());
    double var = n * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
    for (const auto& [v, c] : ties) {
        if (c > 1) {
            const double cc = static_cast<double>(c);
            var -= cc * (cc - 1.0) * (2.0 * cc + 5.0) / 18.0;
        }
    }
    if (var <= 0.0) return t;
    const double sd = std::sqrt(var);
    if (s > 0) t.z = (static_cast<double>(s) - 1.0) / sd;
    else if (s < 0) t.z = (static_cast<double>(s) + 1.0) / sd;
    t.p_decreasing = normal_cdf(t.z);
    return t;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares: need >= 2 paired points");
    }
    LineFit f;
    f.n = x.size();
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
    }
    f.rms_residual = std::sqrt(rss / n);
    return f;
}

double pairwise_sum(std::span<const double> v) {
    if (v.empty()) return 0.0;
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("variance: need >= 2 samples");
    const double m = mean(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace snls
