#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace snls {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson 95% score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

// Mann-Kendall trend statistic. p_decreasing is the one-sided normal
// approximation p-value for the alternative "monotone decreasing".
struct TrendTest {
    long long s = 0;
    double z = 0.0;
    double p_decreasing = 1.0;
    std::size_t n = 0;
};
TrendTest mann_kendall(std::span<const double> series);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    std::size_t n = 0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// Deterministic pairwise (cascade) summation; order-independent of the
// thread schedule because callers pass slot-ordered data.
double pairwise_sum(std::span<const double> v);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased

double normal_cdf(double z);

}  // namespace snls
