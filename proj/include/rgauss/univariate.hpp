#pragma once

#include "rgauss/poly.hpp"
#include "rgauss/types.hpp"

#include <cstdint>
#include <vector>

namespace rgauss {

// Phi^{-1}(3/4).
inline constexpr double kMadQuantile = 0.6744897501960817;

// Lower median: element ceil(n/2) - 1 of the sorted values.
double median(std::vector<double> values);
double median(const Vec& values);
// Median absolute deviation about the lower median, divided by Phi^{-1}(3/4).
double mad_scale(const Vec& values);

// Entrywise robust covariance of mean-zero rows from MAD scales of sums and
// differences of standardized columns, clamped to be positive semidefinite.
Mat pairwise_mad_covariance(const Mat& samples);
// Median of <v, x_i>; v must have unit norm.
double directional_median(const Mat& samples, const Vec& v);

// Symmetric shrink: x - T above T, 0 inside [-T, T], x + T below -T.
struct TruncationSpec {
    double threshold = 0.0;

    explicit TruncationSpec(double t);
    double apply(double x) const;
};

// Monte-Carlo tail samples used by learn_mean_chi_squared.
long chi_squared_tail_samples(double epsilon, double tau);

// Robust estimate of E[p(X)] from a corrupted sample: the truncated part is
// averaged over S, the tail part over fresh N(0, I) draws.
double learn_mean_chi_squared(const Mat& samples, const QuadraticPoly& p, double epsilon, double improvement,
                              double tau, std::uint64_t seed);

// Density of Y_1^2 + ... + Y_k^2 for k in {1, 2, 3}.
double chi_squared_density(double x, int k);

}  // namespace rgauss
