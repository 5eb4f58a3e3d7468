#pragma once

#include "rgauss/poly.hpp"
#include "rgauss/rng.hpp"
#include "rgauss/types.hpp"

#include <cstdint>
#include <optional>

namespace rgauss {

Mat sample_gaussian(const GaussianParams& params, Index n, std::uint64_t seed);
Mat sample_gaussian(const GaussianParams& params, Index n, Rng& rng);

struct Moments {
    Vec mean;
    Mat matrix;
};

// Without a center: sample mean and covariance (denominator n-1).
// With a center c: c itself and the second moment E[(X-c)(X-c)^T] (denominator n).
Moments empirical_moments(const Mat& samples, const std::optional<Vec>& center = std::nullopt);
// E_S[X X^T] with denominator n.
Mat second_moment(const Mat& samples);

double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);
double chi_squared_sf(double x, double dof);

// Exact TV between N(mu1, I) and N(mu2, I): 2 Phi(|mu1 - mu2| / 2) - 1.
double tv_identity_cov(const Vec& mu1, const Vec& mu2);

// 2 Sigma (x) Sigma + vec(Sigma) vec(Sigma)^T in row-major flattening.
Mat fourth_moment_operator(const Mat& sigma);

// <M, Sigma - I>.
double poly_expectation(const Mat& m, const Mat& sigma);
// E_{N(0, Sigma)}[p(X)^2] for the polynomial associated to M.
double poly_second_moment(const Mat& m, const Mat& sigma);

// Unit-Frobenius maximiser of vec(M)^T op vec(M) over the span of `constraint`.
QuadraticPoly top_variance_poly(const Mat& op, const PolySubspace& constraint);

}  // namespace rgauss
