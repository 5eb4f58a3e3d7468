#pragma once

#include "rgauss/poly.hpp"
#include "rgauss/types.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace rgauss {

// Unit coefficient vectors (rows) covering the sphere of R^D at `radius`;
// greedy packing over fixed-seed probes, cached.
std::shared_ptr<const Mat> coefficient_cover(int dim, double radius);

// Every unit element of span(W) lies within 1/2 (Frobenius) of a returned polynomial.
std::vector<QuadraticPoly> poly_cover(const PolySubspace& w, double radius = 0.5);

// p^2 = q + r with q the degree-4 harmonic part and
// r(x) = 1 + 2 (x^T M^2 x - tr M^2) = constant |M|_F^2 plus the degree-2 part 2 sqrt(2) M^2.
struct HarmonicSplit {
    QuadraticPoly p;
    Mat r_matrix;             // r(x) = x^T r_matrix x + r_constant
    double r_constant = 0.0;

    double p_squared(const Vec& x) const;
    double r(const Vec& x) const;
    double q(const Vec& x) const;
};

HarmonicSplit harmonic_split(const QuadraticPoly& p);

// Q(x) = sum_i q_i(x) with q_i the degree-4 harmonic part of p_i^2.
struct QuarticHarmonic {
    std::vector<QuadraticPoly> source;

    Index dim() const { return source.empty() ? 0 : source.front().dim(); }
    double operator()(const Vec& x) const;
    Vec evaluate(const Mat& rows) const;
};

// E_{N(0,I)}[Q^2]^{1/2} from the tensor representation sqrt(6) sum_i Sym(A_i (x) A_i).
double quartic_norm(const std::vector<QuadraticPoly>& ps);

// 2 exp(-c0 min(t^2 / |A|_F^2, t / |A|_2)).
double hanson_wright_bound(const Mat& a, double t);

// exp(-A t^{1/2}) for t at or above the onset, 1 below it.
double hypercontractive_bound(double t);

struct PolyMeanReport {
    Mat sigma;                   // the returned covariance
    Index cover_size = 0;
    double slab_half_width = 0.0;
};

// Robust covariance on span(W1) from chi-squared mean estimates of a 1/2-cover,
// keeping sigma_hat on W2 (and on everything orthogonal to W1).
PolyMeanReport learn_mean_poly_low_d(const Mat& samples, double epsilon, const PolySubspace& w1,
                                     const PolySubspace& w2, const Mat& sigma_hat, double xi, double tau,
                                     std::uint64_t seed);

// Block of the covariance on V in V's coordinates.
Mat learn_cov_low_dim(const Mat& samples, double epsilon, double xi, double tau, const Subspace& v,
                      std::uint64_t seed);

}  // namespace rgauss
