#pragma once

#include "rgauss/types.hpp"

#include <functional>
#include <memory>

namespace rgauss {

// Rows are unit vectors in R^k covering the sphere at resolution beta.
// Built by greedy farthest-point packing over fixed-seed probes and cached.
std::shared_ptr<const Mat> sphere_net(int k, double beta);

// Intersection of slabs |<v, y> - b_v| <= half_width, in subspace coordinates.
struct SlabBody {
    Mat directions;  // one unit vector per row
    Vec centers;
    double half_width = 0.0;

    Index dim() const { return directions.cols(); }
    // Largest slab violation at y; <= 0 inside the body.
    double max_violation(const Vec& y) const;
    bool contains(const Vec& y, double tol = 1e-9) const { return max_violation(y) <= tol; }
};

SlabBody build_slab_body(const Mat& samples, const Subspace& v, double rho, double beta);

// Euclidean projection onto the body (exact dual active-set QP). `rho_prime`
// is the accepted slack; an empty body raises GoodnessViolation.
Vec proj_oracle(const SlabBody& body, const Vec& y, double rho_prime = 1e-9);

using ProjectionOracle = std::function<Vec(const Vec&)>;
// Cheap lower bound on the distance from a point to the body, or nullptr.
using DistanceBound = std::function<double(const Vec&)>;

// (rho R)-net of a body contained in ball(x, 2R).
std::vector<Vec> circumscribe_net(double radius, double rho, const ProjectionOracle& oracle, const Vec& x,
                                  const DistanceBound& bound = nullptr);

// Center whose ball of radius sqrt(2)(1 + 2 rho) R contains the body.
Vec circumscribe(double radius, double rho, const ProjectionOracle& oracle, const Vec& x,
                 const DistanceBound& bound = nullptr);

// Half-width of the median slabs: exact worst-case median shift plus sampling
// slack (union bound over the directions) and gamma eps / d, widened by a
// factor (1 + chi) when the inlier covariance is only known to within chi.
double median_slab_width(double epsilon, double gamma, Index d, Index n, Index directions, double delta,
                         double chi = 0.0);

// Robust estimate of Pi_V mu, returned in ambient coordinates.
Vec learn_mean_low_d(const Subspace& v, double gamma, double epsilon, double delta, const Mat& samples, double rho,
                     double chi = 0.0);

// Splits V into consecutive blocks of at most constants::kLowDimBlock basis
// vectors and sums the per-block estimates.
Vec learn_mean_low_d_blocked(const Subspace& v, double gamma, double epsilon, double delta, const Mat& samples,
                             double rho, double chi = 0.0);

// Worst-case error of learn_mean_low_d_blocked: sqrt(#blocks) sqrt(2)(1 + 2 rho) beta / (1 - rho).
double low_d_error_bound(Index k, double gamma, double epsilon, double delta, Index d, Index n, double rho,
                         double chi = 0.0);

}  // namespace rgauss
