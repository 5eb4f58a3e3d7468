#pragma once

#include "rgauss/caps.hpp"
#include "rgauss/filter.hpp"
#include "rgauss/poly.hpp"
#include "rgauss/types.hpp"

#include <cstdint>

namespace rgauss {

// All covariance routines assume mean-zero inliers.

// Eigenvalues of E_S[X X^T] - I above this value enter V: kDeg2C * xi + spectral noise.
double deg2_eigen_threshold(double xi, Index d, Index n);
// Number of large eigenvalues that triggers the degree-2 filter: min(ceil(C1 ln 1/eps), cap + 1).
Index deg2_trigger(double epsilon);

// Filtered, or SubspaceOk(V) with dim(V) below the trigger. Large directions
// fewer than the trigger are still filtered when their chi-squared tail
// carries a valid threshold.
FilterOutcome filter_cov_many_deg2_eig(const Mat& samples, double epsilon, double xi, double delta,
                                       CapUsage* usage = nullptr);

// E_S[p^2] - E_{N(0, Sigma_S)}[p^2] above this value marks a quadratic over W as
// exceptional, Sigma_S being the empirical second moment on W.
double deg4_excess_threshold(Index poly_dim, Index n);

// E_{N(0, C)}[p_a p_b] for the associated polynomials of an orthonormal basis.
Mat quadratic_moment_model(const PolySubspace& basis, const Mat& c);
// min(ceil(ln^4 1/eps), cap).
Index deg4_trigger(double epsilon, int cap);

// Filtered, or PolyBasisOk holding the exceptional quadratics over W (ambient
// matrices). The filter scores the degree-4 harmonic sum of the top
// min(m, k) exceptional quadratics whenever m >= 1.
FilterOutcome filter_cov_many_deg4_eig(const Mat& samples, double epsilon, double xi, double delta, const Subspace& w,
                                       int cap = constants::kQuarticCap, CapUsage* usage = nullptr);

// W^T (Sigma^{-1} + P_V)^{-1} V: maps a conditioning point v in V coordinates to
// the mean of X_W under N(0, Sigma) reweighted by exp(-|x_V - v|^2 / 2).
Mat stitching_conditional_map(const Mat& sigma, const Subspace& v, const Subspace& w);

struct StitchReport {
    Mat sigma0;        // ambient covariance [I, 2B^T; 2B, I] in the (V, W) frame
    Mat b;             // dim(W) x dim(V)
    Index draws = 0;   // conditioning vectors drawn
    Index starved = 0; // vectors with too few accepted rows
    Index zeroed = 0;  // vectors whose mean estimate exceeded the norm bound
};

// Recovers the off-diagonal block of a covariance whose V and W blocks are
// already close to identity, from fresh corrupted rows.
StitchReport stitching(const Mat& fresh, const Subspace& v, const Subspace& w, double xi, double eta,
                       double epsilon, double tau, std::uint64_t seed, int m_cap = constants::kStitchCap);

// Block description of one contraction round.
struct BlockCovEstimate {
    Subspace v;
    Subspace w;
    Mat sigma_v;              // dim(V) x dim(V), V coordinates
    Mat sigma_w;              // dim(W) x dim(W), W coordinates
    PolySubspace exceptional; // quadratics over W learned robustly
    double certificate = 0.0; // accuracy xi on the other quadratics over W
};

// One contraction round: halves |Sigma - I|_F (Estimate) or removes rows of
// `samples` (Filtered). `fresh` feeds the stitching step.
FilterOutcome improve_cov(const Mat& samples, const Mat& fresh, double xi, double epsilon, double delta,
                          std::uint64_t seed, const Caps& caps = {}, CapUsage* usage = nullptr,
                          BlockCovEstimate* block = nullptr);

struct InitialCov {
    Mat covariance;
    RowSet kept;
};
// Single-polynomial filter on the whitened fourth-moment operator.
InitialCov initial_cov_estimate(const Mat& samples, double epsilon, std::uint64_t seed);

struct CovOptions {
    double delta = 0.01;
    Caps caps;
    FilterObserver observer;  // rows entering the filters, then the survivors after every filter round
    CapUsage* usage = nullptr;
};

// Holds back a fresh share of the rows for stitching and iterates the
// contraction step on the rest in whitened coordinates.
Mat recover_cov(const Mat& samples, double epsilon, std::uint64_t seed, const CovOptions& opt = {});

}  // namespace rgauss
