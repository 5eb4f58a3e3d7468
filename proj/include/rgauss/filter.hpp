#pragma once

#include "rgauss/poly.hpp"
#include "rgauss/types.hpp"

#include <functional>
#include <optional>
#include <variant>

namespace rgauss {

struct MeanEstimate {
    Vec mean;
};

struct CovEstimate {
    Mat covariance;
};

// Rows of the filter's input that survive; always a strict subset.
struct Filtered {
    RowSet kept;
};

// No filtering needed; the returned subspace holds the large-eigenvalue directions.
struct SubspaceOk {
    Subspace v;
};

// No filtering needed; the returned quadratics carry large empirical variance.
struct PolyBasisOk {
    PolySubspace basis;
};

using FilterOutcome = std::variant<MeanEstimate, CovEstimate, Filtered, SubspaceOk, PolyBasisOk>;

// Called with the surviving rows (numbered in the caller's original set) after every filter round.
using FilterObserver = std::function<void(const RowSet& kept)>;

// Threshold rule shared by the filters. A threshold T is accepted when
//   (a) T = hard_threshold and some score exceeds it, or
//   (b) T >= the first grid point with good_tail(T) <= start_mass and
//       Pr_S(score > T) > ratio * good_tail(T) + floor,
// where good_tail(T) bounds the inlier probability of a score above T.
struct TailRule {
    std::function<double(double)> good_tail;
    double ratio = 1.0;
    double floor = 0.0;
    double hard_threshold = 0.0;
    double start_mass = 0.0;
    double grid_origin = 1e-3;
};

std::optional<double> find_threshold(const Vec& scores, const TailRule& rule);

// Rows whose score is at most T.
RowSet rows_at_most(const Vec& scores, double threshold);

// Marchenko-Pastur width 2 sqrt(d/n) + d/n of the sample-covariance spectrum around 1.
double spectral_noise(Index d, Index n);

// Upper bound on Pr(||Z + a||^2 - k > t) for Z ~ N(0, scale I_k) and |a| <= shift.
double shifted_chi_squared_tail(double t, Index k, double shift, double scale = 1.0);

}  // namespace rgauss
