#pragma once

#include "rgauss/rng.hpp"
#include "rgauss/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rgauss {

enum class AdversaryKind {
    TailShift,              // point mass at mu + c sqrt(ln 1/eps) e_j, additive
    DenseCluster,           // point mass at mu + r e_j, additive
    HuberMaxDensity,        // draws from (max{p1,p2}/eta - (1-eps) p1) / eps along e_1, additive
    SubtractiveTruncation,  // removes the right eps-tail along e_1 and adds reflections; NOT additive
    VarianceInflation,      // inlier-like rows pushed to mu_j +- r along e_j, additive
    Custom                  // user-supplied outlier rows, cycled, additive
};

std::string to_string(AdversaryKind kind);
AdversaryKind adversary_kind_from_string(const std::string& name);

struct AdversaryStrategy {
    AdversaryKind kind = AdversaryKind::TailShift;
    // Recognised keys: "scale" (tail_shift c), "distance" (cluster / inflation r),
    // "directions" (number of coordinate directions the outliers are split over),
    // "alpha" and "center" (huber_max_density: half-gap, location of p1 along e_1).
    std::map<std::string, double> params;
    Mat points;  // custom outlier rows

    double param(const std::string& name, double fallback) const;
    bool additive_only() const { return kind != AdversaryKind::SubtractiveTruncation; }
};

// {"kind": "...", "params": {...}, "seed": u64}; the seed is optional.
struct AdversarySpec {
    AdversaryStrategy strategy;
    std::uint64_t seed = 0;
};
AdversarySpec parse_adversary_json(const std::string& text);
std::string adversary_to_json(const AdversarySpec& spec);

struct ContaminatedSet {
    Mat samples;
    std::vector<std::uint8_t> labels;  // 1 = adversarial; empty when unknown
    double epsilon = 0.0;

    Index size() const { return samples.rows(); }
    Index good_count() const;
    Index bad_count() const;
    ContaminatedSet subset(const RowSet& rows) const;
};

// Keeps the first n - floor(eps n) clean rows, adds floor(eps n) adversarial rows
// and shuffles. The adversary sees the kept inliers (it centers on their mean).
ContaminatedSet corrupt(const Mat& clean, double epsilon, const AdversaryStrategy& strategy, std::uint64_t seed);

struct DeltaLedger {
    double phi = 0.0;    // |G \ G'| / |S'|
    double psi = 0.0;    // |E'| / |S'|
    double delta = 0.0;  // psi + phi ln(1/phi)
};

DeltaLedger delta_ledger(const std::vector<std::uint8_t>& current_labels, Index original_good);
DeltaLedger delta_ledger(const ContaminatedSet& current, Index original_good);

// Two unit-variance Gaussians N(c - alpha, 1), N(c + alpha, 1) whose Huber
// eps-corruptions coincide with f = max{p1, p2} / eta.
struct LowerBoundPair {
    GaussianParams p1;
    GaussianParams p2;
    double epsilon = 0.0;
    double alpha = 0.0;
    double eta = 1.0;  // 1 + erf(alpha / sqrt 2)

    double density_p1(double x) const;
    double density_p2(double x) const;
    double common_density(double x) const;
    // (1 - eps) p_i + eps q_i with q_i = (f - (1 - eps) p_i) / eps.
    double corrupted_from_p1(double x) const;
    double corrupted_from_p2(double x) const;
    // Draws from q_1 = (f - (1 - eps) p1) / eps.
    Vec sample_outliers_for_p1(Index n, Rng& rng) const;
};

// Without `alpha`, the largest feasible half-gap; a supplied alpha must not exceed it.
LowerBoundPair lower_bound_pair(double epsilon, double center = 0.0, std::optional<double> alpha = std::nullopt);

struct GoodnessReport {
    Index probes = 0;
    double affine_margin = 0.0;      // worst |Pr_G(L >= 0) - Pr_N(L >= 0)|
    double mean_margin = 0.0;        // |E_G X - mu|
    double quadratic_mean_margin = 0.0;
    double quadratic_square_margin = 0.0;
    double quartic_margin = 0.0;
    double boundedness_ratio = 0.0;  // max |x - mu|^2 / (d ln(n / delta))
    bool bounded = true;
    bool verdict_available = false;
    bool passes(double eta) const;
};

GoodnessReport goodness_check(const Mat& good, const GaussianParams& params, double eta, double delta, Index budget,
                              std::uint64_t seed);

}  // namespace rgauss
