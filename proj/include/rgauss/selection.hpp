#pragma once

#include "rgauss/rng.hpp"
#include "rgauss/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rgauss {

struct Hypothesis {
    std::function<Vec(const Mat&)> log_density;       // row-wise log pdf
    std::function<Mat(Index n, Rng& rng)> sampler;    // draws used to estimate Scheffe-set masses
    std::string label;
    GaussianParams params;                            // set for Gaussian hypotheses
};

Hypothesis gaussian_hypothesis(const GaussianParams& params, std::string label = {});

// Empirical and Monte-Carlo masses of every Scheffe set W_jl = {f_j > f_l}.
class ScheffeTable {
public:
    ScheffeTable(const std::vector<Hypothesis>& hypotheses, const Mat& samples, double epsilon, std::uint64_t seed);

    Index size() const { return k_; }
    // |P_i(W) - P_S(W)| on the canonical set W = W_{min(j,l), max(j,l)}.
    double discrepancy(Index i, Index j, Index l) const;
    // Winner of the Scheffe contest between i and j: the hypothesis whose mass on
    // W_{min,max} is closer to the empirical mass; ties go to the smaller index.
    Index contest(Index i, Index j) const;
    // max over all Scheffe sets of |P_i(W) - P_S(W)|.
    double worst_discrepancy(Index i) const;
    long density_calls() const { return calls_; }

private:
    Index k_ = 0;
    std::vector<double> empirical_;  // k x k, entry (j, l) = P_S(W_jl)
    std::vector<double> model_;      // k x k x k, entry (i, j, l) = P_i(W_jl)
    long calls_ = 0;
};

struct TournamentResult {
    Index winner = 0;
    long density_calls = 0;
};

// Minimum-distance selection over the Scheffe sets: the winner is within
// 3 gamma + eps in TV of the sample distribution when some hypothesis is within gamma.
TournamentResult tournament(const std::vector<Hypothesis>& hypotheses, const Mat& samples, double epsilon,
                            double delta, std::uint64_t seed);

// Runs `estimator` on {eta (1 + g)^j <= 1} and tournaments the outputs.
GaussianParams eps_grid_select(const std::function<GaussianParams(double)>& estimator, double eta, double grid_ratio,
                               const Mat& samples, double delta, std::uint64_t seed);

std::vector<double> epsilon_grid(double eta, double grid_ratio, double top = 1.0);

}  // namespace rgauss
