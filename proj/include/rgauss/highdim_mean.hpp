#pragma once

#include "rgauss/caps.hpp"
#include "rgauss/filter.hpp"
#include "rgauss/types.hpp"

namespace rgauss {

struct MeanOptions {
    double delta = 0.01;
    double gamma = 1.0;
    double alpha = 0.25;  // net resolution of the low-dimensional learner
    double beta = 4.0;    // eigenvalue threshold 1 + eps / beta
    double chi = 0.0;     // known bound on |Sigma - I|_2 of the inliers
    int lowdim_cap = 6;   // cap on dim(V') and on the few-eigenvalue subspace
    FilterObserver observer;
    CapUsage* usage = nullptr;  // set when the cap limits dim(V')
};

// Eigenvalue threshold on the sample covariance: 1 + eps / beta + chi + spectral noise.
double mean_eigen_threshold(double epsilon, const MeanOptions& opt, Index d, Index n);
// Number of large eigenvalues that triggers the filter: min(ceil(C1 beta ln 1/eps), cap).
Index many_eig_trigger(double epsilon, const MeanOptions& opt);

FilterOutcome filter_mean_many_eig(const Mat& samples, double epsilon, const MeanOptions& opt);
Vec filter_mean_few_eig(const Mat& samples, double epsilon, const MeanOptions& opt, const Subspace& v);
// Filtered, or MeanEstimate. When the many-eigenvalue filter finds no threshold,
// the capped top subspace goes to the few-eigenvalue estimator.
FilterOutcome filter_mean_opt(const Mat& samples, double epsilon, const MeanOptions& opt);

struct InitialMean {
    Vec mean;
    RowSet kept;  // rows the single-direction filter retained
};
InitialMean initial_mean_estimate(const Mat& samples, double epsilon, double chi = 0.0);

Vec recover_mean(const Mat& samples, double epsilon, const MeanOptions& opt = {});
Vec recover_mean_noisy(const Mat& samples, double epsilon, double delta, double gamma, double chi,
                       const MeanOptions& base = {});

}  // namespace rgauss
