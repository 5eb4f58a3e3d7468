#pragma once

#include "rgauss/caps.hpp"
#include "rgauss/contamination.hpp"
#include "rgauss/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rgauss {

// Delta ledger of one filtering stage, evaluated against the stage's own input.
struct StageLedger {
    std::string stage;
    double epsilon = 0.0;        // contamination rate the stage ran at
    Index original_good = 0;
    Index good_lost = 0;
    std::vector<double> delta;   // entry 0 is the unfiltered input

    double good_lost_fraction() const;
};

struct GaussianFit {
    Vec mean;
    Mat covariance;
    std::vector<StageLedger> ledgers;  // empty when the input carries no labels
    CapUsage usage;
};

struct RecoverOptions {
    double delta = 0.01;
    Caps caps;
    double pair_fraction = 0.45;  // each half of the pairing stage; the rest feeds the mean stage
};

// Pairs rows to remove the mean, recovers the covariance at rate 2 eps, then
// whitens a fresh slice and recovers the mean.
GaussianFit recover_gaussian(const ContaminatedSet& set, double epsilon, std::uint64_t seed,
                             const RecoverOptions& opt = {});
// Identity-covariance inliers: robust mean only.
GaussianFit recover_mean_only(const ContaminatedSet& set, double epsilon, std::uint64_t seed,
                              const RecoverOptions& opt = {});
// Mean-zero inliers: robust covariance only.
GaussianFit recover_cov_only(const ContaminatedSet& set, double epsilon, std::uint64_t seed,
                             const RecoverOptions& opt = {});
// Sample mean and second moment about it.
GaussianFit empirical_fit(const Mat& samples);

// |Sigma^{-1/2} Sigma_hat Sigma^{-1/2} - I|_F.
double mahalanobis_cov_error(const Mat& truth, const Mat& estimate);
// Pinsker bound sqrt(KL(truth || estimate) / 2), capped at 1.
double tv_proxy(const GaussianParams& truth, const GaussianParams& estimate);

enum class EstimateMode { Mean, Cov, Full };
EstimateMode estimate_mode_from_string(const std::string& name);
std::string to_string(EstimateMode mode);

struct ExperimentConfig {
    Index d = 10;
    Index n = 20000;
    double epsilon = 0.05;
    double delta = 0.01;
    EstimateMode mode = EstimateMode::Full;
    AdversaryStrategy adversary;
    std::vector<std::string> estimators{"empirical", "robust"};
    int trials = 1;
    std::uint64_t seed = 0;
    Caps caps;
    double mean_scale = 1.0;        // true mean = mean_scale * (1, ..., 1) / sqrt(d)
    double cov_perturbation = 0.1;  // true covariance = I + cov_perturbation * P, |P|_F = 1, P >= 0
    int cov_rank = 2;
    bool record_time = true;        // false writes 0 so that reruns are byte-identical
    int threads = 1;
    std::string output;

    void validate() const;
};

ExperimentConfig parse_experiment_json(const std::string& text);
ExperimentConfig load_experiment(const std::string& path);

// Truth of trial t: the config's mean and a random rank-r covariance perturbation.
GaussianParams trial_truth(const ExperimentConfig& config, int trial);
// Clean rows plus the configured corruption of trial t.
ContaminatedSet trial_data(const ExperimentConfig& config, int trial);

struct ReportRow {
    std::string trial;  // trial index, or "median"
    std::uint64_t seed = 0;
    std::string adversary;
    std::string estimator;
    double mean_error = 0.0;
    double cov_error = 0.0;
    double tv = 0.0;
    double good_lost = 0.0;
    std::string delta_trace;  // stages joined by '|', values by ';'
    double wall_time = 0.0;
    std::string caps_bound;
};

std::vector<ReportRow> run_experiment(const ExperimentConfig& config);
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

}  // namespace rgauss
