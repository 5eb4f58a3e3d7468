#include "rgauss/gaussian.hpp"
#include "rgauss/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace rgauss;

namespace {
const char* kConfig = R"({"d": 4, "n": 4000, "epsilon": 0.05, "mode": "full",
  "adversary": {"kind": "dense_cluster", "params": {"distance": 6.0}},
  "trials": 2, "seed": 3, "record_time": false})";

std::string report(const ExperimentConfig& c)
{
    std::ostringstream os;
    write_report_csv(os, run_experiment(c));
    return os.str();
}
}  // namespace

TEST_CASE("experiment JSON is parsed strictly")
{
    const ExperimentConfig c = parse_experiment_json(kConfig);
    CHECK(c.d == 4);
    CHECK(c.n == 4000);
    CHECK(c.adversary.kind == AdversaryKind::DenseCluster);
    CHECK(c.adversary.param("distance", 0.0) == 6.0);
    CHECK_FALSE(c.record_time);
    CHECK_THROWS_AS(parse_experiment_json(R"({"d": 4, "bogus": 1})"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_json(R"({"epsilon": 0.4})"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_json(R"({"estimators": ["oracle"]})"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_json("{"), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_json(R"({"mode": "both"})"), InvalidInput);
}

TEST_CASE("modes and caps")
{
    for (auto m : {EstimateMode::Mean, EstimateMode::Cov, EstimateMode::Full})
        CHECK(estimate_mode_from_string(to_string(m)) == m);
    const Caps caps = parse_caps("k=5,stitch-m=64");
    CHECK(caps.quartic == 5);
    CHECK(caps.stitch_m == 64);
    CHECK(caps.lowdim == Caps{}.lowdim);
    CHECK_THROWS_AS(parse_caps("k=0"), InvalidInput);
    CHECK_THROWS_AS(parse_caps("width=3"), InvalidInput);
}

TEST_CASE("error measures")
{
    const Index d = 3;
    const GaussianParams a{Vec::Zero(d), Mat::Identity(d, d)};
    CHECK(tv_proxy(a, a) == doctest::Approx(0.0));
    CHECK(mahalanobis_cov_error(a.covariance, a.covariance) == doctest::Approx(0.0));
    GaussianParams b = a;
    b.mean(0) = 0.1;
    // KL = |mu|^2 / 2 for identity covariances.
    CHECK(tv_proxy(a, b) == doctest::Approx(std::sqrt(0.01 / 4.0)));
    const Mat sigma = 4.0 * Mat::Identity(d, d);
    CHECK(mahalanobis_cov_error(sigma, 2.0 * sigma) == doctest::Approx(std::sqrt(3.0)));
    b.mean(0) = 100.0;
    CHECK(tv_proxy(a, b) == 1.0);
}

TEST_CASE("recovery on clean data")
{
    ExperimentConfig c = parse_experiment_json(kConfig);
    c.n = 40000;
    c.epsilon = 0.0;
    const ContaminatedSet set = trial_data(c, 0);
    const GaussianParams truth = trial_truth(c, 0);
    const GaussianFit fit = recover_gaussian(set, 0.0, 1);
    CHECK(tv_proxy(truth, {fit.mean, fit.covariance}) <= 0.05);
    const GaussianFit emp = empirical_fit(set.samples);
    CHECK((emp.mean - truth.mean).norm() < 0.05);
}

TEST_CASE("labelled runs carry stage ledgers")
{
    const ExperimentConfig c = parse_experiment_json(kConfig);
    const ContaminatedSet set = trial_data(c, 0);
    REQUIRE(set.labels.size() == static_cast<std::size_t>(set.size()));
    const GaussianFit fit = recover_gaussian(set, c.epsilon, 1);
    REQUIRE(fit.ledgers.size() == 2);
    for (const auto& l : fit.ledgers) {
        REQUIRE_FALSE(l.delta.empty());
        CHECK(l.good_lost_fraction() >= 0.0);
        CHECK(l.good_lost_fraction() <= 1.0);
    }
}

TEST_CASE("too few rows")
{
    ContaminatedSet tiny;
    tiny.samples = Mat::Random(4, 3);
    CHECK_THROWS_AS(recover_gaussian(tiny, 0.05, 1), InsufficientSamples);
    CHECK_THROWS_AS(empirical_fit(Mat::Random(1, 3)), InsufficientSamples);
}

TEST_CASE("report CSV")
{
    const ExperimentConfig c = parse_experiment_json(kConfig);
    const std::string a = report(c);
    CHECK(a == report(c));
    std::istringstream is(a);
    std::string header;
    std::getline(is, header);
    CHECK(header == "trial,seed,adversary,estimator,mean_error,cov_error,tv_proxy,good_lost,delta_trace,wall_time,"
                    "caps_bound");
    int lines = 0;
    for (std::string line; std::getline(is, line);) ++lines;
    // Two trials and a median row for each estimator.
    CHECK(lines == 6);
}
