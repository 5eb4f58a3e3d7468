#include "rgauss/contamination.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/highdim_mean.hpp"
#include "rgauss/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace rgauss;

namespace {
ContaminatedSet cluster_set(Index d, Index n, double eps, double distance, std::uint64_t seed, int directions = 1)
{
    const Mat x = sample_gaussian(GaussianParams{Vec::Zero(d), Mat::Identity(d, d)}, n, seed);
    AdversaryStrategy st;
    st.kind = AdversaryKind::DenseCluster;
    st.params["distance"] = distance;
    st.params["directions"] = directions;
    return corrupt(x, eps, st, seed);
}
}  // namespace

TEST_CASE("eigenvalue threshold and trigger")
{
    MeanOptions opt;
    CHECK(mean_eigen_threshold(0.1, opt, 10, 1000000) > 0.1 / opt.beta);
    CHECK(many_eig_trigger(0.1, opt) >= 1);
}

TEST_CASE("clean data: recover_mean is close to the sample mean")
{
    const Mat x = sample_gaussian(GaussianParams{Vec::Constant(10, 2.0), Mat::Identity(10, 10)}, 20000, 1);
    const Vec mu = recover_mean(x, 0.05);
    CHECK((mu - Vec::Constant(10, 2.0)).norm() < 0.1);
}

TEST_CASE("far cluster: the filter removes many more outliers than inliers")
{
    const ContaminatedSet cs = cluster_set(20, 20000, 0.1, 20.0, 2, 12);
    const FilterOutcome out = filter_mean_opt(cs.samples, 0.1, MeanOptions{});
    REQUIRE(std::holds_alternative<Filtered>(out));
    const ContaminatedSet kept = cs.subset(std::get<Filtered>(out).kept);
    const Index bad_removed = cs.bad_count() - kept.bad_count();
    const Index good_removed = cs.good_count() - kept.good_count();
    CHECK(bad_removed > 10 * std::max<Index>(good_removed, 1));
}

TEST_CASE("delta strictly decreases on every filter round")
{
    const ContaminatedSet cs = cluster_set(20, 40000, 0.1, 6.0, 3);
    const Index good0 = cs.good_count();
    std::vector<double> deltas{delta_ledger(cs, good0).delta};
    MeanOptions opt;
    opt.observer = [&](const RowSet& kept) { deltas.push_back(delta_ledger(cs.subset(kept), good0).delta); };
    const Vec mu = recover_mean(cs.samples, 0.1, opt);
    for (std::size_t i = 1; i < deltas.size(); ++i) CHECK(deltas[i] < deltas[i - 1]);
    CHECK(mu.norm() < 0.4);
    CHECK(mu.norm() < cs.samples.colwise().mean().norm());
}

TEST_CASE("initial estimate removes gross outliers")
{
    const ContaminatedSet cs = cluster_set(10, 20000, 0.05, 1000.0, 4);
    const InitialMean init = initial_mean_estimate(cs.samples, 0.05);
    const ContaminatedSet kept = cs.subset(init.kept);
    CHECK(kept.bad_count() == 0);
    CHECK(init.mean.norm() < 1.0);
}

TEST_CASE("few-eigenvalue step on a given subspace")
{
    const ContaminatedSet cs = cluster_set(10, 20000, 0.05, 3.0, 5);
    const Mat id = Mat::Identity(10, 10);
    const Vec mu = filter_mean_few_eig(cs.samples, 0.05, MeanOptions{}, Subspace(id.leftCols(1)));
    CHECK(mu.norm() < 0.15);
}

TEST_CASE("noisy covariance: recover_mean_noisy tolerates a known spectral error")
{
    Mat sigma = Mat::Identity(10, 10);
    sigma(0, 0) = 1.1;
    const Mat x = sample_gaussian(GaussianParams{Vec::Constant(10, 0.5), sigma}, 20000, 6);
    AdversaryStrategy st;
    st.kind = AdversaryKind::TailShift;
    const ContaminatedSet cs = corrupt(x, 0.05, st, 6);
    const Vec mu = recover_mean_noisy(cs.samples, 0.05, 0.01, 1.0, 0.1);
    CHECK((mu - Vec::Constant(10, 0.5)).norm() < 0.2);
}

TEST_CASE("invalid inputs")
{
    const Mat x = Mat::Zero(100, 3);
    CHECK_THROWS_AS(recover_mean(x, 0.4), InvalidInput);
    CHECK_THROWS_AS(recover_mean(Mat::Zero(1, 3), 0.05), InsufficientSamples);
}
