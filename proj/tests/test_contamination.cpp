#include "rgauss/contamination.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace rgauss;

namespace {
Mat clean_rows(Index n, Index d, std::uint64_t seed)
{
    return sample_gaussian(GaussianParams{Vec::Zero(d), Mat::Identity(d, d)}, n, seed);
}
}  // namespace

TEST_CASE("tail shift moves the empirical mean by eps sqrt(ln 1/eps)")
{
    const Mat x = clean_rows(100000, 1, 1);
    AdversaryStrategy st;
    st.kind = AdversaryKind::TailShift;
    const ContaminatedSet cs = corrupt(x, 0.05, st, 1);
    CHECK(cs.size() == 100000);
    CHECK(cs.bad_count() == 5000);
    const double shift = cs.samples.col(0).mean() - x.topRows(95000).col(0).mean();
    CHECK(shift == doctest::Approx(0.05 * std::sqrt(std::log(20.0))).epsilon(0.01 / 0.087));
}

TEST_CASE("additive adversaries keep every clean row")
{
    const Mat x = clean_rows(1000, 2, 2);
    for (auto kind : {AdversaryKind::TailShift, AdversaryKind::DenseCluster, AdversaryKind::HuberMaxDensity,
                      AdversaryKind::VarianceInflation}) {
        AdversaryStrategy st;
        st.kind = kind;
        CHECK(st.additive_only());
        const ContaminatedSet cs = corrupt(x, 0.1, st, 3);
        Index good = 0;
        for (Index i = 0; i < cs.size(); ++i) {
            if (cs.labels[static_cast<std::size_t>(i)]) continue;
            bool found = false;
            for (Index j = 0; j < x.rows() && !found; ++j) found = (x.row(j) - cs.samples.row(i)).norm() == 0.0;
            good += found;
        }
        CHECK(good == cs.good_count());
        CHECK(cs.bad_count() == 100);
    }
}

TEST_CASE("dense cluster sits at the requested distance")
{
    const Mat x = clean_rows(2000, 3, 4);
    AdversaryStrategy st;
    st.kind = AdversaryKind::DenseCluster;
    st.params["distance"] = 7.0;
    const ContaminatedSet cs = corrupt(x, 0.05, st, 4);
    const Vec inlier_mean = x.topRows(1900).colwise().mean().transpose();
    for (Index i = 0; i < cs.size(); ++i)
        if (cs.labels[static_cast<std::size_t>(i)])
            CHECK((cs.samples.row(i).transpose() - inlier_mean).norm() == doctest::Approx(7.0));
}

TEST_CASE("corruption is deterministic in the seed")
{
    const Mat x = clean_rows(500, 2, 5);
    AdversaryStrategy st;
    st.kind = AdversaryKind::HuberMaxDensity;
    CHECK((corrupt(x, 0.1, st, 9).samples - corrupt(x, 0.1, st, 9).samples).norm() == 0.0);
}

TEST_CASE("invalid corruption requests are rejected")
{
    const Mat x = clean_rows(100, 2, 6);
    AdversaryStrategy st;
    CHECK_THROWS_AS(corrupt(x, 0.5, st, 1), InvalidInput);
    CHECK_THROWS_AS(corrupt(x, -0.1, st, 1), InvalidInput);
    st.params["directions"] = 5.0;
    CHECK_THROWS_AS(corrupt(x, 0.1, st, 1), InvalidInput);
    CHECK_THROWS_AS(adversary_kind_from_string("nope"), InvalidInput);
}

TEST_CASE("adversary JSON round trip")
{
    AdversarySpec spec;
    spec.strategy.kind = AdversaryKind::DenseCluster;
    spec.strategy.params["distance"] = 3.5;
    spec.seed = 42;
    const AdversarySpec back = parse_adversary_json(adversary_to_json(spec));
    CHECK(back.strategy.kind == AdversaryKind::DenseCluster);
    CHECK(back.strategy.param("distance", 0.0) == 3.5);
    CHECK(back.seed == 42);
    CHECK_THROWS_AS(parse_adversary_json("{\"kind\": 3}"), InvalidInput);
}

TEST_CASE("delta ledger arithmetic")
{
    // 8 good, 2 bad originally; drop 1 good and 2 bad.
    const std::vector<std::uint8_t> now{0, 0, 0, 0, 0, 0, 0};
    const DeltaLedger l = delta_ledger(now, 8);
    CHECK(l.psi == 0.0);
    CHECK(l.phi == doctest::Approx(1.0 / 7.0));
    CHECK(l.delta == doctest::Approx(l.phi * std::log(1.0 / l.phi)));
    const std::vector<std::uint8_t> start{0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
    const DeltaLedger s = delta_ledger(start, 8);
    CHECK(s.phi == 0.0);
    CHECK(s.delta == doctest::Approx(0.2));
}

TEST_CASE("lower-bound pair produces one corrupted law")
{
    const LowerBoundPair pair = lower_bound_pair(0.05);
    CHECK(pair.p2.mean(0) - pair.p1.mean(0) == doctest::Approx(2.0 * pair.alpha));
    CHECK(pair.eta == doctest::Approx(1.0 + std::erf(pair.alpha / std::sqrt(2.0))));
    double mass = 0.0;
    for (double x = -10.0; x <= 10.0; x += 1e-3) {
        CHECK(pair.corrupted_from_p1(x) == doctest::Approx(pair.corrupted_from_p2(x)).epsilon(1e-12));
        mass += pair.common_density(x) * 1e-3;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    Rng rng = make_rng(1);
    const Vec q = pair.sample_outliers_for_p1(20000, rng);
    // q1 lives to the right of the midpoint of the pair.
    CHECK((q.array() >= 0.5 * (pair.p1.mean(0) + pair.p2.mean(0)) - 1e-12).all());
}

TEST_CASE("goodness check accepts clean Gaussian rows")
{
    const Mat x = clean_rows(20000, 3, 7);
    const GaussianParams p{Vec::Zero(3), Mat::Identity(3, 3)};
    const GoodnessReport r = goodness_check(x, p, 0.1, 0.01, 200, 7);
    CHECK(r.bounded);
    CHECK(r.passes(0.1));
    Mat shifted = x;
    shifted.col(0).array() += 1.0;
    CHECK_FALSE(goodness_check(shifted, p, 0.1, 0.01, 200, 7).passes(0.1));
}
