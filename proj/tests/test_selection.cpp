#include "rgauss/gaussian.hpp"
#include "rgauss/selection.hpp"

#include <doctest.h>

#include <cmath>

using namespace rgauss;

namespace {
GaussianParams shifted(Index d, double shift)
{
    Vec mu = Vec::Zero(d);
    mu(0) = shift;
    return {mu, Mat::Identity(d, d)};
}
}  // namespace

TEST_CASE("epsilon grid")
{
    const auto g = epsilon_grid(0.01, 1.0);
    REQUIRE(g.size() == 7);
    CHECK(g.front() == doctest::Approx(0.01));
    CHECK(g.back() == doctest::Approx(0.64));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(2.0 * g[i - 1]));
    CHECK(epsilon_grid(0.5, 0.1, 0.5).size() == 1);
    CHECK_THROWS_AS(epsilon_grid(0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(epsilon_grid(0.1, 0.0), InvalidInput);
}

TEST_CASE("gaussian hypothesis log density")
{
    const GaussianParams p{Vec::Zero(2), Mat::Identity(2, 2)};
    const Hypothesis h = gaussian_hypothesis(p, "std");
    Mat x(1, 2);
    x << 1.0, 0.0;
    CHECK(h.log_density(x)(0) == doctest::Approx(-std::log(2.0 * M_PI) - 0.5));
    CHECK(h.label == "std");
}

TEST_CASE("Scheffe contests")
{
    const Index d = 3;
    const Mat x = sample_gaussian(shifted(d, 0.0), 20000, 1);
    const std::vector<Hypothesis> hs{gaussian_hypothesis(shifted(d, 1.0)), gaussian_hypothesis(shifted(d, 0.0)),
                                     gaussian_hypothesis(shifted(d, -0.5))};
    const ScheffeTable table(hs, x, 0.05, 1);
    CHECK(table.size() == 3);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) CHECK(table.contest(i, j) == table.contest(j, i));
    CHECK(table.contest(0, 1) == 1);
    CHECK(table.contest(1, 2) == 1);
    CHECK(table.discrepancy(0, 0, 1) == doctest::Approx(table.discrepancy(0, 1, 0)));
    CHECK(table.worst_discrepancy(1) < table.worst_discrepancy(0));
    CHECK(table.density_calls() > 0);
}

TEST_CASE("tournament picks the sampling distribution")
{
    const Index d = 4;
    const Mat x = sample_gaussian(shifted(d, 0.0), 20000, 2);
    std::vector<Hypothesis> hs;
    for (double s : {2.0, 1.0, 0.5, 0.0, -0.7}) hs.push_back(gaussian_hypothesis(shifted(d, s)));
    const TournamentResult r = tournament(hs, x, 0.05, 0.01, 2);
    CHECK(r.winner == 3);
    CHECK(r.density_calls > 0);
}

TEST_CASE("grid selection skips failing grid points")
{
    const Index d = 2;
    const Mat x = sample_gaussian(shifted(d, 0.0), 10000, 3);
    const GaussianParams best = eps_grid_select(
        [&](double e) {
            if (e < 0.05) throw GoodnessViolation("no threshold");
            return shifted(d, e > 0.2 ? 3.0 : 0.0);
        },
        0.01, 1.0, x, 0.01, 3);
    CHECK(best.mean(0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(eps_grid_select([](double) -> GaussianParams { throw GoodnessViolation("none"); }, 0.1, 1.0, x,
                                    0.01, 3),
                    GoodnessViolation);
}
