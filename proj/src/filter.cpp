#include "rgauss/filter.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>

#include <algorithm>
#include <cmath>

namespace rgauss {

std::optional<double> find_threshold(const Vec& scores, const TailRule& rule)
{
    const Index n = scores.size();
    if (n == 0) return std::nullopt;
    std::vector<double> sorted(scores.data(), scores.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const double top = sorted.back();
    auto mass_above = [&](double t) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        return static_cast<double>(sorted.end() - it) / static_cast<double>(n);
    };
    if (rule.hard_threshold > 0.0 && top > rule.hard_threshold) return rule.hard_threshold;

    double t = rule.grid_origin;
    int steps = 0;
    while (rule.good_tail(t) > rule.start_mass && steps++ < 10 * constants::kThresholdGridSteps)
        t *= constants::kThresholdGridRatio;
    // Among qualifying thresholds, keep the one with the largest excess mass.
    std::optional<double> best;
    double best_excess = 0.0;
    for (int j = 0; j < constants::kThresholdGridSteps && t < top; ++j, t *= constants::kThresholdGridRatio) {
        const double emp = mass_above(t);
        const double excess = emp - rule.ratio * rule.good_tail(t) - rule.floor;
        if (emp > 0.0 && excess > best_excess) {
            best = t;
            best_excess = excess;
        }
    }
    return best;
}

RowSet rows_at_most(const Vec& scores, double threshold)
{
    RowSet out;
    for (Index i = 0; i < scores.size(); ++i)
        if (scores(i) <= threshold) out.push_back(i);
    return out;
}

double spectral_noise(Index d, Index n)
{
    const double r = static_cast<double>(d) / static_cast<double>(n);
    return 2.0 * std::sqrt(r) + r;
}

double shifted_chi_squared_tail(double t, Index k, double shift, double scale)
{
    // The noncentral tail is increasing in the noncentrality, so |a| = shift is the worst case.
    const double x = (static_cast<double>(k) + t) / scale;
    if (x <= 0.0) return 1.0;
    if (shift <= 0.0) return chi_squared_sf(x, static_cast<double>(k));
    const boost::math::non_central_chi_squared_distribution<double> dist(static_cast<double>(k), shift * shift);
    return boost::math::cdf(boost::math::complement(dist, x));
}

}  // namespace rgauss
