#include "rgauss/univariate.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/linalg.hpp"
#include "rgauss/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rgauss {

double median(std::vector<double> values)
{
    if (values.empty()) throw InvalidInput("median of an empty list");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() + 1) / 2 - 1);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

double median(const Vec& values) { return median(std::vector<double>(values.data(), values.data() + values.size())); }

double mad_scale(const Vec& values)
{
    const double m = median(values);
    return median(Vec((values.array() - m).abs())) / kMadQuantile;
}

Mat pairwise_mad_covariance(const Mat& samples)
{
    const Index d = samples.cols();
    if (samples.rows() < 2) throw InsufficientSamples("robust covariance needs at least two rows");
    Vec scale(d);
    for (Index j = 0; j < d; ++j) {
        scale(j) = mad_scale(Vec(samples.col(j)));
        if (!(scale(j) > 0.0)) throw InsufficientSamples("a column has zero robust scale");
    }
    Mat out(d, d);
    for (Index a = 0; a < d; ++a) {
        out(a, a) = scale(a) * scale(a);
        const Vec ua = samples.col(a) / scale(a);
        for (Index b = a + 1; b < d; ++b) {
            const Vec ub = samples.col(b) / scale(b);
            const double plus = mad_scale(Vec(ua + ub));
            const double minus = mad_scale(Vec(ua - ub));
            out(a, b) = out(b, a) = scale(a) * scale(b) * (plus * plus - minus * minus) / 4.0;
        }
    }
    return psd_clamp(out);
}

double directional_median(const Mat& samples, const Vec& v)
{
    if (v.size() != samples.cols()) throw InvalidInput("direction length does not match sample width");
    if (std::abs(v.norm() - 1.0) > 1e-9) throw InvalidInput("direction must be a unit vector");
    return median(Vec(samples * v));
}

TruncationSpec::TruncationSpec(double t) : threshold(t)
{
    if (!(t > 0.0)) throw InvalidInput("truncation threshold must be positive");
}

double TruncationSpec::apply(double x) const
{
    if (x > threshold) return x - threshold;
    if (x < -threshold) return x + threshold;
    return 0.0;
}

long chi_squared_tail_samples(double epsilon, double tau)
{
    if (!(tau > 0.0 && tau < 1.0)) throw InvalidInput("failure probability must lie in (0, 1)");
    if (epsilon <= 0.0) return constants::kMaxTailSamples;
    const double m = std::ceil(constants::kTailSamplesKappa * std::log(2.0 / tau) / (epsilon * epsilon));
    return static_cast<long>(std::min(m, static_cast<double>(constants::kMaxTailSamples)));
}

double learn_mean_chi_squared(const Mat& samples, const QuadraticPoly& p, double epsilon, double improvement,
                              double tau, std::uint64_t seed)
{
    if (!(improvement > 1.0)) throw InvalidInput("improvement factor must exceed 1");
    if (epsilon < 0.0 || epsilon > constants::kMaxContamination) throw InvalidInput("epsilon out of range");
    if (samples.rows() == 0) throw InvalidInput("empty sample set");
    if (samples.cols() != p.dim()) throw InvalidInput("polynomial dimension does not match samples");
    const TruncationSpec f(constants::kTruncationKappa * std::log(improvement));

    const Vec values = p.evaluate(samples);
    double body = 0.0;
    for (Index i = 0; i < values.size(); ++i) body += values(i) - f.apply(values(i));
    body /= static_cast<double>(values.size());

    // Under N(0, I), p(X) = sum_i lambda_i (Y_i^2 - 1) / sqrt(2) over the eigenvalues of M.
    const Vec lambda = sym_eigendecomp(p.M).values;
    std::vector<double> active;
    for (Index i = 0; i < lambda.size(); ++i)
        if (std::abs(lambda(i)) > 1e-14) active.push_back(lambda(i));
    const long m = chi_squared_tail_samples(epsilon, tau);
    Rng rng = make_rng(seed, 0);
    std::normal_distribution<double> nd;
    double tail = 0.0;
    for (long j = 0; j < m; ++j) {
        double v = 0.0;
        for (double l : active) {
            const double y = nd(rng);
            v += l * (y * y - 1.0);
        }
        tail += f.apply(v / std::sqrt(2.0));
    }
    return body + tail / static_cast<double>(m);
}

double chi_squared_density(double x, int k)
{
    if (x <= 0.0) return 0.0;
    switch (k) {
    case 1: return std::exp(-x / 2.0) / std::sqrt(2.0 * M_PI * x);
    case 2: return std::exp(-x / 2.0) / 2.0;
    case 3: return std::sqrt(x) * std::exp(-x / 2.0) / std::sqrt(2.0 * M_PI);
    default: throw InvalidInput("chi-squared density is provided for 1, 2 or 3 degrees of freedom");
    }
}

}  // namespace rgauss
