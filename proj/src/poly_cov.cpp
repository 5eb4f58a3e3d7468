#include "rgauss/poly_cov.hpp"
#include "rgauss/constants.hpp"
#include "rgauss/gaussian.hpp"
#include "rgauss/linalg.hpp"
#include "rgauss/lowdim_mean.hpp"
#include "rgauss/rng.hpp"
#include "rgauss/univariate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace rgauss {

namespace {

Mat greedy_cover(int dim, double radius)
{
    if (dim == 1) {
        Mat c(2, 1);
        c << 1.0, -1.0;
        return c;
    }
    Rng rng = make_rng(0xc0feeULL, static_cast<std::uint64_t>(dim));
    Mat probes = standard_normal(constants::kNetProbes, dim, rng);
    probes.rowwise().normalize();
    const double target = constants::kNetSafety * radius;
    Vec mind = Vec::Constant(probes.rows(), std::numeric_limits<double>::infinity());
    std::vector<Index> chosen;
    Index next = 0;
    while (true) {
        chosen.push_back(next);
        mind = mind.cwiseMin((probes.rowwise() - probes.row(next)).rowwise().norm());
        Index far = 0;
        if (mind.maxCoeff(&far) <= target) break;
        next = far;
    }
    Mat out(static_cast<Index>(chosen.size()), dim);
    for (std::size_t i = 0; i < chosen.size(); ++i) out.row(static_cast<Index>(i)) = probes.row(chosen[i]);
    return out;
}

double inner(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

struct ChiSlabs {
    SlabBody body;
    Vec coefficients;  // y_j = <B_j, Sigma' - I>
    double half_width = 0.0;
};

// Chi-squared mean estimates of every cover polynomial, as slabs on the
// coefficient vector y of Sigma' - I; returns a feasible y near the least-squares fit.
ChiSlabs chi_squared_slabs(const Mat& features, const Mat& reference_features, const Mat& cover, double epsilon,
                           double sigma_gap, double tau)
{
    const double c = constants::kImprovementC;
    const TruncationSpec f(constants::kTruncationKappa * std::log(c));
    const Index n = features.rows();
    const Index m = reference_features.rows();
    ChiSlabs out;
    out.body.directions = cover;
    out.body.centers.resize(cover.rows());
    for (Index i = 0; i < cover.rows(); ++i) {
        const Vec vals = features * cover.row(i).transpose();
        const Vec ref = reference_features * cover.row(i).transpose();
        double body = 0.0;
        for (Index r = 0; r < n; ++r) body += vals(r) - f.apply(vals(r));
        double tail = 0.0;
        for (Index r = 0; r < m; ++r) tail += f.apply(ref(r));
        out.body.centers(i) = std::sqrt(2.0) * (body / static_cast<double>(n) + tail / static_cast<double>(m));
    }
    const double z = std::sqrt(2.0 * std::log(2.0 * static_cast<double>(cover.rows()) / tau));
    out.half_width = constants::kChiSlabFactor * std::log(c) * epsilon + sigma_gap / c +
                     z * (1.0 / std::sqrt(static_cast<double>(m)) + 1.0 / std::sqrt(static_cast<double>(n)));
    out.body.half_width = std::sqrt(2.0) * out.half_width;
    const Vec start = cover.colPivHouseholderQr().solve(out.body.centers);
    out.coefficients = proj_oracle(out.body, start);
    return out;
}

}  // namespace

std::shared_ptr<const Mat> coefficient_cover(int dim, double radius)
{
    if (dim < 1 || dim > constants::kPolyCap) throw InvalidInput("polynomial cover dimension outside [1, cap]");
    if (!(radius > 0.0 && radius < 1.0)) throw InvalidInput("cover radius must lie in (0, 1)");
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const Mat>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{dim, radius}];
    if (!slot) slot = std::make_shared<const Mat>(greedy_cover(dim, radius));
    return slot;
}

std::vector<QuadraticPoly> poly_cover(const PolySubspace& w, double radius)
{
    if (w.empty()) return {};
    const auto cover = coefficient_cover(static_cast<int>(w.dim()), radius);
    std::vector<QuadraticPoly> out;
    out.reserve(static_cast<std::size_t>(cover->rows()));
    for (Index i = 0; i < cover->rows(); ++i) out.emplace_back(w.element(cover->row(i).transpose()));
    return out;
}

double HarmonicSplit::p_squared(const Vec& x) const
{
    const double v = p(x);
    return v * v;
}

double HarmonicSplit::r(const Vec& x) const { return x.dot(r_matrix * x) + r_constant; }

double HarmonicSplit::q(const Vec& x) const { return p_squared(x) - r(x); }

HarmonicSplit harmonic_split(const QuadraticPoly& p)
{
    HarmonicSplit s;
    s.p = p;
    const Mat a2 = p.M * p.M;
    s.r_matrix = 2.0 * a2;
    s.r_constant = 1.0 - 2.0 * a2.trace();
    return s;
}

double QuarticHarmonic::operator()(const Vec& x) const
{
    double total = 0.0;
    for (const auto& p : source) total += harmonic_split(p).q(x);
    return total;
}

Vec QuarticHarmonic::evaluate(const Mat& rows) const
{
    Vec out = Vec::Zero(rows.rows());
    for (const auto& p : source) {
        const Vec v = p.evaluate(rows);
        const Mat a2 = p.M * p.M;
        const Vec quad = ((rows * a2).array() * rows.array()).rowwise().sum();
        out.array() += v.array().square() - (2.0 * quad.array() + 1.0 - 2.0 * a2.trace());
    }
    return out;
}

double quartic_norm(const std::vector<QuadraticPoly>& ps)
{
    double total = 0.0;
    for (const auto& pi : ps)
        for (const auto& pj : ps) {
            const double g = inner(pi.M, pj.M);
            const Mat ab = pi.M * pj.M;
            total += 2.0 * (g * g + 2.0 * (ab * ab).trace());
        }
    return std::sqrt(std::max(0.0, total));
}

double hanson_wright_bound(const Mat& a, double t)
{
    if (t < 0.0) throw InvalidInput("deviation must be non-negative");
    const double fro = a.norm();
    const double op = spectral_norm(a);
    if (fro == 0.0) return t > 0.0 ? 0.0 : 2.0;
    return 2.0 * std::exp(-constants::kHansonWrightC0 * std::min(t * t / (fro * fro), t / op));
}

double hypercontractive_bound(double t)
{
    if (t < constants::kHypercontractiveOnset) return 1.0;
    return std::exp(-constants::kHypercontractiveA * std::sqrt(t));
}

PolyMeanReport learn_mean_poly_low_d(const Mat& samples, double epsilon, const PolySubspace& w1,
                                     const PolySubspace& w2, const Mat& sigma_hat, double xi, double tau,
                                     std::uint64_t seed)
{
    const Index d = samples.cols();
    if (sigma_hat.rows() != d || sigma_hat.cols() != d) throw InvalidInput("sigma_hat does not match sample width");
    if (samples.rows() == 0) throw InvalidInput("empty sample set");
    if (xi < 0.0) throw InvalidInput("accuracy must be non-negative");
    if (w1.dim() > constants::kPolyCap) throw InvalidInput("polynomial subspace above the cover cap");
    for (const Mat& a : w1.basis)
        for (const Mat& b : w2.basis)
            if (std::abs(inner(a, b)) > 1e-8) throw InvalidInput("W1 and W2 must be orthogonal");
    PolyMeanReport out;
    out.sigma = sigma_hat;
    if (w1.empty()) return out;

    const auto cover = coefficient_cover(static_cast<int>(w1.dim()), constants::kPolyCoverRadius);
    const long m = chi_squared_tail_samples(epsilon, tau / static_cast<double>(cover->rows()));
    Rng rng = make_rng(seed, 0);
    const Mat reference = standard_normal(static_cast<Index>(m), d, rng);
    const Mat id = Mat::Identity(d, d);
    const ChiSlabs slabs = chi_squared_slabs(poly_features(samples, w1), poly_features(reference, w1), *cover, epsilon,
                                             (sigma_hat - id).norm(), tau);
    for (Index j = 0; j < w1.dim(); ++j) {
        const Mat& b = w1.basis[static_cast<std::size_t>(j)];
        out.sigma += (slabs.coefficients(j) - inner(b, sigma_hat - id)) * b;
    }
    out.sigma = symmetrize(out.sigma);
    out.cover_size = cover->rows();
    out.slab_half_width = slabs.half_width;
    return out;
}

Mat learn_cov_low_dim(const Mat& samples, double epsilon, double xi, double tau, const Subspace& v, std::uint64_t seed)
{
    if (samples.cols() != v.ambient_dim()) throw InvalidInput("subspace does not match sample width");
    if (xi < 0.0) throw InvalidInput("accuracy must be non-negative");
    const Index k = v.dim();
    if (k == 0) return Mat(0, 0);
    if (k * (k + 1) / 2 > constants::kPolyCap) throw InvalidInput("subspace too large for the polynomial cover");
    // Quadratics on V only see V's coordinates, so work there directly.
    const Mat y = v.coords(samples);
    const auto cover = coefficient_cover(static_cast<int>(k * (k + 1) / 2), constants::kPolyCoverRadius);
    const long m = chi_squared_tail_samples(epsilon, tau / static_cast<double>(cover->rows()));
    Rng rng = make_rng(seed, 0);
    const Mat reference = standard_normal(static_cast<Index>(m), k, rng);
    const Mat block_hat = second_moment(y);
    const ChiSlabs slabs = chi_squared_slabs(canonical_quadratic_features(y), canonical_quadratic_features(reference),
                                             *cover, epsilon, (block_hat - Mat::Identity(k, k)).norm(), tau);
    const PolySubspace basis = PolySubspace::quadratics_on(Subspace::full(k));
    Mat out = Mat::Identity(k, k);
    for (Index j = 0; j < basis.dim(); ++j) out += slabs.coefficients(j) * basis.basis[static_cast<std::size_t>(j)];
    return symmetrize(out);
}

}  // namespace rgauss
