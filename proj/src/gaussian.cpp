#include "rgauss/gaussian.hpp"
#include "rgauss/linalg.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace rgauss {

Mat sample_gaussian(const GaussianParams& params, Index n, Rng& rng)
{
    if (n < 1) throw InvalidInput("sample count must be positive");
    params.validate();
    const Mat root = psd_sqrt(params.covariance);
    Mat x = standard_normal(n, params.dim(), rng) * root;
    x.rowwise() += params.mean.transpose();
    return x;
}

Mat sample_gaussian(const GaussianParams& params, Index n, std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return sample_gaussian(params, n, rng);
}

Moments empirical_moments(const Mat& samples, const std::optional<Vec>& center)
{
    const Index n = samples.rows();
    if (n < 2) throw InvalidInput("empirical moments need at least two rows");
    Moments out;
    if (center) {
        if (center->size() != samples.cols()) throw InvalidInput("center length does not match sample width");
        out.mean = *center;
        const Mat c = samples.rowwise() - center->transpose();
        out.matrix = (c.transpose() * c) / static_cast<double>(n);
    } else {
        out.mean = samples.colwise().mean().transpose();
        const Mat c = samples.rowwise() - out.mean.transpose();
        out.matrix = (c.transpose() * c) / static_cast<double>(n - 1);
    }
    return out;
}

Mat second_moment(const Mat& samples)
{
    if (samples.rows() < 1) throw InvalidInput("second moment needs at least one row");
    Mat m(samples.cols(), samples.cols());
    m.setZero();
    m.selfadjointView<Eigen::Lower>().rankUpdate(samples.transpose());
    m = m.selfadjointView<Eigen::Lower>();
    return m / static_cast<double>(samples.rows());
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput("normal quantile needs p in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double chi_squared_sf(double x, double dof)
{
    if (x <= 0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double tv_identity_cov(const Vec& mu1, const Vec& mu2)
{
    if (mu1.size() != mu2.size()) throw InvalidInput("mean vectors differ in length");
    const double gap = (mu1 - mu2).norm();
    // 2 Phi(g/2) - 1 = erf(g / (2 sqrt 2)); erf keeps precision for small gaps.
    return std::erf(gap / (2.0 * std::sqrt(2.0)));
}

Mat fourth_moment_operator(const Mat& sigma)
{
    const Index d = sigma.rows();
    if (sigma.cols() != d) throw InvalidInput("fourth moment operator needs a square matrix");
    const Index dd = d * d;
    Mat op(dd, dd);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k)
                for (Index l = 0; l < d; ++l) op(i * d + j, k * d + l) = 2.0 * sigma(i, k) * sigma(j, l);
    const Vec s = flatten(sigma).vec;
    op += s * s.transpose();
    return op;
}

namespace {

void require_unit(const Mat& m)
{
    if (m.rows() != m.cols()) throw InvalidInput("polynomial matrix must be square");
    if (std::abs(m.norm() - 1.0) > 1e-9) throw InvalidInput("polynomial matrix must have unit Frobenius norm");
}

}  // namespace

double poly_expectation(const Mat& m, const Mat& sigma)
{
    require_unit(m);
    return (m.array() * (sigma - Mat::Identity(sigma.rows(), sigma.cols())).array()).sum();
}

double poly_second_moment(const Mat& m, const Mat& sigma)
{
    require_unit(m);
    const double quad = (m * sigma * m * sigma).trace();
    const double lin = poly_expectation(m, sigma);
    return quad + 0.5 * lin * lin;
}

QuadraticPoly top_variance_poly(const Mat& op, const PolySubspace& constraint)
{
    if (constraint.empty()) throw InvalidInput("constraint subspace is empty");
    const Index dd = constraint.basis[0].size();
    if (op.rows() != dd || op.cols() != dd) throw InvalidInput("operator size does not match constraint matrices");
    const Index k = constraint.dim();
    Mat flat(dd, k);
    for (Index j = 0; j < k; ++j) flat.col(j) = flatten(constraint.basis[static_cast<std::size_t>(j)]).vec;
    const Mat reduced = symmetrize(flat.transpose() * op * flat);
    const SymEigen e = sym_eigendecomp(reduced);
    return QuadraticPoly(constraint.element(e.vectors.col(k - 1)));
}

}  // namespace rgauss
