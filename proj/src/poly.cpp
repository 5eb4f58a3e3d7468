#include "rgauss/poly.hpp"
#include "rgauss/linalg.hpp"

#include <cmath>

namespace rgauss {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

QuadraticPoly::QuadraticPoly(const Mat& m)
{
    if (m.rows() != m.cols()) throw InvalidInput("quadratic polynomial needs a square matrix");
    M = symmetrize(m);
    const double norm = M.norm();
    if (norm <= 1e-300) throw InvalidInput("quadratic polynomial matrix is zero");
    M /= norm;
}

double QuadraticPoly::operator()(const Vec& x) const
{
    return (x.dot(M * x) - M.trace()) / kSqrt2;
}

Vec QuadraticPoly::evaluate(const Mat& rows) const
{
    const Mat xm = rows * M;
    return ((xm.cwiseProduct(rows)).rowwise().sum().array() - M.trace()).matrix() / kSqrt2;
}

void PolySubspace::validate(double tol) const
{
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if ((basis[i] - basis[i].transpose()).cwiseAbs().maxCoeff() > tol)
            throw InvalidInput("polynomial basis element is not symmetric");
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = (basis[i].array() * basis[j].array()).sum();
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > tol)
                throw InvalidInput("polynomial basis is not orthonormal");
        }
    }
}

Mat PolySubspace::element(const Vec& coeffs) const
{
    if (coeffs.size() != dim()) throw InvalidInput("coefficient count does not match polynomial basis");
    if (basis.empty()) throw InvalidInput("empty polynomial basis has no elements");
    Mat m = Mat::Zero(basis[0].rows(), basis[0].cols());
    for (Index j = 0; j < dim(); ++j) m += coeffs(j) * basis[static_cast<std::size_t>(j)];
    return m;
}

Vec PolySubspace::coefficients(const Mat& m) const
{
    Vec c(dim());
    for (Index j = 0; j < dim(); ++j) c(j) = (basis[static_cast<std::size_t>(j)].array() * m.array()).sum();
    return c;
}

Mat PolySubspace::residual(const Mat& m) const
{
    Mat r = m;
    for (const Mat& b : basis) r -= (b.array() * m.array()).sum() * b;
    return r;
}

PolySubspace PolySubspace::quadratics_on(const Subspace& v)
{
    PolySubspace out;
    const Index k = v.dim();
    for (Index a = 0; a < k; ++a) {
        for (Index b = a; b < k; ++b) {
            const Vec& va = v.basis.col(a);
            const Vec& vb = v.basis.col(b);
            if (a == b)
                out.basis.push_back(va * va.transpose());
            else
                out.basis.push_back((va * vb.transpose() + vb * va.transpose()) / kSqrt2);
        }
    }
    return out;
}

PolySubspace PolySubspace::orthonormalize(const std::vector<Mat>& mats, double tol)
{
    PolySubspace out;
    for (const Mat& m0 : mats) {
        Mat m = symmetrize(m0);
        const double n0 = m.norm();
        if (n0 <= tol) continue;
        for (int pass = 0; pass < 2; ++pass) m = out.residual(m);
        const double n = m.norm();
        if (n <= tol * std::max(1.0, n0)) continue;
        out.basis.push_back(m / n);
    }
    return out;
}

Mat poly_features(const Mat& rows, const PolySubspace& w)
{
    Mat f(rows.rows(), w.dim());
    for (Index j = 0; j < w.dim(); ++j) f.col(j) = QuadraticPoly(w.basis[static_cast<std::size_t>(j)]).evaluate(rows);
    return f;
}

Mat canonical_quadratic_features(const Mat& y)
{
    const Index n = y.rows();
    const Index k = y.cols();
    Mat f(n, k * (k + 1) / 2);
    Index col = 0;
    for (Index a = 0; a < k; ++a) {
        for (Index b = a; b < k; ++b, ++col) {
            if (a == b)
                f.col(col) = (y.col(a).array().square() - 1.0).matrix() / kSqrt2;
            else
                f.col(col) = y.col(a).cwiseProduct(y.col(b));
        }
    }
    return f;
}

}  // namespace rgauss
