#include "rgauss/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rgauss {

SymEigen sym_eigendecomp(const Mat& a)
{
    if (a.rows() != a.cols()) throw InvalidInput("eigendecomposition needs a square matrix");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidInput("eigendecomposition needs a symmetric matrix");
    SymEigen out;
    if (a.rows() == 0) {
        out.values = Vec(0);
        out.vectors = Mat(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrize(a));
    if (solver.info() != Eigen::Success) throw InternalError("symmetric eigensolver did not converge");
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    for (Index j = 0; j < out.vectors.cols(); ++j) {
        Index arg = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
        if (out.vectors(arg, j) < 0) out.vectors.col(j) *= -1.0;
    }
    return out;
}

namespace {

Vec clamped_values(const SymEigen& e)
{
    const double norm = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
    Vec v = e.values;
    for (Index i = 0; i < v.size(); ++i) {
        if (v(i) < -1e-10 * norm) throw InvalidInput("matrix is not positive semidefinite");
        if (v(i) < 0) v(i) = 0;
    }
    return v;
}

}  // namespace

Mat psd_clamp(const Mat& a)
{
    const SymEigen e = sym_eigendecomp(a);
    const Vec v = clamped_values(e);
    return e.vectors * v.asDiagonal() * e.vectors.transpose();
}

Mat psd_sqrt(const Mat& a)
{
    const SymEigen e = sym_eigendecomp(a);
    const Vec v = clamped_values(e).cwiseSqrt();
    return e.vectors * v.asDiagonal() * e.vectors.transpose();
}

Mat psd_inv_sqrt(const Mat& a)
{
    const SymEigen e = sym_eigendecomp(a);
    Vec v = clamped_values(e);
    for (Index i = 0; i < v.size(); ++i) {
        if (v(i) <= 0) throw InvalidInput("matrix is singular, cannot whiten");
        v(i) = 1.0 / std::sqrt(v(i));
    }
    return e.vectors * v.asDiagonal() * e.vectors.transpose();
}

double spectral_norm(const Mat& a)
{
    if (a.size() == 0) return 0.0;
    if (a.rows() == a.cols() && (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
        return sym_eigendecomp(a).values.cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace rgauss
