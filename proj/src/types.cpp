#include "rgauss/types.hpp"
#include "rgauss/linalg.hpp"

#include <cmath>

namespace rgauss {

void GaussianParams::validate() const
{
    if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
        throw InvalidInput("covariance shape does not match mean length");
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidInput("covariance is not symmetric");
    if (mean.size() == 0) return;
    const SymEigen e = sym_eigendecomp(covariance);
    if (e.values(0) < -1e-10 * std::max(1.0, e.values.cwiseAbs().maxCoeff()))
        throw InvalidInput("covariance has a negative eigenvalue");
}

Subspace::Subspace(Mat b) : basis(std::move(b)) {}

Subspace Subspace::zero(Index d) { return Subspace(Mat(d, 0)); }

Subspace Subspace::full(Index d) { return Subspace(Mat::Identity(d, d)); }

Subspace Subspace::orthonormalize(const Mat& columns, double tol)
{
    Mat q(columns.rows(), 0);
    for (Index j = 0; j < columns.cols(); ++j) {
        Vec v = columns.col(j);
        const double norm0 = v.norm();
        if (norm0 <= tol) continue;
        for (int pass = 0; pass < 2; ++pass)
            if (q.cols() > 0) v -= q * (q.transpose() * v);
        const double norm = v.norm();
        if (norm <= tol * std::max(1.0, norm0)) continue;
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = v / norm;
    }
    return Subspace(q);
}

Subspace Subspace::complement() const
{
    const Index d = ambient_dim();
    if (dim() == 0) return full(d);
    if (dim() == d) return zero(d);
    // Null space of basis^T from the eigenvectors of the projector.
    const SymEigen e = sym_eigendecomp(projector());
    Mat comp(d, d - dim());
    for (Index j = 0; j < d - dim(); ++j) comp.col(j) = e.vectors.col(j);
    return orthonormalize(comp);
}

void Subspace::validate(double tol) const
{
    if (dim() > ambient_dim()) throw InvalidInput("subspace dimension exceeds ambient dimension");
    if (dim() == 0) return;
    const Mat g = basis.transpose() * basis;
    if ((g - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff() > tol)
        throw InvalidInput("subspace basis is not orthonormal");
}

FlatMatrix flatten(const Mat& m)
{
    if (m.rows() != m.cols()) throw InvalidInput("flatten expects a square matrix");
    FlatMatrix f;
    f.side = m.rows();
    f.vec.resize(m.size());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) f.vec(i * m.cols() + j) = m(i, j);
    return f;
}

Mat sharpen(const Vec& v)
{
    const auto side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (side * side != v.size()) throw InvalidInput("flattened length is not a perfect square");
    Mat m(side, side);
    for (Index i = 0; i < side; ++i)
        for (Index j = 0; j < side; ++j) m(i, j) = v(i * side + j);
    return m;
}

Mat sharpen(const FlatMatrix& v)
{
    if (v.side * v.side != v.vec.size()) throw InvalidInput("flattened length does not match side");
    return sharpen(v.vec);
}

Mat select_rows(const Mat& x, const RowSet& rows)
{
    Mat out(static_cast<Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
    return out;
}

RowSet all_rows(Index n)
{
    RowSet r(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = i;
    return r;
}

RowSet compose_rows(const RowSet& subset, const RowSet& relative)
{
    RowSet out;
    out.reserve(relative.size());
    for (Index i : relative) out.push_back(subset[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace rgauss
