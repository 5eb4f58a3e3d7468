#pragma once

#include "rgauss/types.hpp"

#include <vector>

namespace rgauss {

// p(x) = (x^T M x - tr M) / sqrt(2) for a symmetric, unit-Frobenius M.
// Under N(0, I) such a polynomial has mean 0 and variance 1.
struct QuadraticPoly {
    Mat M;

    QuadraticPoly() = default;
    // Symmetrises and rescales to unit Frobenius norm; a zero matrix is rejected.
    explicit QuadraticPoly(const Mat& m);

    Index dim() const { return M.rows(); }
    double operator()(const Vec& x) const;
    Vec evaluate(const Mat& rows) const;
};

// Symmetric matrices, orthonormal under the trace inner product.
struct PolySubspace {
    std::vector<Mat> basis;

    Index dim() const { return static_cast<Index>(basis.size()); }
    bool empty() const { return basis.empty(); }
    void validate(double tol = 1e-9) const;

    Mat element(const Vec& coeffs) const;
    Vec coefficients(const Mat& m) const;
    // Removes the component lying in this span.
    Mat residual(const Mat& m) const;

    // Orthonormal basis of all symmetric matrices supported on V, ordered as
    // (0,0), (0,1), ..., (0,k-1), (1,1), (1,2), ... in V's coordinates.
    static PolySubspace quadratics_on(const Subspace& v);
    static PolySubspace orthonormalize(const std::vector<Mat>& mats, double tol = 1e-10);
};

// Column j holds the associated polynomial of basis element j evaluated at each row.
Mat poly_features(const Mat& rows, const PolySubspace& w);

// Features for PolySubspace::quadratics_on(Subspace::full(k)) at coordinate rows y:
// (y_a^2 - 1)/sqrt(2) on the diagonal slots and y_a * y_b off the diagonal.
Mat canonical_quadratic_features(const Mat& y);

}  // namespace rgauss
