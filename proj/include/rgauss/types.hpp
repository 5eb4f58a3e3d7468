#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgauss {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;
using RowSet = std::vector<Index>;

// Error taxonomy. The CLI maps these onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

// A certified-good sample set would never trigger this: empty slab bodies,
// infeasible constraint programs, filters that cannot find a threshold.
class GoodnessViolation : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

struct GaussianParams {
    Vec mean;
    Mat covariance;

    Index dim() const { return mean.size(); }
    // Throws InvalidInput on shape mismatch, asymmetry or a negative eigenvalue.
    void validate() const;
};

// Orthonormal basis stored column-wise (ambient_dim x dim).
struct Subspace {
    Mat basis;

    Subspace() = default;
    explicit Subspace(Mat b);

    Index ambient_dim() const { return basis.rows(); }
    Index dim() const { return basis.cols(); }

    static Subspace zero(Index d);
    static Subspace full(Index d);
    // Gram-Schmidt on the columns; near-dependent columns are dropped.
    static Subspace orthonormalize(const Mat& columns, double tol = 1e-10);

    Subspace complement() const;
    Mat projector() const { return basis * basis.transpose(); }
    // Rows of x expressed in subspace coordinates.
    Mat coords(const Mat& rows) const { return rows * basis; }
    void validate(double tol = 1e-10) const;
};

// Row-major flattening of a square matrix.
struct FlatMatrix {
    Vec vec;
    Index side = 0;
};

FlatMatrix flatten(const Mat& m);
Mat sharpen(const FlatMatrix& v);
Mat sharpen(const Vec& v);

Mat select_rows(const Mat& x, const RowSet& rows);
RowSet all_rows(Index n);
// Maps indices that are relative to `subset` back into the parent numbering.
RowSet compose_rows(const RowSet& subset, const RowSet& relative);

}  // namespace rgauss
