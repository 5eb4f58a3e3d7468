#pragma once

#include "rgauss/types.hpp"

namespace rgauss {

struct SymEigen {
    Vec values;   // ascending
    Mat vectors;  // orthonormal columns, one per eigenvalue
};

// Each eigenvector is sign-normalised so that its largest-magnitude entry is
// positive, which makes the output deterministic for simple eigenvalues.
SymEigen sym_eigendecomp(const Mat& a);

// Eigenvalues >= -1e-10 * |A|_2 are clamped to zero; anything more negative throws.
Mat psd_clamp(const Mat& a);
Mat psd_sqrt(const Mat& a);
// Requires strictly positive eigenvalues after clamping.
Mat psd_inv_sqrt(const Mat& a);

double spectral_norm(const Mat& a);
Mat symmetrize(const Mat& a);

}  // namespace rgauss
