#include "rgauss/rng.hpp"

#include <algorithm>

namespace rgauss {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Mat standard_normal(Index rows, Index cols, Rng& rng)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat z(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) z(i, j) = nd(rng);
    return z;
}

Vec standard_normal(Index n, Rng& rng)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec z(n);
    for (Index i = 0; i < n; ++i) z(i) = nd(rng);
    return z;
}

Vec random_unit_vector(Index k, Rng& rng)
{
    for (;;) {
        Vec v = standard_normal(k, rng);
        const double norm = v.norm();
        if (norm > 1e-12) return v / norm;
    }
}

RowSet random_permutation(Index n, Rng& rng)
{
    RowSet p = all_rows(n);
    // Fisher-Yates with an explicit uniform draw keeps the result independent
    // of the standard library's shuffle implementation.
    for (Index i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<Index> pick(0, i);
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(pick(rng))]);
    }
    return p;
}

}  // namespace rgauss
