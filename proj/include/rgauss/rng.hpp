#pragma once

#include "rgauss/types.hpp"

#include <cstdint>
#include <random>

namespace rgauss {

using Rng = std::mt19937_64;

// splitmix64 finaliser; used to derive independent child streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    return Rng(mix_seed(seed, stream));
}

Mat standard_normal(Index rows, Index cols, Rng& rng);
Vec standard_normal(Index n, Rng& rng);
Vec random_unit_vector(Index k, Rng& rng);
// Uniform random permutation of 0..n-1.
RowSet random_permutation(Index n, Rng& rng);

}  // namespace rgauss
