#pragma once

#include "rgauss/constants.hpp"

#include <string>

namespace rgauss {

// Desk-scale truncations of quantities that grow with 1/eps.
struct Caps {
    int lowdim = constants::kLowDimCap;     // dim(V') of the mean filter
    int quartic = constants::kQuarticCap;   // polynomials in the degree-4 filter
    int stitch_m = constants::kStitchCap;   // stitching conditioning vectors

    void validate() const;
};

// Which caps actually limited a run.
struct CapUsage {
    bool lowdim = false;
    bool quartic = false;
    bool stitch = false;
    bool cov_subspace = false;  // dim(V) of the degree-2 filter

    void merge(const CapUsage& other);
    bool any() const { return lowdim || quartic || stitch || cov_subspace; }
    // "lowdim;stitch-m", or "" when nothing bound.
    std::string describe() const;
};

// Parses "k=6,lowdim=6,stitch-m=512"; missing keys keep their defaults.
Caps parse_caps(const std::string& text);

}  // namespace rgauss
