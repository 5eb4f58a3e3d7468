#include "rgauss/caps.hpp"
#include "rgauss/types.hpp"

#include <charconv>
#include <sstream>

namespace rgauss {

void Caps::validate() const
{
    if (lowdim < 1 || lowdim > constants::kMaxSubspaceCap) throw InvalidInput("lowdim cap out of range");
    if (quartic < 1) throw InvalidInput("k cap must be at least 1");
    if (stitch_m < 1) throw InvalidInput("stitch-m cap must be at least 1");
}

void CapUsage::merge(const CapUsage& other)
{
    lowdim |= other.lowdim;
    quartic |= other.quartic;
    stitch |= other.stitch;
    cov_subspace |= other.cov_subspace;
}

std::string CapUsage::describe() const
{
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += ';';
        out += name;
    };
    add(lowdim, "lowdim");
    add(cov_subspace, "cov-subspace");
    add(quartic, "k");
    add(stitch, "stitch-m");
    return out;
}

Caps parse_caps(const std::string& text)
{
    Caps caps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidInput("cap '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        int v = 0;
        const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
        if (res.ec != std::errc() || res.ptr != val.data() + val.size())
            throw InvalidInput("cap '" + key + "' needs an integer value");
        if (key == "k")
            caps.quartic = v;
        else if (key == "lowdim")
            caps.lowdim = v;
        else if (key == "stitch-m")
            caps.stitch_m = v;
        else
            throw InvalidInput("unknown cap '" + key + "'");
    }
    caps.validate();
    return caps;
}

}  // namespace rgauss
