#pragma once

#include "rgauss/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rgauss {

// Binary layout, little-endian: "RGSS", u32 n, u32 d, n*d float64 row-major.
void write_samples_binary(std::ostream& out, const Mat& samples);
Mat read_samples_binary(std::istream& in);
void write_samples_binary(const std::string& path, const Mat& samples);
Mat read_samples_binary(const std::string& path);

struct LabeledSamples {
    Mat samples;
    std::vector<std::uint8_t> labels;  // empty when unlabeled; 1 marks an adversarial row
};

// One row per sample, '.' decimal point regardless of locale, shortest
// round-trip formatting. A labeled set gets a trailing 0/1 column.
void write_samples_csv(std::ostream& out, const Mat& samples, const std::vector<std::uint8_t>& labels = {});
LabeledSamples read_samples_csv(std::istream& in, bool labeled);
void write_samples_csv(const std::string& path, const Mat& samples, const std::vector<std::uint8_t>& labels = {});
LabeledSamples read_samples_csv(const std::string& path, bool labeled);

// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::string format_double(double x);

}  // namespace rgauss
