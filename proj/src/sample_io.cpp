#include "rgauss/sample_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace rgauss {

namespace {

static_assert(std::endian::native == std::endian::little, "binary sample format assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v)
{
    std::array<char, 4> b{};
    std::memcpy(b.data(), &v, 4);
    out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in)
{
    std::array<char, 4> b{};
    if (!in.read(b.data(), 4)) throw InvalidInput("truncated sample header");
    std::uint32_t v = 0;
    std::memcpy(&v, b.data(), 4);
    return v;
}

double parse_double(const std::string& field, std::size_t line)
{
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first < last && (*first == ' ' || *first == '"')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '"' || last[-1] == '\r')) --last;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw InvalidInput("line " + std::to_string(line) + ": cannot parse number '" + field + "'");
    return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode)
{
    std::ofstream out(path, mode);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode)
{
    std::ifstream in(path, mode);
    if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

void write_samples_binary(std::ostream& out, const Mat& samples)
{
    out.write("RGSS", 4);
    put_u32(out, static_cast<std::uint32_t>(samples.rows()));
    put_u32(out, static_cast<std::uint32_t>(samples.cols()));
    for (Index i = 0; i < samples.rows(); ++i)
        for (Index j = 0; j < samples.cols(); ++j) {
            const double v = samples(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
    if (!out) throw InvalidInput("failed writing binary samples");
}

Mat read_samples_binary(std::istream& in)
{
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), 4) || std::memcmp(magic.data(), "RGSS", 4) != 0)
        throw InvalidInput("not an RGSS sample file");
    const std::uint32_t n = get_u32(in);
    const std::uint32_t d = get_u32(in);
    Mat x(n, d);
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) {
            double v = 0.0;
            if (!in.read(reinterpret_cast<char*>(&v), sizeof(double))) throw InvalidInput("truncated sample payload");
            x(i, j) = v;
        }
    return x;
}

void write_samples_binary(const std::string& path, const Mat& samples)
{
    auto out = open_out(path, std::ios::binary);
    write_samples_binary(out, samples);
}

Mat read_samples_binary(const std::string& path)
{
    auto in = open_in(path, std::ios::binary);
    try {
        return read_samples_binary(in);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_samples_csv(std::ostream& out, const Mat& samples, const std::vector<std::uint8_t>& labels)
{
    if (!labels.empty() && static_cast<Index>(labels.size()) != samples.rows())
        throw InvalidInput("label count does not match row count");
    for (Index i = 0; i < samples.rows(); ++i) {
        for (Index j = 0; j < samples.cols(); ++j) {
            if (j) out << ',';
            out << format_double(samples(i, j));
        }
        if (!labels.empty()) out << ',' << static_cast<int>(labels[static_cast<std::size_t>(i)] ? 1 : 0);
        out << '\n';
    }
    if (!out) throw InvalidInput("failed writing CSV samples");
}

LabeledSamples read_samples_csv(std::istream& in, bool labeled)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            row.push_back(parse_double(line.substr(start, comma - start), lineno));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows[0].size())
            throw InvalidInput("line " + std::to_string(lineno) + ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    LabeledSamples out;
    if (rows.empty()) return out;
    const std::size_t width = rows[0].size() - (labeled ? 1 : 0);
    if (labeled && rows[0].size() < 2) throw InvalidInput("labeled CSV needs at least one data column");
    out.samples.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) out.samples(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        if (labeled) {
            const double tag = rows[i][width];
            if (tag != 0.0 && tag != 1.0) throw InvalidInput("label column must hold 0 or 1");
            out.labels.push_back(tag == 1.0 ? 1 : 0);
        }
    }
    return out;
}

void write_samples_csv(const std::string& path, const Mat& samples, const std::vector<std::uint8_t>& labels)
{
    auto out = open_out(path, std::ios::out);
    write_samples_csv(out, samples, labels);
}

LabeledSamples read_samples_csv(const std::string& path, bool labeled)
{
    auto in = open_in(path, std::ios::in);
    try {
        return read_samples_csv(in, labeled);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

}  // namespace rgauss
