#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "dsbsvd/matrix.hpp"

namespace dsb {

enum class FileFormat { csv, bin };

inline FileFormat parse_format(const std::string& s) {
    if (s == "csv") return FileFormat::csv;
    if (s == "bin") return FileFormat::bin;
    throw ConfigError("unknown matrix format '" + s + "' (expected csv or bin)");
}

namespace io_detail {

// Binary layout: "DSBM", version byte 1, element-width byte (4 or 8),
// rows and cols as 64-bit little-endian unsigned, then row-major
// little-endian IEEE-754 values.
inline constexpr std::array<char, 4> kMagic = {'D', 'S', 'B', 'M'};
inline constexpr std::uint8_t kVersion = 1;

inline void put_u64le(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}

inline std::uint64_t get_u64le(std::istream& is) {
    std::array<unsigned char, 8> b;
    is.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

template <typename T>
void put_scalar_le(std::ostream& os, T v) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits;
    std::memcpy(&bits, &v, sizeof(T));
    std::array<char, sizeof(T)> b;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(b.data(), sizeof(T));
}

template <typename T>
T get_scalar_le(std::istream& is) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<unsigned char, sizeof(T)> b;
    is.read(reinterpret_cast<char*>(b.data()), sizeof(T));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bits |= static_cast<U>(b[i]) << (8 * i);
    T v;
    std::memcpy(&v, &bits, sizeof(T));
    return v;
}

// 17 significant decimal digits round-trips any double exactly
template <typename T>
std::string format_scalar(T v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(v));
    return buf;
}

}  // namespace io_detail

template <typename T = double>
Matrix<T> read_matrix_csv(std::istream& is, const std::string& name = "<stream>") {
    std::vector<T> data;
    std::size_t cols = 0, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() && is.peek() == EOF) break;  // trailing newline
        std::size_t n_fields = 0;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) {
            ++n_fields;
            try {
                std::size_t pos = 0;
                double v = std::stod(field, &pos);
                while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
                if (pos != field.size()) throw std::invalid_argument(field);
                data.push_back(static_cast<T>(v));
            } catch (const std::exception&) {
                throw ParseError(name + ":" + std::to_string(line_no) +
                                 ": cannot parse value '" + field + "'");
            }
        }
        if (rows == 0) {
            cols = n_fields;
        } else if (n_fields != cols) {
            throw ParseError(name + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(cols) + " fields, got " +
                             std::to_string(n_fields));
        }
        ++rows;
    }
    if (rows == 0 || cols == 0) throw ParseError(name + ": empty matrix");
    Matrix<T> m(rows, cols, std::move(data));
    if (!m.all_finite()) throw ValidationError(name + ": non-finite value in matrix");
    return m;
}

template <typename T>
void write_matrix_csv(const Matrix<T>& m, std::ostream& os) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << io_detail::format_scalar(m(i, j));
        }
        os << '\n';
    }
}

template <typename T = double>
Matrix<T> read_matrix_bin(std::istream& is, const std::string& name = "<stream>") {
    std::array<char, 4> magic;
    is.read(magic.data(), 4);
    if (!is || magic != io_detail::kMagic)
        throw ParseError(name + ": bad magic (not a DSBM file)");
    char version = 0, width = 0;
    is.get(version).get(width);
    if (version != io_detail::kVersion)
        throw ParseError(name + ": unsupported format version " + std::to_string(version));
    if (static_cast<std::size_t>(width) != sizeof(T))
        throw ParseError(name + ": element width " + std::to_string(width) +
                         " does not match requested precision " + std::to_string(sizeof(T)));
    std::uint64_t rows = io_detail::get_u64le(is);
    std::uint64_t cols = io_detail::get_u64le(is);
    if (!is || rows == 0 || cols == 0)
        throw ParseError(name + ": bad header dimensions");
    std::vector<T> data;
    data.reserve(rows * cols);
    for (std::uint64_t k = 0; k < rows * cols; ++k)
        data.push_back(io_detail::get_scalar_le<T>(is));
    if (!is) throw ParseError(name + ": truncated data section");
    Matrix<T> m(rows, cols, std::move(data));
    if (!m.all_finite()) throw ValidationError(name + ": non-finite value in matrix");
    return m;
}

template <typename T>
void write_matrix_bin(const Matrix<T>& m, std::ostream& os) {
    os.write(io_detail::kMagic.data(), 4);
    os.put(static_cast<char>(io_detail::kVersion));
    os.put(static_cast<char>(sizeof(T)));
    io_detail::put_u64le(os, m.rows());
    io_detail::put_u64le(os, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            io_detail::put_scalar_le(os, m(i, j));
}

template <typename T = double>
Matrix<T> read_matrix(const std::string& path, FileFormat fmt) {
    std::ifstream f(path, fmt == FileFormat::bin ? std::ios::binary : std::ios::in);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return fmt == FileFormat::csv ? read_matrix_csv<T>(f, path)
                                  : read_matrix_bin<T>(f, path);
}

template <typename T>
void write_matrix(const Matrix<T>& m, const std::string& path, FileFormat fmt) {
    std::ofstream f(path, fmt == FileFormat::bin ? std::ios::binary : std::ios::out);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    if (fmt == FileFormat::csv)
        write_matrix_csv(m, f);
    else
        write_matrix_bin(m, f);
    if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace dsb
