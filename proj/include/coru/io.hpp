#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "coru/matrix.hpp"

namespace coru {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MatrixFileFormat { csv, bin };

/// ".bin" selects the binary format; anything else is CSV.
inline MatrixFileFormat infer_format(std::string_view path) {
    return path.size() >= 4 && path.substr(path.size() - 4) == ".bin" ? MatrixFileFormat::bin
                                                                      : MatrixFileFormat::csv;
}

/// Shortest text representation that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

inline void put_u64le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_u64le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    return v;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

/// Binary matrix format: magic "CORU", rows and cols as 64-bit little-endian
/// unsigned integers, then rows·cols doubles little-endian, row-major.
inline void write_matrix_bin(const std::string& path, const Matrix& m) {
    std::string out;
    out.reserve(20 + 8 * m.size());
    out += "CORU";
    detail::put_u64le(out, m.rows());
    detail::put_u64le(out, m.cols());
    for (double x : m.data()) detail::put_u64le(out, std::bit_cast<std::uint64_t>(x));
    detail::write_file(path, out);
}

inline Matrix read_matrix_bin(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    if (bytes.size() < 20 || bytes.compare(0, 4, "CORU") != 0)
        throw IoError(path + ": not a CORU binary matrix");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t rows = detail::get_u64le(p + 4), cols = detail::get_u64le(p + 12);
    if (rows == 0 || cols == 0 || bytes.size() != 20 + 8 * rows * cols)
        throw IoError(path + ": truncated or malformed CORU file");
    std::vector<double> entries(rows * cols);
    for (std::uint64_t i = 0; i < rows * cols; ++i)
        entries[i] = std::bit_cast<double>(detail::get_u64le(p + 20 + 8 * i));
    try {
        return Matrix(rows, cols, std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw IoError(path + ": " + e.what());
    }
}

/// CSV matrix: one row per line, comma-separated entries, no header.
inline void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out.push_back(',');
            out += format_double(m(i, j));
        }
        out.push_back('\n');
    }
    detail::write_file(path, out);
}

inline Matrix read_matrix_csv(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    std::vector<double> entries;
    std::size_t rows = 0, cols = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) eol = bytes.size();
        std::string_view line(bytes.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) continue;
        std::size_t row_cols = 0, cur = 0;
        while (cur <= line.size()) {
            std::size_t comma = line.find(',', cur);
            if (comma == std::string_view::npos) comma = line.size();
            double v = 0.0;
            const char* first = line.data() + cur;
            const char* last = line.data() + comma;
            while (first < last && (*first == ' ' || *first == '\t')) ++first;
            const auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc() )
                throw IoError(path + ": bad numeric field at row " + std::to_string(rows + 1));
            entries.push_back(v);
            ++row_cols;
            cur = comma + 1;
            if (comma == line.size()) break;
        }
        if (rows == 0) cols = row_cols;
        else if (row_cols != cols)
            throw IoError(path + ": ragged row " + std::to_string(rows + 1));
        ++rows;
    }
    if (rows == 0) throw IoError(path + ": empty CSV matrix");
    try {
        return Matrix(rows, cols, std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline void write_matrix(const std::string& path, const Matrix& m) {
    if (infer_format(path) == MatrixFileFormat::bin) write_matrix_bin(path, m);
    else write_matrix_csv(path, m);
}

inline Matrix read_matrix(const std::string& path) {
    return infer_format(path) == MatrixFileFormat::bin ? read_matrix_bin(path)
                                                       : read_matrix_csv(path);
}

// ---------------------------------------------------------------------------
// PGM images (types P2 and P5, maxval <= 255); pixels map to [0, 255].

namespace detail {

inline int pgm_next_token(const std::string& bytes, std::size_t& pos, std::string& tok) {
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    tok.clear();
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) )
        tok.push_back(bytes[pos++]);
    return tok.empty() ? -1 : 0;
}

}  // namespace detail

inline Matrix read_pgm(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    std::size_t pos = 0;
    std::string tok;
    if (detail::pgm_next_token(bytes, pos, tok) != 0 || (tok != "P2" && tok != "P5"))
        throw IoError(path + ": not a P2/P5 PGM file");
    const bool binary = tok == "P5";
    std::uint64_t width = 0, height = 0, maxval = 0;
    for (std::uint64_t* field : {&width, &height, &maxval}) {
        if (detail::pgm_next_token(bytes, pos, tok) != 0) throw IoError(path + ": truncated PGM header");
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), *field);
        if (res.ec != std::errc()) throw IoError(path + ": bad PGM header field");
    }
    if (width == 0 || height == 0) throw IoError(path + ": degenerate PGM dimensions");
    if (maxval == 0 || maxval > 255) throw IoError(path + ": PGM maxval must be in [1, 255]");
    Matrix img(height, width);
    if (binary) {
        ++pos;  // single whitespace after maxval
        if (bytes.size() - pos < width * height) throw IoError(path + ": truncated P5 data");
        for (std::size_t i = 0; i < width * height; ++i)
            img.data()[i] = double(static_cast<unsigned char>(bytes[pos + i]));
    } else {
        for (std::size_t i = 0; i < width * height; ++i) {
            if (detail::pgm_next_token(bytes, pos, tok) != 0)
                throw IoError(path + ": truncated P2 data");
            std::uint64_t v = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || v > maxval) throw IoError(path + ": bad P2 pixel");
            img.data()[i] = double(v);
        }
    }
    return img;
}

/// Writes binary PGM (P5, maxval 255). Values are clamped to [0, 255] and
/// rounded half-to-even.
inline void write_pgm(const std::string& path, const Matrix& img) {
    std::string out = "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) +
                      "\n255\n";
    out.reserve(out.size() + img.size());
    for (double x : img.data()) {
        const double c = std::clamp(x, 0.0, 255.0);
        out.push_back(char(static_cast<unsigned char>(std::nearbyint(c))));
    }
    detail::write_file(path, out);
}

}  // namespace coru
