#pragma once

// Text formats.
//
//   .t3   line 1: "t3 p1 p2 p3"; then p1 lines, line i holding the p2*p3
//         entries of row i of M_1(X) (column index j*p3 + k).
//   .mat  line 1: "mat rows cols"; then one line per row.
//
// Values are written with 17 significant digits so a write/read cycle is exact.

#include "tsvd/error.hpp"
#include "tsvd/tensor.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace tsvd::io {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_t3(std::ostream& os, const Tensor3& x) {
    const auto& d = x.dims();
    os << "t3 " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
    const std::size_t row = d[1] * d[2];
    std::string line;
    for (std::size_t i = 0; i < d[0]; ++i) {
        line.clear();
        for (std::size_t c = 0; c < row; ++c) {
            if (c) line.push_back(' ');
            line += format_double(x.data()[i * row + c]);
        }
        line.push_back('\n');
        os << line;
    }
}

namespace detail {

inline void expect_header(std::istream& is, const std::string& tag) {
    std::string got;
    if (!(is >> got) || got != tag)
        throw ContractViolation("expected '" + tag + "' header, found '" + got + "'");
}

inline std::vector<double> read_values(std::istream& is, std::size_t n, const std::string& what) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!(is >> v[i]))
            throw ContractViolation(what + ": expected " + std::to_string(n) + " values, read " +
                                    std::to_string(i));
    std::string extra;
    if (is >> extra) throw ContractViolation(what + ": trailing data after last value");
    return v;
}

}  // namespace detail

inline Tensor3 read_t3(std::istream& is) {
    detail::expect_header(is, "t3");
    long long p[3];
    if (!(is >> p[0] >> p[1] >> p[2]) || p[0] <= 0 || p[1] <= 0 || p[2] <= 0)
        throw ContractViolation("t3: malformed dimensions");
    Dims3 d{static_cast<std::size_t>(p[0]), static_cast<std::size_t>(p[1]),
            static_cast<std::size_t>(p[2])};
    return Tensor3(d, detail::read_values(is, d[0] * d[1] * d[2], "t3"));
}

inline void write_mat(std::ostream& os, const Eigen::Ref<const Matrix>& m) {
    os << "mat " << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
}

inline Matrix read_mat(std::istream& is) {
    detail::expect_header(is, "mat");
    long long r = 0, c = 0;
    if (!(is >> r >> c) || r <= 0 || c <= 0) throw ContractViolation("mat: malformed dimensions");
    const auto v = detail::read_values(is, static_cast<std::size_t>(r * c), "mat");
    Matrix m(r, c);
    for (long long i = 0; i < r; ++i)
        for (long long j = 0; j < c; ++j) m(i, j) = v[static_cast<std::size_t>(i * c + j)];
    tsvd::detail::require(m.allFinite(), "mat: entries must be finite");
    return m;
}

inline Tensor3 load_t3(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ContractViolation("cannot open " + path);
    return read_t3(f);
}

inline void save_t3(const std::string& path, const Tensor3& x) {
    std::ofstream f(path);
    if (!f) throw ContractViolation("cannot write " + path);
    write_t3(f, x);
}

inline Matrix load_mat(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ContractViolation("cannot open " + path);
    return read_mat(f);
}

inline void save_mat(const std::string& path, const Eigen::Ref<const Matrix>& m) {
    std::ofstream f(path);
    if (!f) throw ContractViolation("cannot write " + path);
    write_mat(f, m);
}

}  // namespace tsvd::io
