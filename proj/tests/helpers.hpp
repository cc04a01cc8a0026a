#pragma once

#include "tsvd/tsvd.hpp"

#include <cmath>
#include <vector>

namespace testing {

// X_{ijk} = 4i + 2j + k on a 2x2x2 grid (zero-based).
inline tsvd::Tensor3 counting_cube() {
    std::vector<double> v(8);
    for (int n = 0; n < 8; ++n) v[n] = n;
    return tsvd::Tensor3({2, 2, 2}, v);
}

inline tsvd::Tensor3 random_tensor(const tsvd::Dims3& d, tsvd::Sampler& s) {
    std::vector<double> v(d[0] * d[1] * d[2]);
    for (auto& e : v) e = s.normal();
    return tsvd::Tensor3(d, std::move(v));
}

inline tsvd::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, tsvd::Sampler& s) {
    tsvd::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = s.normal();
    return m;
}

inline double max_abs_diff(const tsvd::Tensor3& a, const tsvd::Tensor3& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        m = std::max(m, std::abs(a.data()[n] - b.data()[n]));
    return m;
}

inline tsvd::OrthonormalBasis basis(std::initializer_list<std::initializer_list<double>> rows) {
    tsvd::Matrix m(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return tsvd::OrthonormalBasis(m);
}

}  // namespace testing
