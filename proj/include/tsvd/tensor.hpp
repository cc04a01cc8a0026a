#pragma once

#include "tsvd/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tsvd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Dims3 = std::array<std::size_t, 3>;

/// Dense order-3 tensor of doubles.
///
/// Entry (i, j, k) (zero-based) lives at flat index i*p2*p3 + j*p3 + k, which
/// makes the storage identical to the row-major mode-1 matricization. The
/// object is immutable once built; every operation returns a new tensor.
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(Dims3 dims, std::vector<double> data)
        : dims_(dims), data_(std::move(data)) {
        detail::require(dims_[0] > 0 && dims_[1] > 0 && dims_[2] > 0,
                        "Tensor3: dimensions must be positive");
        detail::require(data_.size() == dims_[0] * dims_[1] * dims_[2],
                        "Tensor3: data length does not match dimensions");
        detail::require(std::all_of(data_.begin(), data_.end(),
                                    [](double v) { return std::isfinite(v); }),
                        "Tensor3: entries must be finite");
    }

    static Tensor3 zeros(Dims3 dims) {
        return Tensor3(dims, std::vector<double>(dims[0] * dims[1] * dims[2], 0.0));
    }

    [[nodiscard]] const Dims3& dims() const noexcept { return dims_; }
    /// Dimension of a mode numbered 1, 2 or 3.
    [[nodiscard]] std::size_t dim(int mode) const { return dims_.at(mode - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (i * dims_[1] + j) * dims_[2] + k;
    }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return data_[index(i, j, k)];
    }

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    Dims3 dims_{};
    std::vector<double> data_;
};

namespace detail {

inline void require_mode(int mode) {
    require(mode >= 1 && mode <= 3, "mode must be 1, 2 or 3, got " + std::to_string(mode));
}

}  // namespace detail

/// Zero-copy row-major view of M_1(X), shape p1 x (p2*p3).
inline Eigen::Map<const RowMatrix> mode1_view(const Tensor3& x) {
    const auto& d = x.dims();
    return {x.data().data(), static_cast<Eigen::Index>(d[0]),
            static_cast<Eigen::Index>(d[1] * d[2])};
}

/// Zero-copy view of M_3(X), shape p3 x (p1*p2): the transpose of the
/// storage read as a (p1*p2) x p3 row-major matrix.
inline auto mode3_view(const Tensor3& x) {
    const auto& d = x.dims();
    return Eigen::Map<const RowMatrix>(x.data().data(), static_cast<Eigen::Index>(d[0] * d[1]),
                                       static_cast<Eigen::Index>(d[2]))
        .transpose();
}

/// Mode-k matricization with cyclic column ordering:
///   M_1[i, j*p3 + k], M_2[j, k*p1 + i], M_3[k, i*p2 + j].
/// Mode 1 copies the storage view; modes 2 and 3 gather.
inline Matrix matricize(const Tensor3& x, int mode) {
    detail::require_mode(mode);
    const auto [p1, p2, p3] = x.dims();
    if (mode == 1) return Matrix(mode1_view(x));

    const auto* src = x.data().data();
    if (mode == 2) {
        Matrix m(p2, p3 * p1);
        for (std::size_t i = 0; i < p1; ++i)
            for (std::size_t j = 0; j < p2; ++j)
                for (std::size_t k = 0; k < p3; ++k)
                    m(j, k * p1 + i) = src[(i * p2 + j) * p3 + k];
        return m;
    }
    Matrix m(p3, p1 * p2);
    for (std::size_t i = 0; i < p1; ++i)
        for (std::size_t j = 0; j < p2; ++j)
            for (std::size_t k = 0; k < p3; ++k)
                m(k, i * p2 + j) = src[(i * p2 + j) * p3 + k];
    return m;
}

/// Marginal multiplication X x_mode A: contracts the mode-th index of X with
/// the columns of A, so that M_mode(result) = A * M_mode(X).
inline Tensor3 mode_product(const Tensor3& x, int mode, const Eigen::Ref<const Matrix>& a) {
    detail::require_mode(mode);
    const auto& d = x.dims();
    const std::size_t n = d[mode - 1];
    detail::require(static_cast<std::size_t>(a.cols()) == n,
                    "mode_product: matrix has " + std::to_string(a.cols()) +
                        " columns but mode " + std::to_string(mode) + " has dimension " +
                        std::to_string(n));
    detail::require(a.rows() > 0, "mode_product: matrix must have at least one row");
    const auto q = static_cast<std::size_t>(a.rows());

    Dims3 out_dims = d;
    out_dims[mode - 1] = q;
    std::vector<double> out(out_dims[0] * out_dims[1] * out_dims[2]);

    // Storage viewed as (pre, n, post) with post contiguous.
    std::size_t pre = 1, post = 1;
    for (int m = 0; m < mode - 1; ++m) pre *= d[m];
    for (int m = mode; m < 3; ++m) post *= d[m];

    const auto ei = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
    if (post == 1) {
        Eigen::Map<const RowMatrix> src(x.data().data(), ei(pre), ei(n));
        Eigen::Map<RowMatrix> dst(out.data(), ei(pre), ei(q));
        dst.noalias() = src * a.transpose();
    } else {
        for (std::size_t s = 0; s < pre; ++s) {
            Eigen::Map<const RowMatrix> src(x.data().data() + s * n * post, ei(n), ei(post));
            Eigen::Map<RowMatrix> dst(out.data() + s * q * post, ei(q), ei(post));
            dst.noalias() = a * src;
        }
    }
    return Tensor3(out_dims, std::move(out));
}

/// Kronecker (outer) product: (A ⊗ B)[i*rb + j, k*cb + l] = A[i,k] * B[j,l].
inline Matrix kronecker(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index k = 0; k < a.cols(); ++k)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

/// S x_1 U1 x_2 U2 x_3 U3.
inline Tensor3 tucker_compose(const Tensor3& core, const Eigen::Ref<const Matrix>& u1,
                              const Eigen::Ref<const Matrix>& u2,
                              const Eigen::Ref<const Matrix>& u3) {
    const auto& d = core.dims();
    detail::require(static_cast<std::size_t>(u1.cols()) == d[0] &&
                        static_cast<std::size_t>(u2.cols()) == d[1] &&
                        static_cast<std::size_t>(u3.cols()) == d[2],
                    "tucker_compose: factor column counts must match core dimensions");
    return mode_product(mode_product(mode_product(core, 3, u3), 2, u2), 1, u1);
}

inline double frobenius_norm(const Tensor3& x) {
    double s = 0.0;
    for (double v : x.data()) s += v * v;
    return std::sqrt(s);
}

/// Half-open, zero-based index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
};

inline Tensor3 subtensor(const Tensor3& x, const std::array<IndexRange, 3>& ranges) {
    const auto& d = x.dims();
    for (int m = 0; m < 3; ++m)
        detail::require(ranges[m].begin < ranges[m].end && ranges[m].end <= d[m],
                        "subtensor: range for mode " + std::to_string(m + 1) +
                            " is empty or exceeds the dimension");
    Dims3 out_dims{ranges[0].size(), ranges[1].size(), ranges[2].size()};
    std::vector<double> out;
    out.reserve(out_dims[0] * out_dims[1] * out_dims[2]);
    for (std::size_t i = ranges[0].begin; i < ranges[0].end; ++i)
        for (std::size_t j = ranges[1].begin; j < ranges[1].end; ++j) {
            const auto* row = x.data().data() + x.index(i, j, ranges[2].begin);
            out.insert(out.end(), row, row + out_dims[2]);
        }
    return Tensor3(out_dims, std::move(out));
}

/// Entrywise difference a - b for equally shaped tensors.
inline Tensor3 subtract(const Tensor3& a, const Tensor3& b) {
    detail::require(a.dims() == b.dims(), "subtract: shape mismatch");
    std::vector<double> out(a.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = a.data()[n] - b.data()[n];
    return Tensor3(a.dims(), std::move(out));
}

inline Tensor3 add(const Tensor3& a, const Tensor3& b) {
    detail::require(a.dims() == b.dims(), "add: shape mismatch");
    std::vector<double> out(a.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = a.data()[n] + b.data()[n];
    return Tensor3(a.dims(), std::move(out));
}

}  // namespace tsvd
