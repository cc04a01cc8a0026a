#pragma once

#include "tsvd/error.hpp"
#include "tsvd/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tsvd {

inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A p x r matrix with orthonormal columns; 1 <= r <= p.
class OrthonormalBasis {
public:
    OrthonormalBasis() = default;

    explicit OrthonormalBasis(Matrix cols) : cols_(std::move(cols)) {
        detail::require(cols_.cols() >= 1 && cols_.cols() <= cols_.rows(),
                        "OrthonormalBasis: need 1 <= r <= p, got p=" +
                            std::to_string(cols_.rows()) + " r=" + std::to_string(cols_.cols()));
        detail::require(cols_.allFinite(), "OrthonormalBasis: entries must be finite");
        const Matrix gram = cols_.transpose() * cols_;
        const double dev =
            (gram - Matrix::Identity(cols_.cols(), cols_.cols())).cwiseAbs().maxCoeff();
        detail::require(dev <= kOrthonormalTol,
                        "OrthonormalBasis: columns are not orthonormal (deviation " +
                            std::to_string(dev) + ")");
    }

    [[nodiscard]] Eigen::Index p() const noexcept { return cols_.rows(); }
    [[nodiscard]] Eigen::Index r() const noexcept { return cols_.cols(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return cols_; }

private:
    Matrix cols_;
};

/// Cosines of the principal angles, nonincreasing, each in [0, 1].
struct PrincipalAngles {
    Vector cosines;
};

namespace detail {

// Wide matrices above this many entries go through the Gram route; the
// bidiagonalization of a 400 x 60000 unfolding is otherwise the bottleneck.
inline constexpr Eigen::Index kGramEntryThreshold = Eigen::Index{1} << 18;

template <typename Derived>
bool use_gram_route(const Eigen::MatrixBase<Derived>& a) {
    return a.cols() > 4 * a.rows() && a.rows() * a.cols() > kGramEntryThreshold;
}

template <typename Derived>
Matrix gram_of_rows(const Eigen::MatrixBase<Derived>& a) {
    Matrix g = Matrix::Zero(a.rows(), a.rows());
    g.template selfadjointView<Eigen::Lower>().rankUpdate(a);
    g.template triangularView<Eigen::StrictlyUpper>() = g.transpose();
    return g;
}

}  // namespace detail

/// Leading r left singular vectors of A (SVD_r(A)).
///
/// Short-and-wide matrices with many entries are handled through the
/// eigendecomposition of A*A^T; everything else uses a divide-and-conquer SVD.
/// When sigma_r == sigma_{r+1} the returned basis is one valid choice among
/// many; compare results with sin-theta distances only.
template <typename Derived>
OrthonormalBasis svd_leading(const Eigen::MatrixBase<Derived>& a, Eigen::Index r) {
    detail::require(r >= 1 && r <= std::min(a.rows(), a.cols()),
                    "svd_leading: rank " + std::to_string(r) + " out of range for a " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
    if (detail::use_gram_route(a)) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(detail::gram_of_rows(a));
        if (eig.info() != Eigen::Success)
            throw NumericalFailure("svd_leading: eigensolver did not converge");
        // Eigenvalues ascend; take the last r columns, largest first.
        return OrthonormalBasis(eig.eigenvectors().rightCols(r).rowwise().reverse());
    }
    Eigen::BDCSVD<Matrix> svd(a.eval(), Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
        throw NumericalFailure("svd_leading: SVD did not converge");
    return OrthonormalBasis(svd.matrixU().leftCols(r));
}

/// All min(rows, cols) singular values, nonincreasing.
template <typename Derived>
Vector singular_values(const Eigen::MatrixBase<Derived>& a) {
    if (detail::use_gram_route(a)) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(detail::gram_of_rows(a),
                                                  Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success)
            throw NumericalFailure("singular_values: eigensolver did not converge");
        Vector s = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
        return s;
    }
    Eigen::BDCSVD<Matrix> svd(a.eval());
    if (svd.info() != Eigen::Success)
        throw NumericalFailure("singular_values: SVD did not converge");
    return svd.singularValues();
}

inline PrincipalAngles principal_angles(const OrthonormalBasis& u, const OrthonormalBasis& v) {
    detail::require(u.p() == v.p() && u.r() == v.r(),
                    "principal_angles: bases must share p and r");
    Eigen::JacobiSVD<Matrix> svd(u.matrix().transpose() * v.matrix());
    return {svd.singularValues().cwiseMax(0.0).cwiseMin(1.0)};
}

/// Schatten-q norm of sin(Theta(U, V)); pass kInf for the spectral version.
///
/// The sines are the singular values of (I - U U^T) V, taken directly rather
/// than as sqrt(1 - cos^2), which cannot resolve angles below about 1e-8.
inline double sin_theta_norm(const OrthonormalBasis& u, const OrthonormalBasis& v, double q) {
    detail::require(q >= 1.0, "sin_theta_norm: q must be >= 1");
    detail::require(u.p() == v.p() && u.r() == v.r(),
                    "sin_theta_norm: bases must share p and r");
    const Matrix resid = v.matrix() - u.matrix() * (u.matrix().transpose() * v.matrix());
    Eigen::JacobiSVD<Matrix> svd(resid);
    const Vector s = svd.singularValues().cwiseMin(1.0);
    if (std::isinf(q)) return s.maxCoeff();
    return std::pow(s.array().pow(q).sum(), 1.0 / q);
}

/// Schatten-q norm of a general matrix; q = kInf gives the spectral norm.
inline double schatten_norm(const Eigen::Ref<const Matrix>& a, double q) {
    detail::require(q >= 1.0, "schatten_norm: q must be >= 1");
    const Vector s = singular_values(a);
    if (std::isinf(q)) return s.size() ? s(0) : 0.0;
    return std::pow(s.array().pow(q).sum(), 1.0 / q);
}

inline Matrix projector(const OrthonormalBasis& u) {
    return u.matrix() * u.matrix().transpose();
}

inline OrthonormalBasis orthonormal_complement(const OrthonormalBasis& u) {
    detail::require(u.r() < u.p(), "orthonormal_complement: basis already spans the space");
    Eigen::HouseholderQR<Matrix> qr(u.matrix());
    const Matrix q = qr.householderQ();
    return OrthonormalBasis(q.rightCols(u.p() - u.r()));
}

/// min_k sigma_{r_k}(M_k(X)).
inline double signal_strength(const Tensor3& x, const std::array<std::size_t, 3>& ranks) {
    double lam = kInf;
    for (int mode = 1; mode <= 3; ++mode) {
        const std::size_t r = ranks[mode - 1];
        detail::require(r >= 1 && r <= x.dim(mode),
                        "signal_strength: rank for mode " + std::to_string(mode) + " out of range");
        const Vector s = mode == 1 ? singular_values(mode1_view(x))
                                   : singular_values(matricize(x, mode));
        const double sr = static_cast<Eigen::Index>(r) <= s.size() ? s(r - 1) : 0.0;
        lam = std::min(lam, sr);
    }
    return lam;
}

}  // namespace tsvd
