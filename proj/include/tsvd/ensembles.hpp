#pragma once

#include "tsvd/error.hpp"
#include "tsvd/linalg.hpp"
#include "tsvd/rng.hpp"
#include "tsvd/tensor.hpp"
#include "tsvd/tucker.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace tsvd {

/// Noise law for Z: i.i.d. N(0, sigma^2) or Unif[-sqrt 3, sqrt 3] (variance 1).
struct NoiseKind {
    enum class Law { gaussian, uniform };
    Law law = Law::gaussian;
    double sigma = 1.0;

    static NoiseKind gaussian(double sigma = 1.0) { return {Law::gaussian, sigma}; }
    static NoiseKind uniform() { return {Law::uniform, 1.0}; }

    [[nodiscard]] std::string name() const { return law == Law::gaussian ? "gaussian" : "uniform"; }
};

enum class CoreKind { rescaled_gaussian, diagonal };

/// Y = X + Z together with the ground truth that generated X.
struct Instance {
    Tensor3 y;
    Tensor3 x;
    TuckerFactors truth;
    double lambda_actual = 0.0;
    NoiseKind noise;
};

/// Q factor of a p x r standard Gaussian matrix, column signs fixed so that
/// diag(R) >= 0. With that convention Q is Haar distributed on O(p, r).
inline OrthonormalBasis haar_orthonormal(std::size_t p, std::size_t r, const RngStream& rng) {
    detail::require(r >= 1 && r <= p, "haar_orthonormal: need 1 <= r <= p");
    Sampler s(rng);
    const auto pi = static_cast<Eigen::Index>(p), ri = static_cast<Eigen::Index>(r);
    Matrix g(pi, ri);
    for (Eigen::Index i = 0; i < pi; ++i)
        for (Eigen::Index j = 0; j < ri; ++j) g(i, j) = s.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(pi, ri);
    const auto& rmat = qr.matrixQR();
    for (Eigen::Index j = 0; j < ri; ++j)
        if (rmat(j, j) < 0.0) q.col(j) *= -1.0;
    return OrthonormalBasis(std::move(q));
}

inline Tensor3 gaussian_tensor(const Dims3& dims, const RngStream& rng) {
    Sampler s(rng);
    std::vector<double> v(dims[0] * dims[1] * dims[2]);
    for (auto& e : v) e = s.normal();
    return Tensor3(dims, std::move(v));
}

namespace detail {

inline double min_mode_sigma(const Tensor3& s, const Ranks3& ranks) {
    return signal_strength(s, ranks);
}

inline Tensor3 scale(const Tensor3& t, double c) {
    std::vector<double> v(t.data().begin(), t.data().end());
    for (auto& e : v) e *= c;
    return Tensor3(t.dims(), std::move(v));
}

}  // namespace detail

/// Gaussian core rescaled so that min_k sigma_{r_k}(M_k(S)) equals lambda.
inline Tensor3 rescaled_core(const Ranks3& ranks, double lambda, const RngStream& rng) {
    for (int k = 0; k < 3; ++k)
        detail::require(ranks[k] >= 1 && ranks[k] <= ranks[(k + 1) % 3] * ranks[(k + 2) % 3],
                        "rescaled_core: each rank must be in [1, product of the other two]");
    detail::require(lambda > 0.0 && std::isfinite(lambda), "rescaled_core: lambda must be positive");
    for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
        const Tensor3 raw = gaussian_tensor(ranks, rng.derive(Role::core, attempt));
        const double m = detail::min_mode_sigma(raw, ranks);
        if (m > 0.0) return detail::scale(raw, lambda / m);
    }
    throw NumericalFailure("rescaled_core: Gaussian core is rank deficient after resampling");
}

/// r x r x r tensor with `strength` on the superdiagonal.
inline Tensor3 diagonal_core(std::size_t r, double strength) {
    detail::require(r >= 1, "diagonal_core: r must be positive");
    detail::require(strength > 0.0 && std::isfinite(strength),
                    "diagonal_core: strength must be positive");
    std::vector<double> v(r * r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) v[(i * r + i) * r + i] = strength;
    return Tensor3({r, r, r}, std::move(v));
}

inline Tensor3 noise_tensor(const Dims3& dims, const NoiseKind& kind, const RngStream& rng) {
    if (kind.law == NoiseKind::Law::gaussian) {
        detail::require(kind.sigma > 0.0 && std::isfinite(kind.sigma),
                        "noise_tensor: Gaussian sigma must be positive");
        Sampler s(rng);
        std::vector<double> v(dims[0] * dims[1] * dims[2]);
        for (auto& e : v) e = kind.sigma * s.normal();
        return Tensor3(dims, std::move(v));
    }
    const double h = std::sqrt(3.0);
    Sampler s(rng);
    std::vector<double> v(dims[0] * dims[1] * dims[2]);
    for (auto& e : v) e = s.uniform(-h, h);
    return Tensor3(dims, std::move(v));
}

/// Full simulation instance: Haar factors, a core of the requested kind, and
/// additive noise. Streams: factors (one per mode), core, noise.
inline Instance make_instance(const Dims3& dims, const Ranks3& ranks, double lambda,
                              CoreKind core_kind, const NoiseKind& noise, const RngStream& rng) {
    for (int k = 0; k < 3; ++k)
        detail::require(ranks[k] >= 1 && ranks[k] <= dims[k],
                        "make_instance: ranks must satisfy 1 <= r_k <= p_k");
    Tensor3 core;
    if (core_kind == CoreKind::diagonal) {
        detail::require(ranks[0] == ranks[1] && ranks[1] == ranks[2],
                        "make_instance: diagonal core needs equal ranks");
        core = diagonal_core(ranks[0], lambda);
    } else {
        core = rescaled_core(ranks, lambda, rng);
    }
    std::array<OrthonormalBasis, 3> bases;
    for (int k = 0; k < 3; ++k)
        bases[k] = haar_orthonormal(dims[k], ranks[k], rng.derive(Role::factors, k + 1));

    Instance inst;
    inst.truth = TuckerFactors(std::move(core), std::move(bases));
    inst.x = inst.truth.compose();
    inst.y = add(inst.x, noise_tensor(dims, noise, rng.derive(Role::noise)));
    // Orthonormal factors leave every matricization's singular values unchanged,
    // so the core's spectrum is the signal's spectrum.
    inst.lambda_actual = signal_strength(inst.truth.core, ranks);
    inst.noise = noise;
    return inst;
}

}  // namespace tsvd
