#pragma once

#include "tsvd/ensembles.hpp"
#include "tsvd/error.hpp"
#include "tsvd/linalg.hpp"
#include "tsvd/rng.hpp"
#include "tsvd/tensor.hpp"
#include "tsvd/tucker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace tsvd {

using Bases3 = std::array<OrthonormalBasis, 3>;

struct HooiConfig {
    Ranks3 ranks{1, 1, 1};
    /// Increment tolerance on the objective norm; unset means 1e-6 * ||Y||_F.
    std::optional<double> tolerance;
    int max_iters = 50;
    /// Starting bases; unset means spectral (HOSVD) initialization.
    std::optional<Bases3> init;
};

enum class StopReason { tolerance_met, max_iters };

struct HooiResult {
    TuckerFactors factors;
    Tensor3 reconstruction;
    /// ||Y x1 U1^T x2 U2^T x3 U3^T||_F; entry 0 is the starting point, entry t
    /// follows sweep t.
    std::vector<double> objective_trace;
    int iters_run = 0;
    StopReason stop_reason = StopReason::max_iters;
};

namespace detail {

inline void require_feasible(const Dims3& dims, const Ranks3& ranks) {
    for (int k = 0; k < 3; ++k) {
        const auto a = ranks[(k + 1) % 3], b = ranks[(k + 2) % 3];
        require(ranks[k] >= 1 && ranks[k] <= dims[k],
                "hooi: rank for mode " + std::to_string(k + 1) + " must lie in [1, p_k]");
        require(ranks[k] <= a * b, "hooi: rank for mode " + std::to_string(k + 1) +
                                       " exceeds the product of the other two ranks");
    }
}

inline void require_conforming(const Dims3& dims, const Bases3& u, const std::string& who) {
    for (int k = 0; k < 3; ++k)
        require(static_cast<std::size_t>(u[k].p()) == dims[k],
                who + ": basis " + std::to_string(k + 1) + " does not match tensor dimension");
}

inline Tensor3 transpose_contract(const Tensor3& y, int mode, const OrthonormalBasis& u) {
    return mode_product(y, mode, u.matrix().transpose());
}

}  // namespace detail

/// Y x1 V1^T x2 V2^T x3 V3^T, contracting the most-reducing mode first.
inline Tensor3 project_core(const Tensor3& y, const Bases3& v) {
    detail::require_conforming(y.dims(), v, "project_core");
    std::array<int, 3> order{1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return static_cast<double>(v[a - 1].p()) / v[a - 1].r() >
               static_cast<double>(v[b - 1].p()) / v[b - 1].r();
    });
    Tensor3 t = detail::transpose_contract(y, order[0], v[order[0] - 1]);
    t = detail::transpose_contract(t, order[1], v[order[1] - 1]);
    return detail::transpose_contract(t, order[2], v[order[2] - 1]);
}

/// Spectral initialization: leading r_k left singular vectors of M_k(Y).
inline Bases3 hosvd_init(const Tensor3& y, const Ranks3& ranks) {
    const auto& d = y.dims();
    for (int k = 0; k < 3; ++k)
        detail::require(ranks[k] >= 1 && ranks[k] <= d[k] &&
                            ranks[k] <= d[(k + 1) % 3] * d[(k + 2) % 3],
                        "hosvd_init: rank for mode " + std::to_string(k + 1) + " is infeasible");
    return {svd_leading(mode1_view(y), ranks[0]), svd_leading(matricize(y, 2), ranks[1]),
            svd_leading(mode3_view(y), ranks[2])};
}

/// Likelihood objective ||Y x1 V1^T x2 V2^T x3 V3^T||_F^2.
inline double objective(const Tensor3& y, const Bases3& v) {
    const double n = frobenius_norm(project_core(y, v));
    return n * n;
}

struct ProjectedEstimate {
    Tensor3 core;
    Tensor3 xhat;
};

/// S = Y x_k U_k^T (all k), Xhat = S x_k U_k = Y x_k P_{U_k}.
inline ProjectedEstimate project_estimate(const Tensor3& y, const Bases3& u) {
    Tensor3 core = project_core(y, u);
    Tensor3 xhat = tucker_compose(core, u[0].matrix(), u[1].matrix(), u[2].matrix());
    return {std::move(core), std::move(xhat)};
}

/// Oracle warm start (U + U_perp O) / sqrt(2) with O Haar on O(p - r, r).
/// Every principal cosine against U equals 1/sqrt(2).
inline OrthonormalBasis warm_start(const OrthonormalBasis& u, const RngStream& rng) {
    const auto p = u.p(), r = u.r();
    detail::require(r <= p - r, "warm_start: need r <= p - r for a rotated complement");
    const OrthonormalBasis comp = orthonormal_complement(u);
    const OrthonormalBasis o = haar_orthonormal(static_cast<std::size_t>(p - r),
                                                static_cast<std::size_t>(r), rng);
    Matrix w = (u.matrix() + comp.matrix() * o.matrix()) / std::sqrt(2.0);
    return OrthonormalBasis(std::move(w));
}

/// Higher-order orthogonal iteration.
///
/// Each sweep updates U1 from Y x2 U2^T x3 U3^T, then U2 with the fresh U1,
/// then U3 with both fresh bases. The sweep loop stops once the objective norm
/// grows by no more than the tolerance (a negative increment counts as
/// converged) or after max_iters sweeps.
inline HooiResult hooi(const Tensor3& y, const HooiConfig& config) {
    detail::require_feasible(y.dims(), config.ranks);
    detail::require(config.max_iters >= 1, "hooi: max_iters must be at least 1");
    const double eps = config.tolerance.value_or(1e-6 * frobenius_norm(y));
    detail::require(eps >= 0.0 && std::isfinite(eps), "hooi: tolerance must be nonnegative");

    Bases3 u;
    if (config.init) {
        u = *config.init;
        detail::require_conforming(y.dims(), u, "hooi");
        for (int k = 0; k < 3; ++k)
            detail::require(static_cast<std::size_t>(u[k].r()) == config.ranks[k],
                            "hooi: provided basis " + std::to_string(k + 1) +
                                " has the wrong number of columns");
    } else {
        u = hosvd_init(y, config.ranks);
    }
    const auto& r = config.ranks;

    HooiResult res;
    res.objective_trace.push_back(frobenius_norm(project_core(y, u)));
    Tensor3 core;
    for (int t = 1; t <= config.max_iters; ++t) {
        // Y x3 U3^T is shared by the mode-1 and mode-2 updates (U3 is stale for both).
        const Tensor3 y3 = detail::transpose_contract(y, 3, u[2]);
        u[0] = svd_leading(mode1_view(detail::transpose_contract(y3, 2, u[1])), r[0]);
        u[1] = svd_leading(matricize(detail::transpose_contract(y3, 1, u[0]), 2), r[1]);
        const Tensor3 w3 =
            detail::transpose_contract(detail::transpose_contract(y, 1, u[0]), 2, u[1]);
        u[2] = svd_leading(mode3_view(w3), r[2]);
        core = detail::transpose_contract(w3, 3, u[2]);

        const double obj = frobenius_norm(core);
        const double increment = obj - res.objective_trace.back();
        res.objective_trace.push_back(obj);
        res.iters_run = t;
        if (increment <= eps) {
            res.stop_reason = StopReason::tolerance_met;
            break;
        }
    }
    res.reconstruction = tucker_compose(core, u[0].matrix(), u[1].matrix(), u[2].matrix());
    res.factors = TuckerFactors(std::move(core), std::move(u));
    return res;
}

}  // namespace tsvd
