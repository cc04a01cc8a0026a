#pragma once

#include "tsvd/error.hpp"
#include "tsvd/linalg.hpp"
#include "tsvd/rng.hpp"
#include "tsvd/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

// Vertices are numbered 0..N-1 throughout this header.

namespace tsvd {

/// Adjacency of a 3-uniform hypergraph, one bit per unordered triple
/// {i < j < k}. Lookups are symmetric in their arguments and return 0 whenever
/// an index repeats. C(600, 3) triples fit in under 5 MB.
class HyperAdjacency {
public:
    HyperAdjacency() = default;
    explicit HyperAdjacency(std::size_t n)
        : n_(n), words_((triple_count(n) + 63) / 64, 0) {}

    [[nodiscard]] std::size_t n() const noexcept { return n_; }

    static std::uint64_t triple_count(std::size_t n) noexcept {
        const auto m = static_cast<std::uint64_t>(n);
        return m < 3 ? 0 : m * (m - 1) * (m - 2) / 6;
    }

    /// Combinatorial rank of a sorted triple a < b < c.
    static std::uint64_t rank(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
        return c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a;
    }

    [[nodiscard]] bool operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        if (i == j || j == k || i == k) return false;
        sort3(i, j, k);
        const auto r = rank(i, j, k);
        return (words_[r >> 6] >> (r & 63)) & 1U;
    }

    void set(std::size_t i, std::size_t j, std::size_t k, bool on) {
        detail::require(i != j && j != k && i != k && std::max({i, j, k}) < n_,
                        "HyperAdjacency: triple must have distinct in-range vertices");
        sort3(i, j, k);
        const auto r = rank(i, j, k);
        const std::uint64_t bit = std::uint64_t{1} << (r & 63);
        if (on)
            words_[r >> 6] |= bit;
        else
            words_[r >> 6] &= ~bit;
    }

    /// Overwrite every triple with independent fair coin flips.
    void fill_random(Sampler& s) {
        for (auto& w : words_) w = s.bits();
        const auto used = triple_count(n_) & 63;
        if (used && !words_.empty()) words_.back() &= (std::uint64_t{1} << used) - 1;
    }

    /// Dense 0/1 tensor over rows[0] x rows[1] x rows[2].
    [[nodiscard]] Tensor3 block(const std::array<std::vector<std::size_t>, 3>& rows) const {
        const Dims3 d{rows[0].size(), rows[1].size(), rows[2].size()};
        std::vector<double> v;
        v.reserve(d[0] * d[1] * d[2]);
        for (auto a : rows[0])
            for (auto b : rows[1])
                for (auto c : rows[2]) v.push_back((*this)(a, b, c) ? 1.0 : 0.0);
        return Tensor3(d, std::move(v));
    }

    [[nodiscard]] Tensor3 to_tensor() const {
        std::vector<std::size_t> all(n_);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return block({all, all, all});
    }

    /// Inverse of to_tensor; rejects tensors that are not symmetric 0/1
    /// adjacencies with zero entries on repeated indices.
    static HyperAdjacency from_tensor(const Tensor3& t) {
        const auto& d = t.dims();
        detail::require(d[0] == d[1] && d[1] == d[2], "HyperAdjacency: tensor must be N x N x N");
        const std::size_t n = d[0];
        HyperAdjacency adj(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const double v = t(i, j, k);
                    detail::require(v == 0.0 || v == 1.0, "HyperAdjacency: entries must be 0 or 1");
                    if (i == j || j == k || i == k) {
                        detail::require(v == 0.0,
                                        "HyperAdjacency: repeated-index entries must be 0");
                    } else if (i < j && j < k) {
                        adj.set(i, j, k, v == 1.0);
                    } else {
                        auto a = i, b = j, c = k;
                        sort3(a, b, c);
                        detail::require(v == t(a, b, c), "HyperAdjacency: tensor is not symmetric");
                    }
                }
        return adj;
    }

private:
    static void sort3(std::size_t& a, std::size_t& b, std::size_t& c) noexcept {
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

enum class Half { first, second };

inline std::string to_string(Half h) { return h == Half::first ? "first" : "second"; }

struct CliqueInstance {
    std::size_t n = 0;
    std::size_t kappa = 0;
    Half half = Half::first;
    std::vector<std::size_t> clique;  // sorted
    HyperAdjacency adjacency;
};

/// Vertex range of one half: [0, N/2) or [N/2, N).
inline std::vector<std::size_t> half_vertices(std::size_t n, Half half) {
    const std::size_t h = n / 2;
    std::vector<std::size_t> v(half == Half::first ? h : n - h);
    std::iota(v.begin(), v.end(), half == Half::first ? std::size_t{0} : h);
    return v;
}

/// Planted-clique hypergraph: every triple is an edge with probability 1/2,
/// then kappa vertices drawn uniformly from the chosen half get all their
/// triples forced on.
inline CliqueInstance sample_hypergraph(std::size_t n, std::size_t kappa, Half half,
                                        const RngStream& rng) {
    detail::require(n >= 6, "sample_hypergraph: need N >= 6");
    detail::require(kappa >= 1 && kappa <= n / 2, "sample_hypergraph: need 1 <= kappa <= N/2");
    CliqueInstance inst;
    inst.n = n;
    inst.kappa = kappa;
    inst.half = half;
    inst.adjacency = HyperAdjacency(n);
    Sampler edges(rng.derive(Role::hypergraph));
    inst.adjacency.fill_random(edges);

    auto pool = half_vertices(n, half);
    Sampler pick(rng.derive(Role::placement));
    for (std::size_t i = 0; i < kappa; ++i)
        std::swap(pool[i], pool[i + pick.below(pool.size() - i)]);
    inst.clique.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(kappa));
    std::sort(inst.clique.begin(), inst.clique.end());

    const auto& c = inst.clique;
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b)
            for (std::size_t d = b + 1; d < c.size(); ++d) inst.adjacency.set(c[a], c[b], c[d], true);
    return inst;
}

// ---------------------------------------------------------------------------
// Matricization-spectral estimate on three disjoint blocks of one half.
// ---------------------------------------------------------------------------

/// Three consecutive, nearly equal blocks D_1, D_2, D_3 covering a half. For
/// the first half these are [floor(kN/6), floor((k+1)N/6)), k = 0, 1, 2.
inline std::array<std::vector<std::size_t>, 3> spectral_blocks(std::size_t n, Half half) {
    const auto verts = half_vertices(n, half);
    const std::size_t m = verts.size();
    std::array<std::vector<std::size_t>, 3> blocks;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t lo, hi;
        if (half == Half::first) {
            lo = k * n / 6;
            hi = (k + 1) * n / 6;
        } else {
            lo = k * m / 3;
            hi = (k + 1) * m / 3;
        }
        blocks[k].assign(verts.begin() + static_cast<std::ptrdiff_t>(lo),
                         verts.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    return blocks;
}

struct SpectralEstimate {
    std::array<std::vector<std::size_t>, 3> blocks;  // vertex ids of D_1, D_2, D_3
    std::array<Vector, 3> vectors;                   // unit vectors indexed like blocks
    std::array<double, 3> top_singular{};            // sigma_1 of each matricization
};

/// 2 * A[D1, D2, D3] - 1.
inline Tensor3 recentred_block(const HyperAdjacency& adj,
                               const std::array<std::vector<std::size_t>, 3>& blocks) {
    const Tensor3 a = adj.block(blocks);
    std::vector<double> v(a.data().begin(), a.data().end());
    for (auto& e : v) e = 2.0 * e - 1.0;
    return Tensor3(a.dims(), std::move(v));
}

inline SpectralEstimate block_spectral_estimate(const HyperAdjacency& adj, Half half) {
    const std::size_t n = adj.n();
    SpectralEstimate est;
    est.blocks = spectral_blocks(n, half);
    for (const auto& b : est.blocks)
        detail::require(!b.empty(), "spectral estimate: N too small for nonempty blocks");
    const Tensor3 t = recentred_block(adj, est.blocks);
    for (int mode = 1; mode <= 3; ++mode) {
        const Matrix m = matricize(t, mode);
        const OrthonormalBasis u = svd_leading(m, 1);
        est.vectors[mode - 1] = u.matrix().col(0);
        est.top_singular[mode - 1] = (m.transpose() * u.matrix()).norm();
    }
    return est;
}

/// Leading left singular vectors of the three matricizations of the recentred
/// block tensor over the first half.
inline SpectralEstimate spectral_clique_estimate(const CliqueInstance& inst) {
    detail::require(inst.half == Half::first,
                    "spectral_clique_estimate: instance must have its clique in the first half");
    detail::require(inst.n >= 12, "spectral_clique_estimate: need N >= 12");
    return block_spectral_estimate(inst.adjacency, Half::first);
}

/// Top ceil(kappa/3) vertices by |u_k| inside each block, unioned and sorted.
inline std::vector<std::size_t> recover_clique(const SpectralEstimate& est, std::size_t kappa) {
    const std::size_t per_block = (kappa + 2) / 3;
    std::vector<std::size_t> out;
    for (int k = 0; k < 3; ++k) {
        const auto& u = est.vectors[k];
        std::vector<std::size_t> idx(static_cast<std::size_t>(u.size()));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(u(static_cast<Eigen::Index>(a))) >
                   std::abs(u(static_cast<Eigen::Index>(b)));
        });
        const std::size_t take = std::min(per_block, idx.size());
        for (std::size_t i = 0; i < take; ++i) out.push_back(est.blocks[k][idx[i]]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Decide which half hosts the clique by comparing the top singular value of
/// the recentred mode-1 block matricization of each half.
inline Half detect_half(const HyperAdjacency& adj, std::size_t kappa) {
    detail::require(adj.n() >= 12, "detect_half: need N >= 12");
    detail::require(kappa >= 1 && kappa <= adj.n() / 2, "detect_half: need 1 <= kappa <= N/2");
    const double first = block_spectral_estimate(adj, Half::first).top_singular[0];
    const double second = block_spectral_estimate(adj, Half::second).top_singular[0];
    return first >= second ? Half::first : Half::second;
}

// ---------------------------------------------------------------------------
// Gaussianization reduction: adjacency corner block -> p x p x p tensor.
// ---------------------------------------------------------------------------

struct ReductionParams {
    double trunc_m = 4.0;
    double mu = 0.125;
    Dims3 target_dims{1, 1, 1};

    ReductionParams() = default;
    ReductionParams(double m, double shift, Dims3 target)
        : trunc_m(m), mu(shift), target_dims(target) {
        detail::require(std::isfinite(m) && m >= 4.0, "ReductionParams: need M >= 4");
        detail::require(shift > 0.0 && shift <= 1.0 / (2.0 * m),
                        "ReductionParams: need 0 < mu <= 1/(2M)");
    }

    /// M = sqrt(8 log N), mu = 1/(2M); target defaults to (N/3)^3.
    static ReductionParams for_vertices(std::size_t n) {
        const double m = std::sqrt(8.0 * std::log(static_cast<double>(n)));
        const std::size_t p = n / 3;
        return {m, 1.0 / (2.0 * m), {p, p, p}};
    }
};

/// Signal level the reduced instance is matched to for hardness exponent tau:
/// p^{3(1-tau)/4} / (2 sqrt(8 log 3p)). Informational only.
inline double reduction_lambda(std::size_t p, double tau) {
    const double pd = static_cast<double>(p);
    return std::pow(pd, 0.75 * (1.0 - tau)) / (2.0 * std::sqrt(8.0 * std::log(3.0 * pd)));
}

/// Disjoint vertex sets V1, V2, V3 (each of size p = N/3, N divisible by 6):
///   V1 = [0, p/2) u [3p/2, 2p), V2 = [p/2, p) u [2p, 5p/2), V3 = [p, 3p/2) u [5p/2, 3p).
/// The first p/2 members of each set lie in the first half of the vertices.
inline std::array<std::vector<std::size_t>, 3> reduction_sets(std::size_t n) {
    detail::require(n >= 6 && n % 6 == 0, "reduction: N must be a positive multiple of 6");
    const std::size_t p = n / 3, h = p / 2;
    std::array<std::vector<std::size_t>, 3> sets;
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t v = j * h; v < (j + 1) * h; ++v) sets[j].push_back(v);
        for (std::size_t v = 3 * h + j * h; v < 3 * h + (j + 1) * h; ++v) sets[j].push_back(v);
    }
    return sets;
}

/// The map T: Y = (1 - A0) * Xi^- + A0 * Xi^+ with
///   xi^+ = (Z + mu) 1(|Z| <= M),  xi^- = (Z' - mu) 1(|Z'| <= M),
/// Xi^+ and Xi^- drawn entrywise from independent streams.
inline Tensor3 gaussianize_block(const Tensor3& a0, const ReductionParams& params,
                                 const RngStream& rng) {
    Sampler plus(rng.derive(Role::xi_plus));
    Sampler minus(rng.derive(Role::xi_minus));
    const double m = params.trunc_m, mu = params.mu;
    std::vector<double> y(a0.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double a = a0.data()[n];
        detail::require(a == 0.0 || a == 1.0, "gaussianize: block entries must be 0 or 1");
        const double zp = plus.normal();
        const double zm = minus.normal();
        const double xp = std::abs(zp) <= m ? zp + mu : 0.0;
        const double xm = std::abs(zm) <= m ? zm - mu : 0.0;
        y[n] = a == 1.0 ? xp : xm;
    }
    return Tensor3(a0.dims(), std::move(y));
}

/// Corner block A0 = A[V1, V2, V3] of an instance's adjacency.
inline Tensor3 reduction_corner_block(const HyperAdjacency& adj) {
    return adj.block(reduction_sets(adj.n()));
}

inline Tensor3 gaussianize(const CliqueInstance& inst, const ReductionParams& params,
                           const RngStream& rng) {
    detail::require(inst.n % 6 == 0, "gaussianize: N must be divisible by 6");
    return gaussianize_block(reduction_corner_block(inst.adjacency), params, rng);
}

/// Zero-pad a tensor into the (0, 0, 0) corner of a larger one.
inline Tensor3 embed(const Tensor3& small, const Dims3& target) {
    const auto& d = small.dims();
    for (int m = 0; m < 3; ++m)
        detail::require(target[m] >= d[m], "embed: target smaller than source in mode " +
                                               std::to_string(m + 1));
    std::vector<double> v(target[0] * target[1] * target[2], 0.0);
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k)
                v[(i * target[1] + j) * target[2] + k] = small(i, j, k);
    return Tensor3(target, std::move(v));
}

/// Positions (0-based, within the V_j ordering above) of the clique vertices
/// that fall in each V_j: the supports of E[Y | C] in the reduced tensor.
inline std::array<std::vector<std::size_t>, 3> clique_block_supports(const CliqueInstance& inst,
                                                                     const ReductionParams&) {
    const auto sets = reduction_sets(inst.n);
    std::array<std::vector<std::size_t>, 3> supports;
    for (int j = 0; j < 3; ++j)
        for (std::size_t pos = 0; pos < sets[j].size(); ++pos)
            if (std::binary_search(inst.clique.begin(), inst.clique.end(), sets[j][pos]))
                supports[j].push_back(pos);
    return supports;
}

}  // namespace tsvd
