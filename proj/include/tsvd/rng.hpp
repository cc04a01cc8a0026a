#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace tsvd {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive hash of a sequence of 64-bit words.
constexpr std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto w : words) h = mix64(h ^ mix64(w));
    return h;
}

/// Role tags used to split one replication's randomness into independent streams.
enum class Role : std::uint64_t {
    factors = 1,
    core = 2,
    noise = 3,
    warmstart = 4,
    hypergraph = 5,
    xi_plus = 6,
    xi_minus = 7,
    placement = 8,
};

/// Identifies a reproducible random stream. Value type: the same (seed,
/// stream_id) always yields the same sample sequence.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Substream for a role and an optional index (e.g. the mode number).
    [[nodiscard]] RngStream derive(Role role, std::uint64_t index = 0) const noexcept {
        return {seed, hash_words({stream_id, static_cast<std::uint64_t>(role), index})};
    }

    /// stream_id = hash(base_seed, cell, replication).
    static RngStream for_replication(std::uint64_t base_seed, std::uint64_t cell,
                                     std::uint64_t rep) noexcept {
        return {base_seed, hash_words({base_seed, cell, rep})};
    }

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Sampler bound to one stream.
///
/// Engine: std::mt19937_64 seeded with hash(seed, stream_id). Uniforms take the
/// top 53 bits of each draw. Normals use the Marsaglia polar method, caching
/// the second variate of each accepted pair. Both methods are fixed so output
/// is identical on every conforming platform.
class Sampler {
public:
    explicit Sampler(const RngStream& s) : engine_(hash_words({s.seed, s.stream_id})) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Uniform integer in [0, n), n >= 1, by rejection of the biased low range.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) return x % n;
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace tsvd
