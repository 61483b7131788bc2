#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace tunelab {

/// SplitMix64 output mixer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Minimal SplitMix64 stream, used only to expand seeds.
struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr std::uint64_t next() noexcept {
        return splitmix64_mix(state += 0x9e3779b97f4a7c15ULL);
    }
};

/// Order-sensitive fold of one label into a running seed.
/// combine(h, a) != combine(h, b) for a != b, and the label order matters,
/// so (phase, config, run) tuples map to distinct streams.
constexpr std::uint64_t combine_seed(std::uint64_t h, std::uint64_t v) noexcept {
    return splitmix64_mix(h ^ (splitmix64_mix(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Per-run stream seed for a (phase, config_index, run_index) cell of a campaign.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t phase,
                                    std::uint64_t config_index, std::uint64_t run_index) noexcept {
    std::uint64_t h = combine_seed(master, phase);
    h = combine_seed(h, config_index);
    return combine_seed(h, run_index);
}

/// xoshiro256++ generator (Blackman and Vigna), state expanded from a 64-bit
/// seed through SplitMix64. Not an engine in the <random> sense on purpose:
/// every draw below consumes a fixed number of raw words, which keeps run
/// replay byte-stable across platforms and standard library versions.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept {
        SplitMix64 sm{seed};
        for (auto& word : state_) word = sm.next();
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits, one raw word.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). Fixed-point multiply; bias below n / 2^64.
    int below(int n) noexcept {
        return static_cast<int>(
            (static_cast<unsigned __int128>(next()) * static_cast<std::uint64_t>(n)) >> 64);
    }

    /// Standard normal via Box-Muller. Always consumes exactly two raw words;
    /// no spare is cached, so draw counts stay predictable.
    double normal01() noexcept {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;

    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, Xoshiro256& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        const int j = rng.below(i + 1);
        std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
}

/// k distinct values from [0, n), uniformly, in shuffled order.
/// Partial Fisher-Yates over a scratch identity permutation.
inline void sample_distinct(int n, int k, Xoshiro256& rng, std::vector<int>& out) {
    static thread_local std::vector<int> pool;
    pool.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    out.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int j = i + rng.below(n - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        out[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
}

}  // namespace tunelab
