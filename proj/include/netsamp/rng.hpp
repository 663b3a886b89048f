#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>

namespace netsamp {

inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ generator. All draws used by the library go through the
/// member helpers below so that streams are bit-identical across platforms
/// (no std::*_distribution, whose output is implementation-defined).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0x5eed) {
        std::uint64_t sm = seed;
        for (auto &word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<__uint128_t>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Number of failures before the next success of a Bernoulli(p) sequence.
    std::uint64_t geometric_gap(double p) {
        if (p >= 1.0) return 0;
        if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
        const double gap = std::floor(std::log(uniform()) / std::log1p(-p));
        if (gap >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(gap);
    }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
};

/// Calls fn(k) for every k in [0, count) whose independent Bernoulli(p) trial
/// succeeds. Sparse probabilities use geometric skipping, dense ones direct draws.
template <typename Fn>
void for_each_success(std::size_t count, double p, Rng &rng, Fn &&fn) {
    if (count == 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    if (p >= 0.25) {
        for (std::size_t k = 0; k < count; ++k) {
            if (rng.bernoulli(p)) fn(k);
        }
        return;
    }
    std::size_t k = 0;
    while (true) {
        const std::uint64_t gap = rng.geometric_gap(p);
        if (gap >= count - k) return;
        k += static_cast<std::size_t>(gap);
        fn(k);
        if (++k >= count) return;
    }
}

enum class StreamPhase : std::uint64_t { design = 1, fastproc = 2 };

inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Independent stream keyed by (master seed, label, replicate, phase). The
/// stream a replicate consumes never depends on scheduling.
inline Rng derive_stream(std::uint64_t master, std::string_view label, std::uint64_t replicate,
                         StreamPhase phase) {
    std::uint64_t state = master;
    std::uint64_t key = splitmix64(state);
    state = key ^ hash_label(label);
    key = splitmix64(state);
    state = key ^ (replicate * 0xd1b54a32d192ed03ULL);
    key = splitmix64(state);
    state = key ^ static_cast<std::uint64_t>(phase);
    return Rng(splitmix64(state));
}

}  // namespace netsamp
