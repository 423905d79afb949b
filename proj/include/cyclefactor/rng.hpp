#ifndef CYCLEFACTOR_RNG_HPP
#define CYCLEFACTOR_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace cyclefactor {

using Seed = std::uint64_t;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for a named branch of a computation. Position-derived, so the
/// value never depends on scheduling order.
inline constexpr Seed derive_seed(Seed parent, std::uint64_t tag) noexcept {
    return splitmix64(splitmix64(parent) ^ (tag * 0xd1b54a32d192ed03ULL + 1));
}

inline constexpr Seed derive_seed(Seed parent, std::string_view tag) noexcept {
    // FNV-1a over the tag bytes
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return derive_seed(parent, h);
}

/// Seeded random stream. The engine is mt19937_64, whose output sequence is
/// fixed by the standard; bounded and real draws are done here rather than
/// through <random> distributions so results are identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= limit) return x % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace cyclefactor

#endif
