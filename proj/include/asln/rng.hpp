#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace asln {

// xoshiro256++ (Blackman & Vigna 2019) seeded through splitmix64.
//
// Independent sub-streams are derived from (seed, tag): the tag is hashed
// with FNV-1a and folded into the splitmix64 seeding sequence, so the draws
// for A, a, B and the sample batches come from disjoint streams of one
// 64-bit seed. Gaussians use the Box-Muller transform on two uniforms,
// with the second variate of each pair cached. Determinism is guaranteed
// within one build, not bit-for-bit across implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { init(seed); }

    Rng(std::uint64_t seed, std::string_view tag) { init(seed ^ fnv1a(tag)); }

    std::uint64_t next_u64() {
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

    /// Uniform in (0, 1]; never returns 0 so log() is always safe.
    double uniform01() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double theta = 2.0 * std::numbers::pi * uniform01();
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    /// Derive a child seed for a named purpose (stable across runs).
    static std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
        std::uint64_t x = seed ^ fnv1a(tag);
        return splitmix64(x);
    }

private:
    void init(std::uint64_t seed) {
        // splitmix64 expansion; state of all zeros is unreachable this way.
        for (auto& w : s_) w = splitmix64(seed);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace asln
