#pragma once

#include <cmath>
#include <cstdint>

namespace swcert {

/// 64-bit finalizer with full avalanche (splitmix64).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based random stream keyed by (master seed, trajectory, step).
/// Words are pure functions of the key and a running counter, so draws are
/// bit-identical no matter how work is partitioned across threads.
class NoiseStream {
public:
    NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory, std::uint64_t step) {
        std::uint64_t h = mix64(master_seed);
        h = mix64(h ^ (trajectory * 0xd6e8feb86659fd93ULL));
        h = mix64(h ^ (step * 0xa0761d6478bd642fULL));
        base_ = h;
    }

    std::uint64_t next_u64() { return mix64(base_ ^ (++counter_ * 0xe7037ed1a0b428dbULL)); }

    /// Uniform draw in the open-closed interval (0, 1].
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace swcert
