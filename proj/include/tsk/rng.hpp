#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based splittable randomness. A stream is addressed by
// (master seed, stream index); distinct indices give streams that are
// independent in practice and reproducible across thread counts, since a
// stream's output never depends on which thread opened it.
//
// Stream index conventions used across the project:
//   - sketch constructors read stage/factor k from stream k (and the
//     sampling component of factor k from stream order+k),
//   - Monte-Carlo drivers give trial t the stream kTrialStreamBase + t,
//   - derived child seeds (e.g. per-degree kernel sketches) come from
//     derive_seed(seed, tag).

namespace tsk {

inline constexpr std::uint64_t kTrialStreamBase = std::uint64_t{1} << 32;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t init = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& s : state_) s = splitmix64(init);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    // xoshiro256**
    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log argument.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform index in [0, n). Multiply-shift; bias is O(n/2^64).
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// +-1 with even probability.
    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller (explicit so streams stay
    /// library-independent). Both values of each draw pair are used.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Deterministic child seed for nested constructions.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return RngStream(seed, tag).next_u64();
}

/// Seed for the sketch drawn in Monte-Carlo trial t.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return derive_seed(seed, kTrialStreamBase + trial);
}

}  // namespace tsk
