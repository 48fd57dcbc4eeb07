// rng.hpp — Philox4x32-10 counter-based generator and Gaussian draws
//
// A stream is addressed by (key, counter); nothing is stored between draws, so any
// trajectory can regenerate its noise independently of scheduling.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dissfield::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline Counter philox4x32_10(Counter ctr, Key key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += W0;
            key[1] += W1;
        }
        const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

// Uniform on (0, 1) from the top 53 bits; never returns 0 or 1.
inline double to_unit(std::uint64_t u) { return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53; }

// Stream for one trajectory: key = seed, counter = (index, 0, traj).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t traj)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          traj_lo_(static_cast<std::uint32_t>(traj)), traj_hi_(static_cast<std::uint32_t>(traj >> 32)) {}

    // Two independent standard normals for draw index j (Box-Muller).
    std::array<double, 2> normal_pair(std::uint32_t j) const {
        const Counter r = philox4x32_10({j, 0u, traj_lo_, traj_hi_}, key_);
        const double u1 = to_unit((std::uint64_t{r[1]} << 32) | r[0]);
        const double u2 = to_unit((std::uint64_t{r[3]} << 32) | r[2]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    Key key_;
    std::uint32_t traj_lo_;
    std::uint32_t traj_hi_;
};

} // namespace dissfield::rng
