// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace oufpt::rng {

// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011).  Pure
// function of (counter, key): any (seed, path, step, slot) coordinate can be
// drawn independently of every other, which makes parallel sampling
// deterministic regardless of scheduling.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

// One random block per (seed, path, step, slot).  step is limited to 32 bits;
// the samplers check their step budgets against that.
struct Stream {
    std::uint64_t seed;
    std::uint64_t path;

    std::array<std::uint32_t, 4> block(std::uint32_t step, std::uint32_t slot) const {
        return philox4x32({step, slot, static_cast<std::uint32_t>(path),
                           static_cast<std::uint32_t>(path >> 32)},
                          {static_cast<std::uint32_t>(seed),
                           static_cast<std::uint32_t>(seed >> 32)});
    }

    // Uniform in (0, 1] from 53 high bits of two words.
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(hi) << 32) | lo;
        return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(std::uint32_t step, std::uint32_t slot) const {
        const auto w = block(step, slot);
        return to_unit(w[0], w[1]);
    }

    // Standard normal via Box-Muller (cosine branch).
    double normal(std::uint32_t step, std::uint32_t slot) const {
        const auto w = block(step, slot);
        const double u1 = to_unit(w[0], w[1]);
        const double u2 = to_unit(w[2], w[3]);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }
};

}  // namespace oufpt::rng
