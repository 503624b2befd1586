#pragma once

#include <array>
#include <cstdint>

namespace snls {

// Philox4x64-10 counter-based generator. A block cipher keyed by
// (seed, stream id) applied to a 256-bit counter; any (key, counter)
// pair can be evaluated independently, so parallel trajectories never
// share generator state.
struct PhiloxBlock {
    std::array<std::uint64_t, 4> words;
};

PhiloxBlock philox4x64(const std::array<std::uint64_t, 4>& counter,
                       std::uint64_t key0, std::uint64_t key1);

// Maps a uint64 to a double uniformly in (0, 1). 53-bit mantissa,
// offset so 0 is never produced (Box-Muller takes a log).
inline double uniform_open01(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// One Philox block -> two independent standard complex-normal draws
// (four N(0,1) reals) via Box-Muller.
struct GaussianQuad {
    double z0, z1, z2, z3;
};

GaussianQuad gaussian_quad(const std::array<std::uint64_t, 4>& counter,
                           std::uint64_t key0, std::uint64_t key1);

// Addressable noise source for one trajectory. `counter` advances once
// per integrator step (or per bulk request); `element` indexes within a
// request, so a field-sized draw is a pure function of
// (seed, trajectory_id, purpose, counter, element).
struct NoiseStream {
    std::uint64_t seed = 0;
    std::uint64_t trajectory_id = 0;
    std::uint64_t counter = 0;
    std::uint64_t purpose = 0;

    GaussianQuad quad(std::uint64_t element) const {
        return gaussian_quad({counter, element, purpose, 0}, seed, trajectory_id);
    }
    void advance() { ++counter; }
};

}  // namespace snls
