#include "snls/rng.hpp"

#include <cmath>

namespace snls {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void round4x64(std::array<std::uint64_t, 4>& c, std::uint64_t k0, std::uint64_t k1) {
    const auto p0 = static_cast<unsigned __int128>(kMult0) * c[0];
    const auto p1 = static_cast<unsigned __int128>(kMult1) * c[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

PhiloxBlock philox4x64(const std::array<std::uint64_t, 4>& counter,
                       std::uint64_t key0, std::uint64_t key1) {
    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key0;
    std::uint64_t k1 = key1;
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        round4x64(c, k0, k1);
    }
    return {c};
}

GaussianQuad gaussian_quad(const std::array<std::uint64_t, 4>& counter,
                           std::uint64_t key0, std::uint64_t key1) {
    const PhiloxBlock b = philox4x64(counter, key0, key1);
    const double u0 = uniform_open01(b.words[0]);
    const double u1 = uniform_open01(b.words[1]);
    const double u2 = uniform_open01(b.words[2]);
    const double u3 = uniform_open01(b.words[3]);
    const double r0 = std::sqrt(-2.0 * std::log(u0));
    const double r1 = std::sqrt(-2.0 * std::log(u2));
    constexpr double two_pi = 6.283185307179586476925286766559;
    return {r0 * std::cos(two_pi * u1), r0 * std::sin(two_pi * u1),
            r1 * std::cos(two_pi * u3), r1 * std::sin(two_pi * u3)};
}

}  // namespace snls
