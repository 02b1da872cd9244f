#include "kerrsim/noise.hpp"
#include "kerrsim/phase_space.hpp"

#include <cmath>

namespace kerrsim {

namespace philox {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void round_once(std::uint32_t c[4], const std::uint32_t k[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c[1] ^ k[0];
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c[3] ^ k[1];
    const std::uint32_t n3 = lo0;
    c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
}

} // namespace

Block philox4x32(std::uint64_t key, Block counter) {
    std::uint32_t k[2] = {static_cast<std::uint32_t>(key),
                          static_cast<std::uint32_t>(key >> 32)};
    for (int r = 0; r < 10; ++r) {
        round_once(counter.w, k);
        k[0] += kW0;
        k[1] += kW1;
    }
    return counter;
}

} // namespace philox

philox::Block noise_block(std::uint64_t seed, std::uint64_t traj, std::uint64_t step) {
    philox::Block c;
    c.w[0] = static_cast<std::uint32_t>(step);
    c.w[1] = static_cast<std::uint32_t>(step >> 32);
    c.w[2] = static_cast<std::uint32_t>(traj);
    c.w[3] = static_cast<std::uint32_t>(traj >> 32);
    return philox::philox4x32(seed, c);
}

std::pair<double, double> uniform_pair(std::uint64_t seed, std::uint64_t traj,
                                       std::uint64_t step) {
    const philox::Block b = noise_block(seed, traj, step);
    const std::uint64_t x0 =
        (static_cast<std::uint64_t>(b.w[1]) << 32) | b.w[0];
    const std::uint64_t x1 =
        (static_cast<std::uint64_t>(b.w[3]) << 32) | b.w[2];
    const double u0 = static_cast<double>(x0 >> 12) * 0x1p-52;
    const double u1 = static_cast<double>(x1 >> 12) * 0x1p-52;
    return {u0, u1};
}

std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t traj,
                                        std::uint64_t step) {
    const auto [u0, u1] = uniform_pair(seed, traj, step);
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u0));
    const double angle = two_pi * u1;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace kerrsim
