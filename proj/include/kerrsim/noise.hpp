#pragma once

#include <cstdint>
#include <utility>

namespace kerrsim {

// Counter-based noise generation: Philox4x32-10 keyed by the master seed,
// with the 128-bit counter laid out as (step_lo, step_hi, traj_lo, traj_hi).
// Every (seed, trajectory, step) triple maps to exactly one Philox block,
// which yields the two unit Gaussians of that step via Box-Muller. Streams
// never rewind; on time reversal the step counter keeps increasing, so the
// reversed leg draws fresh noises by construction.

namespace philox {

struct Block {
    std::uint32_t w[4];
};

Block philox4x32(std::uint64_t key, Block counter);

} // namespace philox

// Raw Philox block for (seed, trajectory, step).
philox::Block noise_block(std::uint64_t seed, std::uint64_t traj, std::uint64_t step);

// Two uniforms in [0,1). Both kernels use the same (x >> 12) * 2^-52 recipe,
// so the uniforms are bit-identical across scalar and SIMD paths.
std::pair<double, double> uniform_pair(std::uint64_t seed, std::uint64_t traj,
                                       std::uint64_t step);

// Two independent unit Gaussians (Box-Muller).
std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t traj,
                                        std::uint64_t step);

// Stateful view of one trajectory's stream; step_counter advances per draw.
struct NoiseStream {
    std::uint64_t master_seed = 0;
    std::uint64_t trajectory_index = 0;
    std::uint64_t step_counter = 0;

    std::pair<double, double> next_gaussians() {
        return gaussian_pair(master_seed, trajectory_index, step_counter++);
    }
};

} // namespace kerrsim
