#pragma once

#include "kerrsim/gauge.hpp"
#include "kerrsim/phase_space.hpp"

#include <cstdint>
#include <string>

namespace kerrsim {

// Static per-run context handed to the stepping kernels. tau for the gauge
// at absolute step index s is s * dt_tau.
struct StepContext {
    double dt = 0.0;       // physical step
    double dt_tau = 0.0;   // dimensionless tau advance per step
    double kappa = 1.0;
    double nsub = 0.0;     // n_bar in the rotating frame, else 0
    GaugeConfig gauge;
    std::uint64_t seed = 0;
};

// Advance points[0..count) (absolute trajectory indices first_traj + i)
// through steps [step_begin, step_end). Diverged points are frozen.
using StepBlockFn = void (*)(PhasePoint* points, std::uint64_t first_traj,
                             std::size_t count, std::int64_t step_begin,
                             std::int64_t step_end, const StepContext& ctx);

enum class KernelKind { automatic, scalar, avx2 };

bool avx2_available();

// automatic -> the fastest kernel this CPU supports.
KernelKind resolve_kernel(KernelKind requested);

StepBlockFn step_block_fn(KernelKind resolved);

std::string kernel_name(KernelKind k);

// kernels defined in their own translation units
void step_block_scalar(PhasePoint* points, std::uint64_t first_traj,
                       std::size_t count, std::int64_t step_begin,
                       std::int64_t step_end, const StepContext& ctx);
void step_block_avx2(PhasePoint* points, std::uint64_t first_traj,
                     std::size_t count, std::int64_t step_begin,
                     std::int64_t step_end, const StepContext& ctx);

// Equivalence-test entry points into the AVX2 lane internals. Only call
// these when avx2_available() is true.
namespace testing_hooks {
void avx2_uniform_pairs(std::uint64_t seed, const std::uint64_t traj[4],
                        std::uint64_t step, double u0[4], double u1[4]);
void avx2_gaussian_pairs(std::uint64_t seed, const std::uint64_t traj[4],
                         std::uint64_t step, double xi1[4], double xi2[4]);
void avx2_exp(const double in[4], double out[4]);
void avx2_log(const double in[4], double out[4]);
void avx2_sincos(const double in[4], double s[4], double c[4]);
} // namespace testing_hooks

} // namespace kerrsim
