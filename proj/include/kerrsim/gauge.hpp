#pragma once

#include "kerrsim/phase_space.hpp"

namespace kerrsim {

enum class GaugeMode { constant, adaptive };

// Diffusion-gauge selection. The adaptive mode evaluates, per trajectory and
// per step (natural log),
//   g(tau, point) = (1/6) log{ (8 pi / sqrt(n_bar)) |n|^2 [2 tau_R - tau]
//                              + [1 + 4 n_y^2]^(3/2) }
// non-anticipatively at the pre-step state; it is only defined for
// tau <= 2 tau_R, where the bracket stays non-negative.
struct GaugeConfig {
    GaugeMode mode = GaugeMode::constant;
    double g0 = 0.0;      // constant mode
    double tau_r = 0.0;   // adaptive: reversal time horizon (dimensionless)
    double n_bar = 0.0;   // adaptive
};

double gauge_value(const GaugeConfig& cfg, double tau, cplx n);
double gauge_value(const GaugeConfig& cfg, double tau, const PhasePoint& p);

} // namespace kerrsim
