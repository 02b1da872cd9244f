#pragma once

#include "kerrsim/gauge.hpp"
#include "kerrsim/noise.hpp"
#include "kerrsim/phase_space.hpp"

#include <utility>

namespace kerrsim {

// Parameters of one integration step. kappa is signed; time reversal negates
// it and nothing else (the noise counters keep running forward).
struct StepParams {
    double dt = 0.0;          // physical time step
    double kappa = 1.0;
    Frame frame = Frame::lab;
    double n_bar = 0.0;       // rotating-frame subtraction and adaptive gauge
    GaugeConfig gauge;
};

// Principal branch of sqrt(i kappa):
//   sqrt(|kappa|) e^{+i pi/4} for kappa >= 0, sqrt(|kappa|) e^{-i pi/4} for kappa < 0.
cplx sqrt_ik(double kappa);

// Deterministic parts of the log-variable equations of motion, exactly as the
// amplitude/weight SDEs state them (no stochastic-calculus corrections):
//   d log alpha = -i kappa n_x, d log beta = +i kappa n_x, d log Omega = 0,
// with n_x -> n_x - n_bar in the rotating frame.
struct LogDrift {
    cplx d_log_alpha;
    cplx d_log_beta;
    cplx d_log_omega;
};
LogDrift drift(const PhasePoint& p, double kappa, Frame frame, double n_bar = 0.0);

// Diffusion-gauge mixing of the fundamental noises. For kappa >= 0,
//   xi_{g,j} = sqrt(i kappa) [xi_j cosh g + i xi_{3-j} sinh g];
// for kappa < 0 the sinh terms flip sign (the mixing runs through -g), which
// is what keeps the gauged system a consistent drift-gauge pair under
// Hamiltonian negation. At g = 0 both reduce to sqrt(i kappa) xi_j.
std::pair<cplx, cplx> gauged_noises(double xi1, double xi2, double g, double kappa);

// Stratonovich drift of log Omega induced by the noise mixing above,
// (|kappa|/2) e^{-2g} conj(n). Derived from the Ito -> Stratonovich
// correction; validated against the raw-variable Ito-Euler integrator.
cplx weight_strat_drift(cplx n, double kappa, double g);

// One semi-implicit Stratonovich midpoint step in log variables with
// injected unit Gaussians (test hook and refinement studies). Always runs
// four fixed-point iterations; the point is flagged diverged if the last
// iterate moved by more than 1e-12 relative, left the exp(700) window, or
// went non-finite.
PhasePoint step_with_noise(const PhasePoint& p, const StepParams& params,
                           double tau, double xi1, double xi2);

// Same, drawing the step's noises from the stream.
PhasePoint step(const PhasePoint& p, const StepParams& params, NoiseStream& stream,
                double tau);

// Hamiltonian negation: kappa -> -kappa. Noise streams are left untouched,
// so the reversed leg sees fresh, uncorrelated noises.
StepParams reverse(const StepParams& params);

} // namespace kerrsim
