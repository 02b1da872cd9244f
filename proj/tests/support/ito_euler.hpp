#pragma once

// Independent reference integrator: explicit Ito-Euler on the raw variables
// (alpha, beta, Omega), no log transform, no Stratonovich corrections. Used
// to validate the production midpoint scheme; keep it free of step_core.

#include "kerrsim/gauge.hpp"
#include "kerrsim/noise.hpp"
#include "kerrsim/phase_space.hpp"
#include "kerrsim/sde.hpp"

#include <cmath>

namespace kerrsim::testsupport {

struct RawPoint {
    cplx alpha;
    cplx beta;
    cplx omega;
};

inline RawPoint raw_from_logs(const PhasePoint& p) {
    return {std::exp(p.log_alpha), std::exp(p.log_beta), std::exp(p.log_omega)};
}

inline PhasePoint logs_from_raw(const RawPoint& r) {
    PhasePoint p;
    p.log_alpha = std::log(r.alpha);
    p.log_beta = std::log(r.beta);
    p.log_omega = std::log(r.omega);
    return p;
}

// One Ito-Euler step with injected unit Gaussians. Uses the same
// sign-unified noise mixing as the production scheme (see gauged_noises).
inline RawPoint euler_step(const RawPoint& r, const StepParams& params, double tau,
                           double xi1, double xi2) {
    const double s = params.kappa < 0.0 ? -1.0 : 1.0;
    const cplx rt = sqrt_ik(params.kappa);
    const double nsub = params.frame == Frame::rotating ? params.n_bar : 0.0;
    const cplx n = r.alpha * r.beta;

    const double g = params.gauge.mode == GaugeMode::constant
                         ? params.gauge.g0
                         : gauge_value(params.gauge, tau, n);
    const double ch = std::cosh(g), sh = std::sinh(g);
    const double sqdt = std::sqrt(params.dt);
    const double dW1 = xi1 * sqdt, dW2 = xi2 * sqdt;

    const cplx xg1 = rt * cplx(ch * dW1, s * sh * dW2);
    const cplx xg2 = rt * cplx(ch * dW2, s * sh * dW1);

    const double drift = params.kappa * (n.real() - nsub) * params.dt;
    RawPoint out;
    out.alpha = r.alpha + cplx(0.0, 1.0) * r.alpha * (-drift + xg1);
    out.beta = r.beta + cplx(0.0, 1.0) * r.beta * (drift + std::conj(xg2));
    out.omega = r.omega - r.omega * n.imag() * std::exp(-g) * rt *
                              cplx(dW1, -s * dW2);
    return out;
}

inline RawPoint euler_step(const RawPoint& r, const StepParams& params, double tau,
                           NoiseStream& stream) {
    const auto [xi1, xi2] = stream.next_gaussians();
    return euler_step(r, params, tau, xi1, xi2);
}

} // namespace kerrsim::testsupport
