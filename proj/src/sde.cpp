#include "kerrsim/sde.hpp"

#include "kerrsim/step_core.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrsim {

cplx sqrt_ik(double kappa) {
    const double root = std::sqrt(std::abs(kappa));
    const double c45 = 0.70710678118654752440;
    const double s = kappa < 0.0 ? -1.0 : 1.0;
    return cplx(root * c45, s * root * c45);
}

LogDrift drift(const PhasePoint& p, double kappa, Frame frame, double n_bar) {
    if (p.diverged)
        throw std::invalid_argument("drift: point is diverged");
    const cplx n = p.number();
    const double nsub = frame == Frame::rotating ? n_bar : 0.0;
    const double w = kappa * (n.real() - nsub);
    return {cplx(0.0, -w), cplx(0.0, w), cplx(0.0, 0.0)};
}

std::pair<cplx, cplx> gauged_noises(double xi1, double xi2, double g, double kappa) {
    const cplx r = sqrt_ik(kappa);
    const double s = kappa < 0.0 ? -1.0 : 1.0;
    const double ch = std::cosh(g);
    const double sh = std::sinh(g);
    const cplx xg1 = r * cplx(ch * xi1, s * sh * xi2);
    const cplx xg2 = r * cplx(ch * xi2, s * sh * xi1);
    return {xg1, xg2};
}

cplx weight_strat_drift(cplx n, double kappa, double g) {
    const double e2g = std::exp(-g) * std::exp(-g);
    return 0.5 * std::abs(kappa) * e2g * std::conj(n);
}

PhasePoint step_with_noise(const PhasePoint& p, const StepParams& params,
                           double tau, double xi1, double xi2) {
    if (p.diverged)
        throw std::invalid_argument("step: point is diverged");
    if (!(params.dt > 0.0))
        throw std::invalid_argument("step: dt must be positive");

    const double nsub = params.frame == Frame::rotating ? params.n_bar : 0.0;
    const detail::StepCore core = detail::make_step_core(params.dt, params.kappa, nsub);

    const double g = params.gauge.mode == GaugeMode::constant
                         ? params.gauge.g0
                         : gauge_value(params.gauge, tau, p.number());
    const detail::GaugeTerms gt = detail::make_gauge_terms(g);

    detail::LogState L = detail::load_state(p);
    PhasePoint out = p;
    if (!detail::step_once(L, core, gt, xi1, xi2)) {
        out.diverged = true;
        return out;
    }
    detail::store_state(out, L);
    return out;
}

PhasePoint step(const PhasePoint& p, const StepParams& params, NoiseStream& stream,
                double tau) {
    const auto [xi1, xi2] = stream.next_gaussians();
    return step_with_noise(p, params, tau, xi1, xi2);
}

StepParams reverse(const StepParams& params) {
    StepParams out = params;
    out.kappa = -out.kappa;
    return out;
}

} // namespace kerrsim
