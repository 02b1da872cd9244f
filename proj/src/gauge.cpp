#include "kerrsim/gauge.hpp"

#include "kerrsim/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrsim {

double gauge_value(const GaugeConfig& cfg, double tau, cplx n) {
    if (cfg.mode == GaugeMode::constant) return cfg.g0;

    if (!(cfg.tau_r > 0.0) || !(cfg.n_bar > 0.0))
        throw std::invalid_argument("gauge_value: adaptive mode needs tau_r > 0 and n_bar > 0");
    if (tau > 2.0 * cfg.tau_r)
        throw horizon_error("gauge_value: tau beyond the 2 tau_R horizon");

    const double eight_pi = 4.0 * two_pi;
    const double abs_n2 = n.real() * n.real() + n.imag() * n.imag();
    const double ny = n.imag();
    const double t = 1.0 + 4.0 * ny * ny;
    const double arg = (eight_pi / std::sqrt(cfg.n_bar)) * abs_n2 *
                           (2.0 * cfg.tau_r - tau) +
                       t * std::sqrt(t);
    return std::log(arg) / 6.0;
}

double gauge_value(const GaugeConfig& cfg, double tau, const PhasePoint& p) {
    return gauge_value(cfg, tau, p.number());
}

} // namespace kerrsim
