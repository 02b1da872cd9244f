#include "kerrsim/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrsim {

double Ensemble::tau() const {
    return std::sqrt(n_bar) * std::abs(kappa) * t / two_pi;
}

std::size_t Ensemble::diverged_count() const {
    std::size_t c = 0;
    for (const PhasePoint& p : points)
        if (p.diverged) ++c;
    return c;
}

Ensemble init_coherent(double n_bar, std::size_t count) {
    if (!(n_bar > 0.0))
        throw std::invalid_argument("init_coherent: n_bar must be positive");
    if (count < 1)
        throw std::invalid_argument("init_coherent: count must be >= 1");

    Ensemble e;
    e.n_bar = n_bar;
    PhasePoint p;
    p.log_alpha = cplx(std::log(std::sqrt(n_bar)), 0.0);
    p.log_beta = p.log_alpha;
    p.log_omega = cplx(0.0, 0.0);
    e.points.assign(count, p);
    return e;
}

Ensemble to_lab_frame(const Ensemble& e) {
    if (e.frame != Frame::rotating)
        throw std::logic_error("to_lab_frame: ensemble is not in the rotating frame");

    Ensemble out = e;
    const double theta = e.frame_phase;  // n_bar * integral(kappa dt)
    for (PhasePoint& p : out.points) {
        p.log_alpha -= cplx(0.0, theta);
        p.log_beta += cplx(0.0, theta);
    }
    out.frame = Frame::lab;
    out.frame_phase = 0.0;
    return out;
}

} // namespace kerrsim
