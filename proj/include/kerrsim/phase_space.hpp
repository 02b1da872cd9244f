#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace kerrsim {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Log-magnitude beyond which a trajectory is declared diverged and frozen.
inline constexpr double divergence_log_bound = 700.0;

enum class Frame { lab, rotating };

// One weighted phase-space sample, stored in logarithmic variables:
// alpha = exp(log_alpha), beta = exp(log_beta), Omega = exp(log_omega).
// The complex number variable is n = alpha*beta = exp(log_alpha + log_beta).
struct PhasePoint {
    cplx log_alpha{0.0, 0.0};
    cplx log_beta{0.0, 0.0};
    cplx log_omega{0.0, 0.0};
    bool diverged = false;

    cplx number() const { return std::exp(log_alpha + log_beta); }
};

// A trajectory ensemble plus its simulation clock and physical parameters.
// kappa is signed: the sign flips on time reversal. frame_phase accumulates
// n_bar * integral(kappa dt) for rotating-frame runs, so the lab-frame
// transform stays exact across a reversal (where kappa changes sign mid-run).
struct Ensemble {
    std::vector<PhasePoint> points;
    double t = 0.0;              // physical time, units of 1/|kappa|
    Frame frame = Frame::lab;
    double n_bar = 0.0;
    double kappa = 1.0;
    double frame_phase = 0.0;    // n_bar * integral_0^t kappa ds
    std::int64_t step_count = 0;

    // dimensionless time tau = sqrt(n_bar) |kappa| t / 2 pi
    double tau() const;

    std::size_t diverged_count() const;
};

// Delta-function coherent-state ensemble: alpha = beta = sqrt(n_bar), Omega = 1.
Ensemble init_coherent(double n_bar, std::size_t count);

// Undo the rotating-frame transformation:
//   alpha -> alpha * exp(-i theta), beta -> beta * exp(+i theta)
// with theta the accumulated frame phase (= kappa n_bar t for constant kappa).
// Requires frame == rotating.
Ensemble to_lab_frame(const Ensemble& e);

} // namespace kerrsim
