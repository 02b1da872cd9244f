#pragma once

#include "kerrsim/phase_space.hpp"

#include <cmath>

namespace kerrsim {
namespace detail {

// Scalar reference implementation of one semi-implicit Stratonovich midpoint
// step in log variables. The AVX2 kernel mirrors this arithmetic four
// trajectories at a time; keep the two in sync.
//
// Unified noise mixing with s = sign(kappa), r = sqrt(i kappa) (principal):
//   d log alpha : drift  i[-kappa (n_x - nsub) + kappa/2]
//                 noise  i r (ch dW1 + i s sh dW2)
//   d log beta  : drift  i[+kappa (n_x - nsub) - kappa/2]
//                 noise  i conj(r) (ch dW2 - i s sh dW1)
//   d log Omega : drift  (|kappa|/2) e^{-2g} conj(n)
//                 noise  -n_y e^{-g} r (dW1 - i s dW2), n_y at the midpoint
// with n = exp(log alpha + log beta).

inline constexpr double midpoint_tolerance = 1e-12;
inline constexpr int midpoint_iterations = 4;

struct StepCore {
    double dt = 0.0;
    double sqrt_dt = 0.0;
    double kappa = 0.0;
    double half_kappa = 0.0;      // kappa / 2
    double half_abs_kappa = 0.0;  // |kappa| / 2
    double nsub = 0.0;            // n_bar in the rotating frame, else 0
    double rr = 0.0, ri = 0.0;    // sqrt(i kappa)
    double s = 1.0;               // sign(kappa)
};

inline StepCore make_step_core(double dt, double kappa, double nsub) {
    StepCore c;
    c.dt = dt;
    c.sqrt_dt = std::sqrt(dt);
    c.kappa = kappa;
    c.half_kappa = 0.5 * kappa;
    c.half_abs_kappa = 0.5 * std::abs(kappa);
    c.nsub = nsub;
    const double root = std::sqrt(std::abs(kappa));
    const double c45 = 0.70710678118654752440;  // cos(pi/4)
    c.s = kappa < 0.0 ? -1.0 : 1.0;
    c.rr = root * c45;
    c.ri = c.s * root * c45;
    return c;
}

struct GaugeTerms {
    double ch = 1.0, sh = 0.0, eg = 1.0, e2g = 1.0;
};

inline GaugeTerms make_gauge_terms(double g) {
    GaugeTerms t;
    t.ch = std::cosh(g);
    t.sh = std::sinh(g);
    t.eg = std::exp(-g);
    t.e2g = t.eg * t.eg;
    return t;
}

struct LogState {
    double ar, ai;  // log alpha
    double br, bi;  // log beta
    double wr, wi;  // log Omega
};

inline LogState load_state(const PhasePoint& p) {
    return {p.log_alpha.real(), p.log_alpha.imag(),
            p.log_beta.real(),  p.log_beta.imag(),
            p.log_omega.real(), p.log_omega.imag()};
}

inline void store_state(PhasePoint& p, const LogState& l) {
    p.log_alpha = cplx(l.ar, l.ai);
    p.log_beta = cplx(l.br, l.bi);
    p.log_omega = cplx(l.wr, l.wi);
}

// Advances L one step. Returns false (leaving L untouched) when the midpoint
// iteration failed to settle, a log magnitude left the exp(700) window, or a
// component went non-finite.
inline bool step_once(LogState& L, const StepCore& c, const GaugeTerms& g,
                      double xi1, double xi2) {
    const double dW1 = xi1 * c.sqrt_dt;
    const double dW2 = xi2 * c.sqrt_dt;

    // noise increments with state-independent coefficients
    const double u1 = g.ch * dW1, v1 = c.s * g.sh * dW2;
    const double na_re = -(c.rr * v1 + c.ri * u1);
    const double na_im = c.rr * u1 - c.ri * v1;

    const double u2 = g.ch * dW2, v2 = -c.s * g.sh * dW1;
    const double nb_re = c.ri * u2 - c.rr * v2;
    const double nb_im = c.rr * u2 + c.ri * v2;

    const double w1 = dW1, w2 = -c.s * dW2;
    const double nw_re = -g.eg * (c.rr * w1 - c.ri * w2);
    const double nw_im = -g.eg * (c.rr * w2 + c.ri * w1);

    const double dwdrift = c.half_abs_kappa * g.e2g;

    double mar = L.ar, mai = L.ai;
    double mbr = L.br, mbi = L.bi;
    double mwr = L.wr, mwi = L.wi;
    double delta = 0.0;

    for (int it = 0; it < midpoint_iterations; ++it) {
        const double en = std::exp(mar + mbr);
        const double phi = mai + mbi;
        const double nx = en * std::cos(phi);
        const double ny = en * std::sin(phi);

        const double aa_im = -c.kappa * (nx - c.nsub) + c.half_kappa;
        const double ab_im = -aa_im;
        const double dw_re = dwdrift * nx;
        const double dw_im = -dwdrift * ny;

        const double nar = L.ar + 0.5 * na_re;
        const double nai = L.ai + 0.5 * (aa_im * c.dt + na_im);
        const double nbr = L.br + 0.5 * nb_re;
        const double nbi = L.bi + 0.5 * (ab_im * c.dt + nb_im);
        const double nwr = L.wr + 0.5 * (dw_re * c.dt + nw_re * ny);
        const double nwi = L.wi + 0.5 * (dw_im * c.dt + nw_im * ny);

        if (it == midpoint_iterations - 1) {
            delta = std::abs(nar - mar);
            delta = std::max(delta, std::abs(nai - mai));
            delta = std::max(delta, std::abs(nbr - mbr));
            delta = std::max(delta, std::abs(nbi - mbi));
            delta = std::max(delta, std::abs(nwr - mwr));
            delta = std::max(delta, std::abs(nwi - mwi));
        }
        mar = nar; mai = nai;
        mbr = nbr; mbi = nbi;
        mwr = nwr; mwi = nwi;
    }

    double scale = std::abs(mar);
    scale = std::max(scale, std::abs(mai));
    scale = std::max(scale, std::abs(mbr));
    scale = std::max(scale, std::abs(mbi));
    scale = std::max(scale, std::abs(mwr));
    scale = std::max(scale, std::abs(mwi));
    if (!(delta <= midpoint_tolerance * (1.0 + scale))) return false;

    const LogState out{2.0 * mar - L.ar, 2.0 * mai - L.ai,
                       2.0 * mbr - L.br, 2.0 * mbi - L.bi,
                       2.0 * mwr - L.wr, 2.0 * mwi - L.wi};
    const bool finite = std::isfinite(out.ar) && std::isfinite(out.ai) &&
                        std::isfinite(out.br) && std::isfinite(out.bi) &&
                        std::isfinite(out.wr) && std::isfinite(out.wi);
    if (!finite) return false;
    if (std::abs(out.ar) > divergence_log_bound ||
        std::abs(out.br) > divergence_log_bound ||
        std::abs(out.wr) > divergence_log_bound)
        return false;

    L = out;
    return true;
}

} // namespace detail
} // namespace kerrsim
