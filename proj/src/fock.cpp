#include "kerrsim/fock.hpp"

#include "kerrsim/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrsim {

std::size_t default_cutoff(double n_bar) {
    const double c = n_bar + 10.0 * std::sqrt(n_bar);
    return std::max<std::size_t>(20, static_cast<std::size_t>(std::ceil(c)));
}

FockState fock_coherent(double n_bar, std::size_t cutoff) {
    if (!(n_bar >= 0.0))
        throw std::invalid_argument("fock_coherent: n_bar must be non-negative");
    if (cutoff < 1)
        throw std::invalid_argument("fock_coherent: cutoff must be >= 1");

    FockState st;
    st.amplitudes.resize(cutoff + 1);
    if (n_bar == 0.0) {
        st.amplitudes.assign(cutoff + 1, cplx{0.0, 0.0});
        st.amplitudes[0] = cplx{1.0, 0.0};
        return st;
    }

    double norm = 0.0;
    for (std::size_t n = 0; n <= cutoff; ++n) {
        // log c_n = -n_bar/2 + (n/2) log n_bar - (1/2) log n!
        const double logc = -0.5 * n_bar +
                            0.5 * static_cast<double>(n) * std::log(n_bar) -
                            0.5 * std::lgamma(static_cast<double>(n) + 1.0);
        const double c = std::exp(logc);
        st.amplitudes[n] = cplx{c, 0.0};
        norm += c * c;
    }
    if (std::abs(norm - 1.0) > 1e-12)
        throw truncation_error("fock_coherent: cutoff too small, tail above 1e-12");
    return st;
}

cplx fock_evolve_mean_a(const FockState& state, double kappa, double t) {
    const std::size_t top = state.cutoff();
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n < top; ++n) {
        const double nn = static_cast<double>(n);
        const double phase = -kappa * t * nn;
        const cplx rot{std::cos(phase), std::sin(phase)};
        sum += std::conj(state.amplitudes[n]) * state.amplitudes[n + 1] *
               std::sqrt(nn + 1.0) * rot;
    }
    return sum;
}

cplx closed_form_mean_a(double n_bar, double kappa, double t) {
    if (!(n_bar >= 0.0))
        throw std::invalid_argument("closed_form_mean_a: n_bar must be non-negative");
    const cplx expo = n_bar * (std::exp(cplx(0.0, -kappa * t)) - 1.0);
    return std::sqrt(n_bar) * std::exp(expo);
}

Timescales timescales(double n_bar) {
    if (!(n_bar > 0.0))
        throw std::invalid_argument("timescales: n_bar must be positive");
    Timescales ts;
    ts.tau_osc = 1.0 / std::sqrt(n_bar);
    ts.tau_coll = 1.0;
    ts.tau_rev = std::sqrt(n_bar);
    return ts;
}

} // namespace kerrsim
