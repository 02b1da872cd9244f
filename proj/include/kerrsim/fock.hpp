#pragma once

#include "kerrsim/phase_space.hpp"

#include <cstddef>
#include <vector>

namespace kerrsim {

// Exact reference dynamics of H = (kappa/2) a^dag^2 a^2 in a truncated number
// basis. Number-state energies are E_n = (kappa/2) n (n-1), so every <a>
// matrix element just picks up the phase e^{-i kappa t n}.
struct FockState {
    std::vector<cplx> amplitudes;  // c_n, n = 0..cutoff
    std::size_t cutoff() const { return amplitudes.size() - 1; }
};

struct Timescales {
    double tau_osc = 0.0;
    double tau_coll = 0.0;
    double tau_rev = 0.0;
};

// Poisson-tail cutoff rule: n_bar + 10 sqrt(n_bar), at least 20.
std::size_t default_cutoff(double n_bar);

// Coherent state |sqrt(n_bar)>, coefficients built in log space. Throws
// truncation_error if the cutoff leaves more than 1e-12 of the norm behind.
FockState fock_coherent(double n_bar, std::size_t cutoff);

// <a>(t) = sum_n c_{n+1} c_n^* sqrt(n+1) e^{-i kappa t n}
cplx fock_evolve_mean_a(const FockState& state, double kappa, double t);

// Closed-form candidate sqrt(n_bar) exp(n_bar (e^{-i kappa t} - 1)).
// Cross-validated against the truncated Fock sum before use as an oracle.
cplx closed_form_mean_a(double n_bar, double kappa, double t);

// tau_rev = sqrt(n_bar) exactly; tau_osc and tau_coll are the representative
// order-of-magnitude scales 1/sqrt(n_bar) and 1.
Timescales timescales(double n_bar);

} // namespace kerrsim
