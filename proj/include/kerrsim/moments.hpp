#pragma once

#include "kerrsim/phase_space.hpp"
#include "kerrsim/stats.hpp"

#include <utility>

namespace kerrsim {

// One quantum expectation value from the weighted-trajectory ratio estimator
//   <(a^dag)^m a^n> = < Omega beta^m alpha^n + (Omega alpha^m beta^n)* >
//                     / < Omega + Omega* >
// with standard errors from contiguous batch means.
struct MomentEstimate {
    cplx value{0.0, 0.0};
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    double norm = 0.0;          // mean of (Omega + Omega*) over included points
    std::size_t excluded = 0;   // diverged points left out of the averages
    std::size_t flagged_batches = 0;
};

// Numerator terms are evaluated as exp(log_omega + m log_beta + n log_alpha)
// so weights spanning hundreds of e-folds stay finite. For m > n the (n, m)
// estimator is evaluated and conjugated, which makes the Hermiticity identity
// estimate(m,n) == conj(estimate(n,m)) hold bit-exactly.
MomentEstimate estimate_moment(const Ensemble& e, int m, int n,
                               const BatchSpec& spec = {});

// Quadrature estimates X = Re<a>, Y = Im<a>. Rotating-frame ensembles are
// counter-rotated to the lab frame first.
std::pair<MomentEstimate, MomentEstimate> quadratures(const Ensemble& e,
                                                      const BatchSpec& spec = {});

} // namespace kerrsim
