#pragma once

#include <stdexcept>
#include <string>

namespace kerrsim {

// Ratio estimator denominator fell below tolerance; the estimate is meaningless.
struct normalization_error : std::runtime_error {
    explicit normalization_error(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive gauge evaluated past its reversal horizon (tau > 2 tau_R).
struct horizon_error : std::domain_error {
    explicit horizon_error(const std::string& what) : std::domain_error(what) {}
};

// Fock-space cutoff too small for the requested state.
struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

// More than half of the trajectory ensemble diverged; the run was aborted.
struct divergence_abort : std::runtime_error {
    explicit divergence_abort(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kerrsim
