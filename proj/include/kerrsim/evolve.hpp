#pragma once

#include "kerrsim/kernel.hpp"
#include "kerrsim/moments.hpp"
#include "kerrsim/sde.hpp"
#include "kerrsim/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kerrsim {

// One recorded row of a run. Quadratures are reported in the ensemble's own
// frame (the metadata names the frame); norm is the mean of Omega + Omega*.
struct RecordRow {
    double tau = 0.0;
    double x_mean = 0.0, x_err = 0.0;
    double y_mean = 0.0, y_err = 0.0;
    double n_mean = 0.0, n_err = 0.0;
    double norm = 0.0;
    std::int64_t diverged = 0;
};

struct RunRecord {
    std::vector<RecordRow> rows;
    std::string kernel;
    int workers = 1;
    double wall_seconds = 0.0;
};

struct EvolveOptions {
    std::uint64_t seed = 0;
    std::int64_t record_every = 25;
    int workers = 1;
    KernelKind kernel = KernelKind::automatic;
    BatchSpec batches{};
    bool emit_initial_row = true;  // legs after the first suppress their t0 row
};

// Advances every trajectory of e over the given physical duration, recording
// estimates every record_every steps. The trajectory arithmetic depends only
// on (seed, trajectory index, absolute step index) and the recording
// reduction is a fixed pairwise tree, so output is byte-reproducible for any
// worker count. Aborts (divergence_abort) if more than half the ensemble
// diverges. The returned rows are appended to record.
void evolve(Ensemble& e, double duration, const StepParams& params,
            const EvolveOptions& opts, RunRecord& record);

// Convenience wrapper returning a fresh record.
RunRecord evolve(Ensemble& e, double duration, const StepParams& params,
                 const EvolveOptions& opts);

// Row evaluated on the current ensemble (also used at tau snapshots).
RecordRow record_row(const Ensemble& e, const BatchSpec& batches);

} // namespace kerrsim
