#pragma once

#include "kerrsim/evolve.hpp"
#include "kerrsim/fock.hpp"
#include "kerrsim/stats.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace kerrsim {

inline constexpr const char* code_version = "kerrsim 0.1.0";

// Full experiment description. Serializes to a flat JSON object; CLI flags
// override individual fields. Times are dimensionless
// (tau = sqrt(n_bar) |kappa| t / 2 pi); runs use kappa = +1 internally and
// negate it at the reversal point.
struct ExperimentConfig {
    double n_bar = 100.0;
    std::size_t trajectories = 10000;
    double tau_r = 0.5;
    double dt_tau = 2e-4;
    GaugeMode gauge_mode = GaugeMode::constant;
    double g0 = 1.6;
    Frame frame = Frame::lab;
    std::uint64_t seed = 1;
    std::int64_t record_every = 25;
    std::string output_path = "run";
    int workers = 1;
    KernelKind kernel = KernelKind::automatic;
    std::size_t batch_count = 32;
};

void validate(const ExperimentConfig& cfg);

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_file(const std::filesystem::path& file);

// physical step and gauge derived from a config
double dt_physical(const ExperimentConfig& cfg);
GaugeConfig gauge_config(const ExperimentConfig& cfg);
StepParams step_params(const ExperimentConfig& cfg);
EvolveOptions evolve_options(const ExperimentConfig& cfg);

struct VerdictCheck {
    std::string name;
    double value = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct Verdict {
    std::string kind;
    bool pass = true;
    std::vector<VerdictCheck> checks;

    void add(std::string name, double value, double stderr_, double target);
    void add_bool(std::string name, double value, double threshold, bool ok);
};

struct RunResult {
    ExperimentConfig cfg;
    std::string protocol;
    RunRecord record;
    Ensemble final_state;
    std::optional<Verdict> verdict;
};

// Forward evolution 0 -> 2 tau_R. When the Fock oracle is tractable
// (n_bar <= 2048) the result carries an oracle-tracking verdict: PASS iff
// at least 95% of recorded points have |z| <= 3 against the exact curve.
RunResult run_forward(const ExperimentConfig& cfg);

// Forward to tau_R, negate kappa, evolve to 2 tau_R with fresh noises.
// Verdict: X, Y and a^dag a at 2 tau_R against their initial values, |z| <= 3.
// control = true skips the negation; the verdict is then expected to FAIL.
RunResult run_reversal(const ExperimentConfig& cfg, bool control = false);

// Reversal protocol in the rotating frame with the adaptive gauge (both
// enforced). Verdict: envelope |<a>| recovery within the run's own 3 sigma
// and a diverged fraction of at most 1%.
RunResult run_avogadro(const ExperimentConfig& cfg);

struct HistogramRun {
    ExperimentConfig cfg;
    std::vector<double> taus;
    std::vector<Histogram> reversed;
    std::vector<Histogram> forward;
    Verdict moments;  // reversed-protocol final moments vs the initial state
};

// log10|alpha Omega| histograms at the requested snapshot times for both the
// reversed and the pure-forward protocol.
HistogramRun run_histograms(const ExperimentConfig& cfg,
                            std::vector<double> snapshot_taus, double bin_width);

// ---- output files ----

// applies KERRSIM_OUT_DIR to relative paths
std::filesystem::path resolve_output(const std::string& path);

void write_record_csv(const std::filesystem::path& file, const RunRecord& rec);
void write_histogram_csv(const std::filesystem::path& file, const Histogram& h);

// <out>.csv + <out>.json
void write_run_files(const RunResult& result);
// one CSV per snapshot per protocol plus a JSON sidecar
void write_histogram_files(const HistogramRun& result);

// exact oracle curve dump: tau, re<a>, im<a>, X, Y, |a|
void write_oracle_csv(const std::filesystem::path& file, double n_bar,
                      double tau_max, std::size_t n_points);

} // namespace kerrsim
