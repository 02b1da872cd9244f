// kerrsim command line front end.
//
// Subcommands: forward, reverse, avogadro, histogram, oracle.
// Exit codes: 0 = success / verdict PASS, 1 = verdict FAIL, 2 = runtime error.

#include "kerrsim/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

namespace {

using namespace kerrsim;

struct CliOverrides {
    std::string config_file;
    ExperimentConfig base;
    bool has_n_bar = false, has_traj = false, has_tau_r = false, has_dt = false;
    bool has_gauge = false, has_g0 = false, has_frame = false, has_seed = false;
    bool has_record = false, has_out = false, has_workers = false, has_kernel = false;
    bool has_batches = false;
    double n_bar = 0.0, tau_r = 0.0, dt_tau = 0.0, g0 = 0.0;
    std::size_t trajectories = 0, batches = 0;
    std::string gauge, frame, out, kernel;
    std::uint64_t seed = 0;
    std::int64_t record_every = 0;
    int workers = 0;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_file, "JSON config file (flags override it)");
    cmd->add_option("--n-bar", o.n_bar, "mean boson number")->each([&](const std::string&) { o.has_n_bar = true; });
    cmd->add_option("--trajectories", o.trajectories, "stochastic trajectory count")->each([&](const std::string&) { o.has_traj = true; });
    cmd->add_option("--tau-r", o.tau_r, "reversal time (dimensionless tau)")->each([&](const std::string&) { o.has_tau_r = true; });
    cmd->add_option("--dt", o.dt_tau, "tau step")->each([&](const std::string&) { o.has_dt = true; });
    cmd->add_option("--gauge", o.gauge, "diffusion gauge: constant | adaptive")->each([&](const std::string&) { o.has_gauge = true; });
    cmd->add_option("--g0", o.g0, "constant gauge value")->each([&](const std::string&) { o.has_g0 = true; });
    cmd->add_option("--frame", o.frame, "lab | rotating")->each([&](const std::string&) { o.has_frame = true; });
    cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) { o.has_seed = true; });
    cmd->add_option("--record-every", o.record_every, "steps between records")->each([&](const std::string&) { o.has_record = true; });
    cmd->add_option("--out", o.out, "output path stem (KERRSIM_OUT_DIR applies)")->each([&](const std::string&) { o.has_out = true; });
    cmd->add_option("--workers", o.workers, "worker thread count")->each([&](const std::string&) { o.has_workers = true; });
    cmd->add_option("--kernel", o.kernel, "auto | scalar | avx2")->each([&](const std::string&) { o.has_kernel = true; });
    cmd->add_option("--batches", o.batches, "batch count for error bars")->each([&](const std::string&) { o.has_batches = true; });
}

ExperimentConfig build_config(const CliOverrides& o) {
    ExperimentConfig cfg;
    if (!o.config_file.empty()) cfg = config_from_file(o.config_file);
    ExperimentConfig merged = cfg;
    if (o.has_n_bar) merged.n_bar = o.n_bar;
    if (o.has_traj) merged.trajectories = o.trajectories;
    if (o.has_tau_r) merged.tau_r = o.tau_r;
    if (o.has_dt) merged.dt_tau = o.dt_tau;
    if (o.has_g0) merged.g0 = o.g0;
    if (o.has_seed) merged.seed = o.seed;
    if (o.has_record) merged.record_every = o.record_every;
    if (o.has_out) merged.output_path = o.out;
    if (o.has_workers) merged.workers = o.workers;
    if (o.has_batches) merged.batch_count = o.batches;
    if (o.has_gauge) {
        if (o.gauge == "constant") merged.gauge_mode = GaugeMode::constant;
        else if (o.gauge == "adaptive") merged.gauge_mode = GaugeMode::adaptive;
        else throw std::invalid_argument("unknown gauge mode: " + o.gauge);
    }
    if (o.has_frame) {
        if (o.frame == "lab") merged.frame = Frame::lab;
        else if (o.frame == "rotating") merged.frame = Frame::rotating;
        else throw std::invalid_argument("unknown frame: " + o.frame);
    }
    if (o.has_kernel) {
        if (o.kernel == "auto") merged.kernel = KernelKind::automatic;
        else if (o.kernel == "scalar") merged.kernel = KernelKind::scalar;
        else if (o.kernel == "avx2") merged.kernel = KernelKind::avx2;
        else throw std::invalid_argument("unknown kernel: " + o.kernel);
    }
    return merged;
}

void print_verdict(const Verdict& v) {
    std::printf("verdict (%s): %s\n", v.kind.c_str(), v.pass ? "PASS" : "FAIL");
    for (const VerdictCheck& c : v.checks)
        std::printf("  %-28s value=%.6g stderr=%.3g target=%.6g z=%.3g [%s]\n",
                    c.name.c_str(), c.value, c.stderr_, c.target, c.z,
                    c.pass ? "ok" : "FAIL");
}

int finish_run(const RunResult& result) {
    write_run_files(result);
    std::printf("%s: %zu rows, kernel=%s, %.2fs -> %s.csv\n",
                result.protocol.c_str(), result.record.rows.size(),
                result.record.kernel.c_str(), result.record.wall_seconds,
                resolve_output(result.cfg.output_path).string().c_str());
    if (result.verdict) {
        print_verdict(*result.verdict);
        return result.verdict->pass ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-gauge phase-space simulator for the Kerr oscillator"};
    app.require_subcommand(1);

    CliOverrides o_forward, o_reverse, o_avogadro, o_hist, o_oracle;
    bool control = false;
    std::vector<double> hist_taus;
    double bin_width = 0.1;
    double oracle_tau_max = 1.0;
    std::size_t oracle_points = 201;

    CLI::App* c_forward =
        app.add_subcommand("forward", "forward evolution 0 -> 2 tau_R");
    add_common_flags(c_forward, o_forward);

    CLI::App* c_reverse = app.add_subcommand(
        "reverse", "time-reversal test: forward to tau_R, negate kappa, return");
    add_common_flags(c_reverse, o_reverse);
    c_reverse->add_flag("--control", control,
                        "skip the kappa negation (recovery check must FAIL)");

    CLI::App* c_avogadro = app.add_subcommand(
        "avogadro", "reversal at macroscopic n_bar (rotating frame, adaptive gauge)");
    add_common_flags(c_avogadro, o_avogadro);

    CLI::App* c_hist = app.add_subcommand(
        "histogram", "log10|alpha Omega| histograms for both protocols");
    add_common_flags(c_hist, o_hist);
    c_hist->add_option("--taus", hist_taus, "snapshot taus (increasing)")
        ->delimiter(',');
    c_hist->add_option("--bin-width", bin_width, "histogram bin width (decades)");

    CLI::App* c_oracle =
        app.add_subcommand("oracle", "dump the exact <a>(tau) curve to CSV");
    add_common_flags(c_oracle, o_oracle);
    c_oracle->add_option("--tau-max", oracle_tau_max, "last tau in the dump");
    c_oracle->add_option("--points", oracle_points, "number of grid points");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_forward->parsed()) return finish_run(run_forward(build_config(o_forward)));
        if (c_reverse->parsed())
            return finish_run(run_reversal(build_config(o_reverse), control));
        if (c_avogadro->parsed())
            return finish_run(run_avogadro(build_config(o_avogadro)));
        if (c_hist->parsed()) {
            ExperimentConfig cfg = build_config(o_hist);
            if (hist_taus.empty()) hist_taus = {0.0, cfg.tau_r, 2.0 * cfg.tau_r};
            const HistogramRun hr = run_histograms(cfg, hist_taus, bin_width);
            write_histogram_files(hr);
            std::printf("histogram: %zu snapshots x 2 protocols -> %s_*.csv\n",
                        hr.taus.size(),
                        resolve_output(cfg.output_path).string().c_str());
            print_verdict(hr.moments);
            return hr.moments.pass ? 0 : 1;
        }
        if (c_oracle->parsed()) {
            ExperimentConfig cfg = build_config(o_oracle);
            const auto file = resolve_output(cfg.output_path).string() + "_oracle.csv";
            write_oracle_csv(file, cfg.n_bar, oracle_tau_max, oracle_points);
            std::printf("oracle: %zu points -> %s\n", oracle_points, file.c_str());
            return 0;
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
    return 2;
}
