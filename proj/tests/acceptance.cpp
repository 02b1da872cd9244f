// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line. Tolerances are pinned in code; nothing is calibrated at
// run time.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kerrsim/errors.hpp"
#include "kerrsim/evolve.hpp"
#include "kerrsim/fock.hpp"
#include "kerrsim/run.hpp"
#include "support/ito_euler.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace kerrsim;

namespace {

void report(int id, const char* what, bool pass) {
    std::printf("criterion %d (%s): %s\n", id, what, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "kerrsim_acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

ExperimentConfig fig1a_config() {
    ExperimentConfig cfg;
    cfg.n_bar = 100.0;
    cfg.trajectories = 10000;
    cfg.tau_r = 0.5;
    cfg.dt_tau = 2e-4;
    cfg.gauge_mode = GaugeMode::constant;
    cfg.g0 = 1.6;
    cfg.frame = Frame::lab;
    cfg.seed = 20240817;
    cfg.record_every = 25;
    cfg.output_path = (scratch_dir() / "fig1a").string();
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("criterion 1: oracle cross-validation") {
    bool pass = true;
    for (const double n_bar : {1.0, 10.0, 100.0}) {
        const FockState st = fock_coherent(n_bar, default_cutoff(n_bar));
        for (int i = 0; i < 50; ++i) {
            const double kt = two_pi * i / 49.0;
            const cplx fock = fock_evolve_mean_a(st, 1.0, kt);
            const cplx closed = closed_form_mean_a(n_bar, 1.0, kt);
            const double rel = std::abs(fock - closed) / std::abs(closed);
            if (!(rel < 1e-10)) {
                pass = false;
                MESSAGE("n_bar=", n_bar, " kt=", kt, " rel=", rel);
            }
        }
    }
    report(1, "closed form vs truncated Fock, rel < 1e-10", pass);
    CHECK(pass);
}

TEST_CASE("criterion 2: collapse reproduction against the Fock oracle") {
    const ExperimentConfig cfg = fig1a_config();
    const RunResult res = run_forward(cfg);
    write_run_files(res);

    // recompute the oracle comparison explicitly at every recorded point
    const FockState st = fock_coherent(cfg.n_bar, default_cutoff(cfg.n_bar));
    std::size_t within = 0;
    for (const RecordRow& row : res.record.rows) {
        const double t = row.tau * two_pi / std::sqrt(cfg.n_bar);
        const double x_oracle = fock_evolve_mean_a(st, 1.0, t).real();
        const double z = row.x_err > 0.0
                             ? (row.x_mean - x_oracle) / row.x_err
                             : (std::abs(row.x_mean - x_oracle) < 1e-9 ? 0.0 : 1e9);
        if (std::abs(z) <= 3.0) ++within;
    }
    const double frac =
        static_cast<double>(within) / static_cast<double>(res.record.rows.size());
    const bool pass = frac >= 0.95 && res.verdict && res.verdict->pass;
    std::printf("  [collapse] %zu/%zu recorded points within 3 sigma (%.1f%%)\n",
                within, res.record.rows.size(), 100.0 * frac);
    report(2, "X(tau) tracks the Fock collapse curve, >= 95% of points", pass);
    CHECK(pass);
}

TEST_CASE("criterion 3: time-reversal recovery and failing control") {
    ExperimentConfig cfg = fig1a_config();
    cfg.output_path = (scratch_dir() / "fig1a_rev").string();
    const RunResult rev = run_reversal(cfg);
    write_run_files(rev);

    bool x_ok = false, n_ok = false;
    for (const VerdictCheck& c : rev.verdict->checks) {
        if (c.name == "X") {
            x_ok = c.pass;
            std::printf("  [recovery] X(2tau_R) = %.3f +- %.3f (target 10, z=%.2f)\n",
                        c.value, c.stderr_, c.z);
        }
        if (c.name == "n") {
            n_ok = c.pass;
            std::printf("  [recovery] n(2tau_R) = %.3f +- %.3f (target 100, z=%.2f)\n",
                        c.value, c.stderr_, c.z);
        }
    }

    ExperimentConfig ctl = cfg;
    ctl.output_path = (scratch_dir() / "fig1a_ctl").string();
    const RunResult control = run_reversal(ctl, true);
    write_run_files(control);
    const bool control_fails = control.verdict && !control.verdict->pass;
    std::printf("  [control] un-negated run verdict: %s (must FAIL)\n",
                control.verdict->pass ? "PASS" : "FAIL");

    const bool pass = x_ok && n_ok && rev.verdict->pass && control_fails;
    report(3, "X and n recovered within 3 sigma; control fails", pass);
    CHECK(pass);
}

TEST_CASE("criterion 4: Avogadro-scale reversal, desk-scaled") {
    ExperimentConfig cfg;
    cfg.n_bar = 6.022e23;
    cfg.trajectories = 100000;
    cfg.tau_r = 0.5;
    cfg.dt_tau = 2e-4;
    cfg.frame = Frame::rotating;
    cfg.gauge_mode = GaugeMode::adaptive;
    cfg.seed = 424242;
    cfg.record_every = 100;
    cfg.output_path = (scratch_dir() / "avogadro").string();

    const RunResult res = run_avogadro(cfg);
    write_run_files(res);

    bool env_ok = false, overflow_ok = false;
    for (const VerdictCheck& c : res.verdict->checks) {
        if (c.name == "envelope") {
            env_ok = c.pass;
            std::printf("  [avogadro] envelope/sqrt(n_bar) = %.4f +- %.4f (z=%.2f)\n",
                        c.value / std::sqrt(cfg.n_bar),
                        c.stderr_ / std::sqrt(cfg.n_bar), c.z);
        }
        if (c.name == "diverged_fraction") {
            overflow_ok = c.pass;
            std::printf("  [avogadro] diverged fraction = %.5f (allowed 0.01)\n",
                        c.value);
        }
    }
    const bool pass = env_ok && overflow_ok;
    report(4, "n_bar = 6.022e23 envelope recovery, <= 1% overflow", pass);
    CHECK(pass);
}

TEST_CASE("criterion 5: weight histogram broadening with preserved moments") {
    ExperimentConfig cfg = fig1a_config();
    cfg.output_path = (scratch_dir() / "hist").string();
    const HistogramRun hr = run_histograms(cfg, {0.0, 0.5, 1.0}, 0.1);
    write_histogram_files(hr);

    const double span0 = hr.reversed[0].occupied_span();
    const double span2 = hr.reversed[2].occupied_span();
    const bool single_bin = std::abs(span0 - 0.1) < 1e-12 &&
                            hr.reversed[0].underflow == 0 &&
                            hr.reversed[0].overflow == 0;
    const bool broad = span2 >= 2.0;
    const bool moments_ok = hr.moments.pass;
    std::printf("  [histogram] span(tau=0) = %.2f decades, span(2tau_R) = %.2f decades\n",
                span0, span2);
    std::printf("  [histogram] reversed-ensemble moment recovery: %s\n",
                moments_ok ? "PASS" : "FAIL");
    const bool pass = single_bin && broad && moments_ok;
    report(5, "1 bin at tau=0, >= 2 decades at 2tau_R, moments preserved", pass);
    CHECK(pass);
}

TEST_CASE("criterion 6: gauge symmetry of the means") {
    RunRecord recs[2];
    int gi = 0;
    for (const double g : {0.0, 1.6}) {
        Ensemble e = init_coherent(100.0, 10000);
        StepParams params;
        params.dt = 2e-4 * two_pi / 10.0;
        params.kappa = 1.0;
        params.frame = Frame::lab;
        params.n_bar = 100.0;
        params.gauge.mode = GaugeMode::constant;
        params.gauge.g0 = g;
        EvolveOptions opts;
        opts.seed = 777001;
        opts.record_every = 25;
        recs[gi++] = evolve(e, 1000 * params.dt, params, opts);
    }
    bool pass = recs[0].rows.size() == recs[1].rows.size();
    double worst = 0.0;
    for (std::size_t i = 0; pass && i < recs[0].rows.size(); ++i) {
        const RecordRow& a = recs[0].rows[i];
        const RecordRow& b = recs[1].rows[i];
        const double diff = std::abs(a.x_mean - b.x_mean);
        const double combined = std::hypot(a.x_err, b.x_err);
        if (diff > 0.0 && !(diff <= 3.0 * combined)) pass = false;
        if (combined > 0.0) worst = std::max(worst, diff / combined);
    }
    std::printf("  [gauge] worst |dX| / combined stderr over tau <= 0.2: %.2f\n", worst);
    report(6, "g = 0 and g = 1.6 means agree within 3x combined error", pass);
    CHECK(pass);
}

TEST_CASE("criterion 7: dyadic dt self-convergence and Ito-Euler agreement") {
    // shared Brownian path: coarse increments are sums of finest increments
    const double n_bar = 10.0;
    const std::size_t traj = 16384;
    const double tau_end = 0.3;
    const double dt_tau_fine = 2e-4;
    const int levels = 4;  // dt_tau = 16e-4, 8e-4, 4e-4, 2e-4
    const std::int64_t fine_steps = 1500;
    const std::uint64_t seed = 31337;

    auto coarse_xi = [&](std::uint64_t t, std::int64_t coarse_step, int lvl,
                         double& xi1, double& xi2) {
        const std::int64_t width = std::int64_t{1} << lvl;
        double s1 = 0.0, s2 = 0.0;
        for (std::int64_t j = 0; j < width; ++j) {
            const auto [a, b] = gaussian_pair(
                seed, t, static_cast<std::uint64_t>(coarse_step * width + j));
            s1 += a;
            s2 += b;
        }
        const double norm = std::sqrt(static_cast<double>(width));
        xi1 = s1 / norm;
        xi2 = s2 / norm;
    };

    double x[levels], xerr[levels];
    for (int lvl = levels - 1; lvl >= 0; --lvl) {
        const double dt_tau = dt_tau_fine * static_cast<double>(1 << lvl);
        StepParams params;
        params.dt = dt_tau * two_pi / std::sqrt(n_bar);
        params.kappa = 1.0;
        params.frame = Frame::lab;
        params.n_bar = n_bar;
        params.gauge.mode = GaugeMode::constant;
        params.gauge.g0 = 1.6;
        const std::int64_t steps = fine_steps >> lvl;

        Ensemble e = init_coherent(n_bar, traj);
        for (std::uint64_t t = 0; t < traj; ++t) {
            PhasePoint p = e.points[t];
            for (std::int64_t s = 0; s < steps && !p.diverged; ++s) {
                double xi1, xi2;
                coarse_xi(t, s, lvl, xi1, xi2);
                p = step_with_noise(p, params, s * dt_tau, xi1, xi2);
            }
            e.points[t] = p;
        }
        const MomentEstimate a = estimate_moment(e, 0, 1);
        x[lvl] = a.value.real();
        xerr[lvl] = a.stderr_re;
        std::printf("  [dt] dt_tau = %.0e: X(%.1f) = %.5f +- %.5f\n", dt_tau,
                    tau_end, x[lvl], xerr[lvl]);
    }

    // Ito-Euler on raw variables, same finest path
    {
        StepParams params;
        params.dt = dt_tau_fine * two_pi / std::sqrt(n_bar);
        params.kappa = 1.0;
        params.frame = Frame::lab;
        params.n_bar = n_bar;
        params.gauge.mode = GaugeMode::constant;
        params.gauge.g0 = 1.6;

        Ensemble e = init_coherent(n_bar, traj);
        for (std::uint64_t t = 0; t < traj; ++t) {
            testsupport::RawPoint r = testsupport::raw_from_logs(e.points[t]);
            for (std::int64_t s = 0; s < fine_steps; ++s) {
                const auto [xi1, xi2] =
                    gaussian_pair(seed, t, static_cast<std::uint64_t>(s));
                r = testsupport::euler_step(r, params, s * dt_tau_fine, xi1, xi2);
            }
            e.points[t] = testsupport::logs_from_raw(r);
        }
        const MomentEstimate a = estimate_moment(e, 0, 1);
        const double x_euler = a.value.real();
        std::printf("  [dt] Ito-Euler at dt_tau = %.0e: X = %.5f +- %.5f\n",
                    dt_tau_fine, x_euler, a.stderr_re);

        const double pair_diff = std::abs(x[1] - x[0]);
        const double euler_diff = std::abs(x_euler - x[0]);
        const bool pass = pair_diff < xerr[0] && euler_diff < xerr[0];
        std::printf("  [dt] finest-pair diff = %.5f, Euler diff = %.5f, 1 sigma = %.5f\n",
                    pair_diff, euler_diff, xerr[0]);
        report(7, "dt refinement self-converges; Euler agrees at finest dt", pass);
        CHECK(pass);
    }
}

TEST_CASE("criterion 8: byte-identical CSV across worker counts") {
    ExperimentConfig cfg = fig1a_config();
    cfg.trajectories = 2000;
    cfg.tau_r = 0.05;
    cfg.record_every = 25;

    cfg.workers = 1;
    cfg.output_path = (scratch_dir() / "det_w1").string();
    write_run_files(run_forward(cfg));

    cfg.workers = 4;
    cfg.output_path = (scratch_dir() / "det_w4").string();
    write_run_files(run_forward(cfg));

    const std::string a = slurp(scratch_dir() / "det_w1.csv");
    const std::string b = slurp(scratch_dir() / "det_w4.csv");
    const bool pass = !a.empty() && a == b;
    std::printf("  [determinism] %zu bytes, identical: %s\n", a.size(),
                pass ? "yes" : "NO");
    report(8, "1-worker and 4-worker CSV outputs are byte-identical", pass);
    CHECK(pass);
}
