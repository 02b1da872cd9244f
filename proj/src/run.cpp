#include "kerrsim/run.hpp"

#include "kerrsim/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kerrsim {

using nlohmann::json;

namespace {

std::string gauge_mode_name(GaugeMode m) {
    return m == GaugeMode::constant ? "constant" : "adaptive";
}

GaugeMode gauge_mode_from(const std::string& s) {
    if (s == "constant") return GaugeMode::constant;
    if (s == "adaptive") return GaugeMode::adaptive;
    throw std::invalid_argument("unknown gauge mode: " + s);
}

std::string frame_name(Frame f) {
    return f == Frame::lab ? "lab" : "rotating";
}

Frame frame_from(const std::string& s) {
    if (s == "lab") return Frame::lab;
    if (s == "rotating") return Frame::rotating;
    throw std::invalid_argument("unknown frame: " + s);
}

KernelKind kernel_from(const std::string& s) {
    if (s == "auto") return KernelKind::automatic;
    if (s == "scalar") return KernelKind::scalar;
    if (s == "avx2") return KernelKind::avx2;
    throw std::invalid_argument("unknown kernel: " + s);
}

// highest n_bar for which the truncated Fock oracle is still cheap
constexpr double kOracleNbarLimit = 2048.0;

double duration_for(const ExperimentConfig& cfg, double tau_span) {
    return tau_span * two_pi / std::sqrt(cfg.n_bar);
}

double zscore(double value, double stderr_, double target) {
    const double diff = value - target;
    if (stderr_ > 0.0) return diff / stderr_;
    if (std::abs(diff) <= 1e-9 * std::max(1.0, std::abs(target))) return 0.0;
    return std::numeric_limits<double>::infinity();
}

struct WallTimer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

// oracle <a> in the ensemble's frame at physical time t
cplx oracle_mean_a(const ExperimentConfig& cfg, const FockState& st, double t) {
    cplx a = fock_evolve_mean_a(st, 1.0, t);
    if (cfg.frame == Frame::rotating) {
        const double theta = cfg.n_bar * t;  // kappa = +1 on the forward leg
        a *= std::exp(cplx(0.0, theta));
    }
    return a;
}

Verdict recovery_verdict(const Ensemble& final_state, double n_bar,
                         const BatchSpec& batches) {
    Verdict v;
    v.kind = "recovery";
    const Ensemble* e = &final_state;
    Ensemble lab;
    if (final_state.frame == Frame::rotating) {
        lab = to_lab_frame(final_state);
        e = &lab;
    }
    const MomentEstimate a = estimate_moment(*e, 0, 1, batches);
    const MomentEstimate n = estimate_moment(*e, 1, 1, batches);
    v.add("X", a.value.real(), a.stderr_re, std::sqrt(n_bar));
    v.add("Y", a.value.imag(), a.stderr_im, 0.0);
    v.add("n", n.value.real(), n.stderr_re, n_bar);
    return v;
}

} // namespace

void Verdict::add(std::string name, double value, double stderr_, double target) {
    VerdictCheck c;
    c.name = std::move(name);
    c.value = value;
    c.stderr_ = stderr_;
    c.target = target;
    c.z = zscore(value, stderr_, target);
    c.pass = std::abs(c.z) <= 3.0;
    checks.push_back(c);
    pass = pass && c.pass;
}

void Verdict::add_bool(std::string name, double value, double threshold, bool ok) {
    VerdictCheck c;
    c.name = std::move(name);
    c.value = value;
    c.target = threshold;
    c.z = 0.0;
    c.pass = ok;
    checks.push_back(c);
    pass = pass && c.pass;
}

void validate(const ExperimentConfig& cfg) {
    if (!(cfg.n_bar > 0.0)) throw std::invalid_argument("config: n_bar must be > 0");
    if (cfg.trajectories < 1)
        throw std::invalid_argument("config: trajectories must be >= 1");
    if (!(cfg.tau_r > 0.0)) throw std::invalid_argument("config: tau_r must be > 0");
    if (!(cfg.dt_tau > 0.0)) throw std::invalid_argument("config: dt_tau must be > 0");
    if (cfg.record_every < 1)
        throw std::invalid_argument("config: record_every must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (cfg.batch_count < 2)
        throw std::invalid_argument("config: batches must be >= 2");
    if (cfg.output_path.empty())
        throw std::invalid_argument("config: output_path must be non-empty");
    // lab-frame mean-field rotation must stay resolvable
    if (cfg.frame == Frame::lab && cfg.n_bar >= 1e6)
        throw std::invalid_argument(
            "config: n_bar >= 1e6 requires the rotating frame");
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["n_bar"] = cfg.n_bar;
    j["trajectories"] = cfg.trajectories;
    j["tau_r"] = cfg.tau_r;
    j["dt_tau"] = cfg.dt_tau;
    j["gauge"] = {{"mode", gauge_mode_name(cfg.gauge_mode)}, {"g0", cfg.g0}};
    j["frame"] = frame_name(cfg.frame);
    j["seed"] = cfg.seed;
    j["record_every"] = cfg.record_every;
    j["output_path"] = cfg.output_path;
    j["workers"] = cfg.workers;
    j["kernel"] = kernel_name(cfg.kernel);
    j["batches"] = cfg.batch_count;
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("n_bar")) cfg.n_bar = j.at("n_bar").get<double>();
    if (j.contains("trajectories"))
        cfg.trajectories = j.at("trajectories").get<std::size_t>();
    if (j.contains("tau_r")) cfg.tau_r = j.at("tau_r").get<double>();
    if (j.contains("dt_tau")) cfg.dt_tau = j.at("dt_tau").get<double>();
    if (j.contains("gauge")) {
        const json& g = j.at("gauge");
        if (g.contains("mode"))
            cfg.gauge_mode = gauge_mode_from(g.at("mode").get<std::string>());
        if (g.contains("g0")) cfg.g0 = g.at("g0").get<double>();
    }
    if (j.contains("frame")) cfg.frame = frame_from(j.at("frame").get<std::string>());
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("record_every"))
        cfg.record_every = j.at("record_every").get<std::int64_t>();
    if (j.contains("output_path"))
        cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("kernel"))
        cfg.kernel = kernel_from(j.at("kernel").get<std::string>());
    if (j.contains("batches")) cfg.batch_count = j.at("batches").get<std::size_t>();
    return cfg;
}

ExperimentConfig config_from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file: " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

double dt_physical(const ExperimentConfig& cfg) {
    return cfg.dt_tau * two_pi / std::sqrt(cfg.n_bar);
}

GaugeConfig gauge_config(const ExperimentConfig& cfg) {
    GaugeConfig g;
    g.mode = cfg.gauge_mode;
    g.g0 = cfg.g0;
    g.tau_r = cfg.tau_r;
    g.n_bar = cfg.n_bar;
    return g;
}

StepParams step_params(const ExperimentConfig& cfg) {
    StepParams p;
    p.dt = dt_physical(cfg);
    p.kappa = 1.0;
    p.frame = cfg.frame;
    p.n_bar = cfg.n_bar;
    p.gauge = gauge_config(cfg);
    return p;
}

EvolveOptions evolve_options(const ExperimentConfig& cfg) {
    EvolveOptions o;
    o.seed = cfg.seed;
    o.record_every = cfg.record_every;
    o.workers = cfg.workers;
    o.kernel = cfg.kernel;
    o.batches = BatchSpec{cfg.batch_count};
    return o;
}

RunResult run_forward(const ExperimentConfig& cfg) {
    validate(cfg);
    WallTimer timer;

    RunResult result;
    result.cfg = cfg;
    result.protocol = "forward";
    result.final_state = init_coherent(cfg.n_bar, cfg.trajectories);

    const StepParams params = step_params(cfg);
    const EvolveOptions opts = evolve_options(cfg);
    evolve(result.final_state, duration_for(cfg, 2.0 * cfg.tau_r), params, opts,
           result.record);
    result.record.wall_seconds = timer.seconds();

    if (cfg.n_bar <= kOracleNbarLimit) {
        const FockState st = fock_coherent(cfg.n_bar, default_cutoff(cfg.n_bar));
        Verdict v;
        v.kind = "oracle-collapse";
        std::size_t within = 0;
        for (const RecordRow& row : result.record.rows) {
            const double t = row.tau * two_pi / std::sqrt(cfg.n_bar);
            const cplx a = oracle_mean_a(cfg, st, t);
            const double z = zscore(row.x_mean, row.x_err, a.real());
            if (std::abs(z) <= 3.0) ++within;
        }
        const double frac =
            static_cast<double>(within) / static_cast<double>(result.record.rows.size());
        v.add_bool("oracle_within_3sigma_fraction", frac, 0.95, frac >= 0.95);
        result.verdict = v;
    }
    return result;
}

RunResult run_reversal(const ExperimentConfig& cfg, bool control) {
    validate(cfg);
    WallTimer timer;

    RunResult result;
    result.cfg = cfg;
    result.protocol = control ? "reversal-control" : "reversal";
    result.final_state = init_coherent(cfg.n_bar, cfg.trajectories);

    StepParams params = step_params(cfg);
    EvolveOptions opts = evolve_options(cfg);
    const double leg = duration_for(cfg, cfg.tau_r);

    evolve(result.final_state, leg, params, opts, result.record);
    if (!control) params = reverse(params);
    opts.emit_initial_row = false;
    evolve(result.final_state, leg, params, opts, result.record);
    result.record.wall_seconds = timer.seconds();

    result.verdict =
        recovery_verdict(result.final_state, cfg.n_bar, BatchSpec{cfg.batch_count});
    result.verdict->kind = control ? "recovery-control" : "recovery";
    return result;
}

RunResult run_avogadro(const ExperimentConfig& cfg) {
    ExperimentConfig acfg = cfg;
    acfg.frame = Frame::rotating;           // enforced by the protocol
    acfg.gauge_mode = GaugeMode::adaptive;
    validate(acfg);
    WallTimer timer;

    RunResult result;
    result.cfg = acfg;
    result.protocol = "avogadro";
    result.final_state = init_coherent(acfg.n_bar, acfg.trajectories);

    StepParams params = step_params(acfg);
    EvolveOptions opts = evolve_options(acfg);
    const double leg = duration_for(acfg, acfg.tau_r);

    evolve(result.final_state, leg, params, opts, result.record);
    params = reverse(params);
    opts.emit_initial_row = false;
    evolve(result.final_state, leg, params, opts, result.record);
    result.record.wall_seconds = timer.seconds();

    // envelope |<a>| is frame invariant; compare against sqrt(n_bar)
    const MomentEstimate a =
        estimate_moment(result.final_state, 0, 1, BatchSpec{acfg.batch_count});
    const double x = a.value.real(), y = a.value.imag();
    const double env = std::hypot(x, y);
    const double env_err =
        env > 0.0 ? std::sqrt(x * x * a.stderr_re * a.stderr_re +
                              y * y * a.stderr_im * a.stderr_im) /
                        env
                  : std::hypot(a.stderr_re, a.stderr_im);

    Verdict v;
    v.kind = "avogadro-recovery";
    v.add("envelope", env, env_err, std::sqrt(acfg.n_bar));
    const double frac_diverged =
        static_cast<double>(result.final_state.diverged_count()) /
        static_cast<double>(result.final_state.points.size());
    v.add_bool("diverged_fraction", frac_diverged, 0.01, frac_diverged <= 0.01);
    result.verdict = v;
    return result;
}

HistogramRun run_histograms(const ExperimentConfig& cfg,
                            std::vector<double> snapshot_taus, double bin_width) {
    validate(cfg);
    if (snapshot_taus.empty())
        throw std::invalid_argument("run_histograms: no snapshot taus");
    for (std::size_t i = 0; i < snapshot_taus.size(); ++i) {
        if (snapshot_taus[i] < 0.0 || snapshot_taus[i] > 2.0 * cfg.tau_r + 1e-12)
            throw std::invalid_argument(
                "run_histograms: snapshot taus must lie in [0, 2 tau_R]");
        if (i > 0 && snapshot_taus[i] <= snapshot_taus[i - 1])
            throw std::invalid_argument(
                "run_histograms: snapshot taus must be increasing");
    }

    HistogramRun out;
    out.cfg = cfg;
    out.taus = snapshot_taus;

    EvolveOptions opts = evolve_options(cfg);

    for (const bool reversed : {true, false}) {
        Ensemble e = init_coherent(cfg.n_bar, cfg.trajectories);
        StepParams params = step_params(cfg);
        RunRecord scratch;
        double tau_now = 0.0;
        bool flipped = false;
        auto advance_to = [&](double tau_target) {
            if (reversed && !flipped && tau_target > cfg.tau_r + 1e-12) {
                evolve(e, duration_for(cfg, cfg.tau_r - tau_now), params, opts, scratch);
                params = reverse(params);
                flipped = true;
                tau_now = cfg.tau_r;
            }
            if (reversed && !flipped && std::abs(tau_target - cfg.tau_r) <= 1e-12) {
                evolve(e, duration_for(cfg, tau_target - tau_now), params, opts, scratch);
                params = reverse(params);
                flipped = true;
                tau_now = tau_target;
                return;
            }
            if (tau_target > tau_now + 1e-12)
                evolve(e, duration_for(cfg, tau_target - tau_now), params, opts, scratch);
            tau_now = tau_target;
        };

        std::vector<Histogram>& dest = reversed ? out.reversed : out.forward;
        for (double tau : snapshot_taus) {
            advance_to(tau);
            dest.push_back(log_weight_histogram(e, bin_width));
        }
        if (reversed) {
            advance_to(2.0 * cfg.tau_r);
            out.moments = recovery_verdict(e, cfg.n_bar, BatchSpec{cfg.batch_count});
            out.moments.kind = "histogram-recovery";
        }
    }
    return out;
}

// ---- file output ----

std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("KERRSIM_OUT_DIR"))
            p = std::filesystem::path(dir) / p;
    }
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
}

void write_record_csv(const std::filesystem::path& file, const RunRecord& rec) {
    std::FILE* f = std::fopen(file.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + file.string());
    std::fprintf(f, "tau,X_mean,X_err,Y_mean,Y_err,n_mean,n_err,norm,diverged_count\n");
    for (const RecordRow& r : rec.rows)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld\n",
                     r.tau, r.x_mean, r.x_err, r.y_mean, r.y_err, r.n_mean, r.n_err,
                     r.norm, static_cast<long long>(r.diverged));
    std::fclose(f);
}

void write_histogram_csv(const std::filesystem::path& file, const Histogram& h) {
    std::FILE* f = std::fopen(file.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + file.string());
    std::fprintf(f, "bin_lo,bin_hi,count\n");
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        std::fprintf(f, "%.17g,%.17g,%lld\n", h.edge(i), h.edge(i + 1),
                     static_cast<long long>(h.counts[i]));
    std::fclose(f);
}

namespace {

json verdict_to_json(const Verdict& v) {
    json checks = json::array();
    for (const VerdictCheck& c : v.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"stderr", c.stderr_},
                          {"target", c.target},
                          {"z", std::isfinite(c.z) ? json(c.z) : json("inf")},
                          {"pass", c.pass}});
    return {{"kind", v.kind}, {"pass", v.pass}, {"checks", checks}};
}

} // namespace

void write_run_files(const RunResult& result) {
    const std::filesystem::path base = resolve_output(result.cfg.output_path);
    write_record_csv(base.string() + ".csv", result.record);

    json meta;
    meta["config"] = json::parse(config_to_json(result.cfg));
    meta["protocol"] = result.protocol;
    meta["code_version"] = code_version;
    meta["kernel"] = result.record.kernel;
    meta["workers"] = result.record.workers;
    meta["wall_seconds"] = result.record.wall_seconds;
    meta["frame"] = result.cfg.frame == Frame::lab ? "lab" : "rotating";
    meta["rows"] = result.record.rows.size();
    meta["diverged_final"] = result.final_state.diverged_count();
    if (result.verdict) meta["verdict"] = verdict_to_json(*result.verdict);

    std::ofstream out(base.string() + ".json");
    out << meta.dump(2) << "\n";
}

void write_histogram_files(const HistogramRun& result) {
    const std::filesystem::path base = resolve_output(result.cfg.output_path);
    json meta;
    meta["config"] = json::parse(config_to_json(result.cfg));
    meta["protocol"] = "histogram";
    meta["code_version"] = code_version;
    meta["bin_width"] =
        result.reversed.empty() ? 0.0 : result.reversed.front().bin_width;
    json snaps = json::array();
    for (std::size_t i = 0; i < result.taus.size(); ++i) {
        for (const bool reversed : {true, false}) {
            const Histogram& h = reversed ? result.reversed[i] : result.forward[i];
            const std::string name = base.filename().string() + "_" +
                                     (reversed ? "reversed" : "forward") + "_" +
                                     std::to_string(i) + ".csv";
            const std::filesystem::path file =
                base.has_parent_path() ? base.parent_path() / name
                                       : std::filesystem::path(name);
            write_histogram_csv(file, h);
            snaps.push_back({{"tau", result.taus[i]},
                             {"protocol", reversed ? "reversed" : "forward"},
                             {"file", name},
                             {"underflow", h.underflow},
                             {"overflow", h.overflow},
                             {"occupied_decades", h.occupied_span()}});
        }
    }
    meta["snapshots"] = snaps;
    meta["verdict"] = verdict_to_json(result.moments);
    std::ofstream out(base.string() + ".json");
    out << meta.dump(2) << "\n";
}

void write_oracle_csv(const std::filesystem::path& file, double n_bar,
                      double tau_max, std::size_t n_points) {
    if (n_points < 2) throw std::invalid_argument("oracle dump needs >= 2 points");
    const FockState st = fock_coherent(n_bar, default_cutoff(n_bar));
    std::FILE* f = std::fopen(file.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + file.string());
    std::fprintf(f, "tau,re_a,im_a,X,Y,abs_a\n");
    for (std::size_t i = 0; i < n_points; ++i) {
        const double tau =
            tau_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const double t = tau * two_pi / std::sqrt(n_bar);
        const cplx a = fock_evolve_mean_a(st, 1.0, t);
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", tau, a.real(),
                     a.imag(), a.real(), a.imag(), std::abs(a));
    }
    std::fclose(f);
}

} // namespace kerrsim
