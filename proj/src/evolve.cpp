#include "kerrsim/evolve.hpp"

#include "kerrsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace kerrsim {

namespace {

// fixed work unit so trajectory grouping never depends on the worker count
constexpr std::size_t kChunk = 1024;

void run_span(PhasePoint* base, std::size_t n_points, std::int64_t s0,
              std::int64_t s1, const StepContext& ctx, StepBlockFn fn,
              int workers) {
    const std::size_t n_chunks = (n_points + kChunk - 1) / kChunk;
    auto work = [&](std::size_t w) {
        for (std::size_t c = w; c < n_chunks; c += static_cast<std::size_t>(workers)) {
            const std::size_t first = c * kChunk;
            const std::size_t count = std::min(kChunk, n_points - first);
            fn(base + first, first, count, s0, s1, ctx);
        }
    };
    if (workers <= 1) {
        work(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(work, static_cast<std::size_t>(w));
    for (auto& t : pool) t.join();
}

} // namespace

RecordRow record_row(const Ensemble& e, const BatchSpec& batches) {
    RecordRow row;
    row.tau = e.tau();
    row.diverged = static_cast<std::int64_t>(e.diverged_count());

    const MomentEstimate a = estimate_moment(e, 0, 1, batches);
    const MomentEstimate n = estimate_moment(e, 1, 1, batches);
    row.x_mean = a.value.real();
    row.x_err = a.stderr_re;
    row.y_mean = a.value.imag();
    row.y_err = a.stderr_im;
    row.n_mean = n.value.real();
    row.n_err = n.stderr_re;
    row.norm = a.norm;
    return row;
}

void evolve(Ensemble& e, double duration, const StepParams& params,
            const EvolveOptions& opts, RunRecord& record) {
    if (e.points.empty())
        throw std::invalid_argument("evolve: empty ensemble");
    if (duration < 0.0)
        throw std::invalid_argument("evolve: negative duration");
    if (!(params.dt > 0.0))
        throw std::invalid_argument("evolve: dt must be positive");
    if (opts.record_every < 1)
        throw std::invalid_argument("evolve: record_every must be >= 1");
    if (opts.workers < 1)
        throw std::invalid_argument("evolve: workers must be >= 1");

    const auto steps = static_cast<std::int64_t>(std::llround(duration / params.dt));

    StepContext ctx;
    ctx.dt = params.dt;
    ctx.dt_tau = std::sqrt(e.n_bar) * std::abs(params.kappa) * params.dt / two_pi;
    ctx.kappa = params.kappa;
    ctx.nsub = params.frame == Frame::rotating ? params.n_bar : 0.0;
    ctx.gauge = params.gauge;
    ctx.seed = opts.seed;

    if (ctx.gauge.mode == GaugeMode::adaptive) {
        const double last_tau =
            static_cast<double>(e.step_count + steps - 1) * ctx.dt_tau;
        if (steps > 0 && last_tau > 2.0 * ctx.gauge.tau_r * (1.0 + 1e-12))
            throw horizon_error("evolve: run extends past the adaptive gauge horizon");
    }

    const KernelKind kind = resolve_kernel(opts.kernel);
    const StepBlockFn fn = step_block_fn(kind);
    record.kernel = kernel_name(kind);
    record.workers = opts.workers;

    e.kappa = params.kappa;
    e.frame = params.frame;

    if (opts.emit_initial_row) record.rows.push_back(record_row(e, opts.batches));

    std::int64_t done = 0;
    while (done < steps) {
        const std::int64_t span = std::min(opts.record_every, steps - done);
        const std::int64_t s0 = e.step_count;
        run_span(e.points.data(), e.points.size(), s0, s0 + span, ctx, fn,
                 opts.workers);
        done += span;
        e.step_count += span;
        e.t = static_cast<double>(e.step_count) * params.dt;
        if (params.frame == Frame::rotating)
            e.frame_phase += params.n_bar * params.kappa *
                             (static_cast<double>(span) * params.dt);

        record.rows.push_back(record_row(e, opts.batches));
        const std::size_t bad = e.diverged_count();
        if (2 * bad > e.points.size())
            throw divergence_abort("evolve: more than half the ensemble diverged");
    }
}

RunRecord evolve(Ensemble& e, double duration, const StepParams& params,
                 const EvolveOptions& opts) {
    RunRecord rec;
    evolve(e, duration, params, opts, rec);
    return rec;
}

} // namespace kerrsim
