#include "kerrsim/kernel.hpp"
#include "kerrsim/noise.hpp"
#include "kerrsim/step_core.hpp"

namespace kerrsim {

void step_block_scalar(PhasePoint* points, std::uint64_t first_traj,
                       std::size_t count, std::int64_t step_begin,
                       std::int64_t step_end, const StepContext& ctx) {
    const detail::StepCore core = detail::make_step_core(ctx.dt, ctx.kappa, ctx.nsub);
    const bool constant_gauge = ctx.gauge.mode == GaugeMode::constant;
    const detail::GaugeTerms fixed =
        constant_gauge ? detail::make_gauge_terms(ctx.gauge.g0) : detail::GaugeTerms{};

    for (std::size_t i = 0; i < count; ++i) {
        PhasePoint& p = points[i];
        if (p.diverged) continue;
        const std::uint64_t traj = first_traj + i;
        detail::LogState L = detail::load_state(p);

        for (std::int64_t s = step_begin; s < step_end; ++s) {
            const auto [xi1, xi2] =
                gaussian_pair(ctx.seed, traj, static_cast<std::uint64_t>(s));
            detail::GaugeTerms gt = fixed;
            if (!constant_gauge) {
                const double tau = static_cast<double>(s) * ctx.dt_tau;
                const cplx n0 = std::exp(cplx(L.ar + L.br, L.ai + L.bi));
                gt = detail::make_gauge_terms(gauge_value(ctx.gauge, tau, n0));
            }
            if (!detail::step_once(L, core, gt, xi1, xi2)) {
                p.diverged = true;
                break;
            }
        }
        // on divergence L still holds the last healthy state
        detail::store_state(p, L);
    }
}

} // namespace kerrsim
