#include "kerrsim/moments.hpp"

#include "kerrsim/errors.hpp"
#include "kerrsim/reduce.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kerrsim {

namespace {

// Per-point numerator of Eq.-style ratio estimator, log-domain evaluation.
inline cplx numerator_term(const PhasePoint& p, int m, int n) {
    const cplx t1 = std::exp(p.log_omega + static_cast<double>(m) * p.log_beta +
                             static_cast<double>(n) * p.log_alpha);
    const cplx t2 = std::exp(p.log_omega + static_cast<double>(m) * p.log_alpha +
                             static_cast<double>(n) * p.log_beta);
    return t1 + std::conj(t2);
}

// 2 Re(Omega), written so that its bits match numerator_term(p, 0, 0).real()
// and the normalization identity estimate_moment(e, 0, 0) == 1 is exact.
inline double denominator_term(const PhasePoint& p) {
    return 2.0 * std::exp(p.log_omega).real();
}

} // namespace

MomentEstimate estimate_moment(const Ensemble& e, int m, int n,
                               const BatchSpec& spec) {
    if (e.points.empty())
        throw std::invalid_argument("estimate_moment: empty ensemble");
    if (m < 0 || n < 0)
        throw std::invalid_argument("estimate_moment: orders must be non-negative");

    if (m > n) {
        MomentEstimate r = estimate_moment(e, n, m, spec);
        r.value = std::conj(r.value);
        return r;
    }

    const std::size_t total = e.points.size();
    std::vector<cplx> num(total, cplx{0.0, 0.0});
    std::vector<double> den(total, 0.0);
    std::vector<double> abs_w(total, 0.0);

    MomentEstimate out;
    for (std::size_t i = 0; i < total; ++i) {
        const PhasePoint& p = e.points[i];
        if (p.diverged) {
            ++out.excluded;
            continue;
        }
        num[i] = numerator_term(p, m, n);
        den[i] = denominator_term(p);
        abs_w[i] = std::exp(p.log_omega.real());
    }
    const std::size_t included = total - out.excluded;
    if (included == 0)
        throw normalization_error("estimate_moment: all points diverged");

    const cplx num_sum = pairwise_sum(num);
    const double den_sum = pairwise_sum(den);
    const double mean_abs_w = pairwise_sum(abs_w) / static_cast<double>(included);

    if (!(std::abs(den_sum) >=
          1e-12 * mean_abs_w * static_cast<double>(included)))
        throw normalization_error(
            "estimate_moment: normalization <Omega + Omega*> is degenerate");

    out.value = num_sum / den_sum;
    out.norm = den_sum / static_cast<double>(included);

    const RatioStderr se = ratio_stderr(num, den, spec);
    out.stderr_re = se.re;
    out.stderr_im = se.im;
    out.flagged_batches = se.flagged_batches;
    return out;
}

std::pair<MomentEstimate, MomentEstimate> quadratures(const Ensemble& e,
                                                      const BatchSpec& spec) {
    const Ensemble* src = &e;
    Ensemble lab;
    if (e.frame == Frame::rotating) {
        lab = to_lab_frame(e);
        src = &lab;
    }
    const MomentEstimate a = estimate_moment(*src, 0, 1, spec);

    MomentEstimate x = a, y = a;
    x.value = cplx(a.value.real(), 0.0);
    x.stderr_im = 0.0;
    y.value = cplx(a.value.imag(), 0.0);
    y.stderr_re = a.stderr_im;
    y.stderr_im = 0.0;
    return {x, y};
}

} // namespace kerrsim
