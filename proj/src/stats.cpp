#include "kerrsim/stats.hpp"

#include "kerrsim/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kerrsim {

RatioStderr ratio_stderr(std::span<const cplx> numerators,
                         std::span<const double> denominators,
                         const BatchSpec& spec) {
    const std::size_t n = numerators.size();
    if (denominators.size() != n)
        throw std::invalid_argument("ratio_stderr: sample spans must be aligned");
    RatioStderr out;
    if (n < 2) return out;

    std::size_t nb = std::clamp<std::size_t>(spec.batch_count, 2, n);

    // scale-free near-zero threshold for a batch denominator
    double mean_abs_den = 0.0;
    for (double d : denominators) mean_abs_den += std::abs(d);
    mean_abs_den /= static_cast<double>(n);

    std::vector<cplx> ratios;
    ratios.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * n / nb;
        const std::size_t hi = (b + 1) * n / nb;
        const cplx num = pairwise_sum(numerators.subspan(lo, hi - lo));
        const double den = pairwise_sum(denominators.subspan(lo, hi - lo));
        if (std::abs(den) < 1e-12 * mean_abs_den * static_cast<double>(hi - lo)) {
            ++out.flagged_batches;
            continue;
        }
        ratios.push_back(num / den);
    }
    const std::size_t kept = ratios.size();
    if (kept < 2) {
        out.re = out.im = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // Welford accumulation: exact zero for identical batch means
    double mean_re = 0.0, mean_im = 0.0, m2_re = 0.0, m2_im = 0.0;
    std::size_t k = 0;
    for (const cplx& r : ratios) {
        ++k;
        const double dre = r.real() - mean_re;
        mean_re += dre / static_cast<double>(k);
        m2_re += dre * (r.real() - mean_re);
        const double dim = r.imag() - mean_im;
        mean_im += dim / static_cast<double>(k);
        m2_im += dim * (r.imag() - mean_im);
    }
    const double denom = static_cast<double>(kept - 1) * static_cast<double>(kept);
    out.re = std::sqrt(m2_re / denom);
    out.im = std::sqrt(m2_im / denom);
    return out;
}

std::vector<double> Histogram::edges() const {
    std::vector<double> e(counts.size() + 1);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = edge(i);
    return e;
}

std::int64_t Histogram::total() const {
    std::int64_t t = underflow + overflow;
    for (std::int64_t c : counts) t += c;
    return t;
}

double Histogram::occupied_span() const {
    std::size_t lo = counts.size(), hi = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo > hi) return 0.0;
    return static_cast<double>(hi - lo + 1) * bin_width;
}

Histogram log_weight_histogram(const Ensemble& e, double bin_width) {
    if (e.points.empty())
        throw std::invalid_argument("log_weight_histogram: empty ensemble");
    if (!(bin_width > 0.0))
        throw std::invalid_argument("log_weight_histogram: bin_width must be > 0");

    constexpr double ln10 = 2.302585092994045684017991454684;
    Histogram h;
    h.bin_width = bin_width;

    std::vector<std::int64_t> bins;
    bins.reserve(e.points.size());
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const PhasePoint& p : e.points) {
        if (p.diverged) {
            ++h.overflow;
            continue;
        }
        const double v = (p.log_alpha.real() + p.log_omega.real()) / ln10;
        if (std::isnan(v)) {
            ++h.overflow;
            continue;
        }
        if (v == -std::numeric_limits<double>::infinity()) {
            ++h.underflow;
            continue;
        }
        if (v == std::numeric_limits<double>::infinity()) {
            ++h.overflow;
            continue;
        }
        const auto b = static_cast<std::int64_t>(std::floor(v / bin_width));
        bins.push_back(b);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    if (bins.empty()) return h;

    h.first_bin = lo;
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (std::int64_t b : bins) ++h.counts[static_cast<std::size_t>(b - lo)];
    return h;
}

} // namespace kerrsim
