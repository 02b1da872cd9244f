#pragma once

#include "kerrsim/phase_space.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace kerrsim {

// Contiguous-batch means for the standard error of a ratio estimator.
struct BatchSpec {
    std::size_t batch_count = 32;
};

struct RatioStderr {
    double re = 0.0;
    double im = 0.0;
    std::size_t flagged_batches = 0;  // batches dropped for near-zero denominator
};

// Standard error of the ratio sum(num)/sum(den) from batch means over
// contiguous index ranges: the ratio is formed per batch, and the stderr of
// the batch means is reported for real and imaginary parts separately.
// Batches whose denominator is near zero (|den_b| < 1e-12 * mean|den| * size)
// are flagged and excluded.
RatioStderr ratio_stderr(std::span<const cplx> numerators,
                         std::span<const double> denominators,
                         const BatchSpec& spec = {});

// Histogram of log10|alpha*Omega| with edges anchored at integer multiples
// of bin_width. Samples at -inf (alpha = 0) land in underflow; diverged
// points and +inf land in overflow.
struct Histogram {
    double bin_width = 0.1;
    std::int64_t first_bin = 0;           // edge(i) = (first_bin + i) * bin_width
    std::vector<std::int64_t> counts;
    std::int64_t underflow = 0;
    std::int64_t overflow = 0;

    double edge(std::size_t i) const { return (first_bin + static_cast<std::int64_t>(i)) * bin_width; }
    std::vector<double> edges() const;
    std::int64_t total() const;
    // width of the occupied range in the binned units (decades)
    double occupied_span() const;
};

Histogram log_weight_histogram(const Ensemble& e, double bin_width);

} // namespace kerrsim
