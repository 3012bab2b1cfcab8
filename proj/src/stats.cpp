#include "glidesnn/stats.hpp"

#include <cmath>
#include <numeric>

#include "glidesnn/error.hpp"

namespace glidesnn {

AxisStats compute_stats(std::span<const double> values) {
    if (values.empty()) throw DomainError("compute_stats: no samples");
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    AxisStats s;
    s.mean = sum / n;
    // Two-pass variance: avoids cancellation when |mean| >> spread.
    double acc = 0.0;
    for (double v : values) acc += (v - s.mean) * (v - s.mean);
    s.variance = acc / n;
    s.rms = std::sqrt(sum_sq / n);
    return s;
}

SourceStats compute_stats(std::span<const ErrorSample> samples) {
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(samples.size());
    ys.reserve(samples.size());
    for (const auto& s : samples) {
        xs.push_back(s.ex);
        ys.push_back(s.ey);
    }
    return {compute_stats(xs), compute_stats(ys)};
}

std::size_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

long bin_index(double v, double w) noexcept {
    auto k = static_cast<long>(std::floor(v / w));
    if (static_cast<double>(k + 1) * w <= v) ++k;
    if (static_cast<double>(k) * w > v) --k;
    return k;
}

Histogram histogram(std::span<const double> values, double bin_width) {
    if (!(bin_width > 0.0)) throw DomainError("histogram: bin width must be > 0");
    Histogram h;
    h.bin_width = bin_width;
    if (values.empty()) return h;
    long lo = 0;
    long hi = 0;
    bool first = true;
    std::vector<long> idx;
    idx.reserve(values.size());
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("histogram: non-finite value");
        const long k = bin_index(v, bin_width);
        idx.push_back(k);
        if (first) {
            lo = hi = k;
            first = false;
        }
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    h.first_bin = lo;
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (long k : idx) ++h.counts[static_cast<std::size_t>(k - lo)];
    return h;
}

double inverse_variance_oracle(double e1, double e2, double sigma1, double sigma2) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
        throw DomainError("inverse_variance_oracle: sigmas must be > 0");
    }
    const double w1 = 1.0 / (sigma1 * sigma1);
    const double w2 = 1.0 / (sigma2 * sigma2);
    return (e1 * w1 + e2 * w2) / (w1 + w2);
}

}  // namespace glidesnn
