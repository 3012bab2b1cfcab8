#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glidesnn/radar.hpp"

namespace glidesnn {

struct AxisStats {
    double mean = 0.0;      ///< m
    double variance = 0.0;  ///< m^2, population (divide by n)
    double rms = 0.0;       ///< m
};

struct SourceStats {
    AxisStats x;
    AxisStats y;
};

/// Throws DomainError on empty input.
[[nodiscard]] AxisStats compute_stats(std::span<const double> values);
[[nodiscard]] SourceStats compute_stats(std::span<const ErrorSample> samples);

/// Counts over half-open bins [k w, (k+1) w), k = first_bin .. first_bin + counts.size() - 1.
struct Histogram {
    double bin_width = 0.01;
    long first_bin = 0;
    std::vector<std::size_t> counts;

    [[nodiscard]] double lower_edge(std::size_t k) const noexcept {
        return static_cast<double>(first_bin + static_cast<long>(k)) * bin_width;
    }
    [[nodiscard]] double upper_edge(std::size_t k) const noexcept {
        return static_cast<double>(first_bin + static_cast<long>(k) + 1) * bin_width;
    }
    [[nodiscard]] std::size_t total() const noexcept;
};

/// Index k with k w <= v < (k+1) w, robust to the rounding of v / w.
[[nodiscard]] long bin_index(double v, double bin_width) noexcept;

/// Throws DomainError for bin_width <= 0 or non-finite values.
[[nodiscard]] Histogram histogram(std::span<const double> values, double bin_width);

/// (e1 / s1^2 + e2 / s2^2) / (1 / s1^2 + 1 / s2^2). Throws DomainError unless s1, s2 > 0.
[[nodiscard]] double inverse_variance_oracle(double e1, double e2, double sigma1, double sigma2);

}  // namespace glidesnn
