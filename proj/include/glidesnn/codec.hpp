#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "glidesnn/plasticity.hpp"
#include "glidesnn/rng.hpp"

namespace glidesnn {

struct CodecParams {
    double e_max = 1.0;       ///< full-scale error magnitude (m)
    double r_max = 0.2;       ///< peak Poisson rate (spikes/ms)
    double window = 100.0;    ///< encoding window (ms)
    double dt = 0.5;          ///< spike grid resolution (ms)
    double r_out_max = 0.2;   ///< output rate that decodes to +e_max (spikes/ms)
    bool symmetric_zero = false;  ///< decode an all-silent output as 0 instead of -e_max

    /// Throws ConfigError unless e_max > 0, r_max * dt <= 1 and window >= 10 dt.
    void validate() const;
    [[nodiscard]] std::size_t steps() const noexcept;
};

struct Normalized {
    double value = 0.5;
    bool saturated = false;
};

/// Affine map [-e_max, e_max] -> [0, 1], clamped.
[[nodiscard]] Normalized normalize_error(double e, double e_max) noexcept;
[[nodiscard]] inline Normalized normalize_error(double e, const CodecParams& p) noexcept {
    return normalize_error(e, p.e_max);
}

/// Binary neurons x timesteps matrix. Storage is step-major so one timestep's
/// column is contiguous.
class SpikeRaster {
public:
    SpikeRaster() = default;
    SpikeRaster(std::size_t n_neurons, std::size_t n_steps, double dt);

    [[nodiscard]] std::size_t n_neurons() const noexcept { return n_neurons_; }
    [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }

    [[nodiscard]] std::uint8_t at(std::size_t neuron, std::size_t step) const;
    void set(std::size_t neuron, std::size_t step, bool spike);

    [[nodiscard]] std::span<const std::uint8_t> column(std::size_t step) const;
    [[nodiscard]] std::span<std::uint8_t> column(std::size_t step);

    [[nodiscard]] std::size_t total_spikes() const noexcept;

private:
    std::size_t n_neurons_ = 0;
    std::size_t n_steps_ = 0;
    double dt_ = 0.0;
    std::vector<std::uint8_t> bits_;
};

/// Independent Bernoulli(value * rate * dt) entries, drawn step by step.
/// Throws DomainError if value is outside [0, 1] or the probability exceeds 1.
[[nodiscard]] SpikeRaster poisson_encode(double value, std::size_t n_neurons, double rate,
                                         const CodecParams& p, Rng& rng);
[[nodiscard]] inline SpikeRaster poisson_encode(double value, std::size_t n_neurons,
                                                const CodecParams& p, Rng& rng) {
    return poisson_encode(value, n_neurons, p.r_max, p, rng);
}

/// Population mean rate over the window, normalized by r_out_max and passed
/// through the inverse of normalize_error.
[[nodiscard]] double rate_decode(std::span<const std::size_t> spike_counts, const CodecParams& p);

/// out[j] = sum_i w(i, j) * s[i].
void input_current(const SynapseMatrix& w, std::span<const std::uint8_t> spikes, std::span<double> out);
[[nodiscard]] std::vector<double> input_current(const SynapseMatrix& w,
                                                std::span<const std::uint8_t> spikes);

}  // namespace glidesnn
