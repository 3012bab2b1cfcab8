#include "glidesnn/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glidesnn/error.hpp"

namespace glidesnn {

void CodecParams::validate() const {
    if (!(e_max > 0.0)) throw ConfigError("codec.e_max must be > 0");
    if (!(dt > 0.0)) throw ConfigError("codec.dt must be > 0");
    if (!(r_max > 0.0) || r_max * dt > 1.0) throw ConfigError("codec requires 0 < r_max * dt <= 1");
    if (!(window >= 10.0 * dt)) throw ConfigError("codec.window must be at least 10 * dt");
    if (!(r_out_max > 0.0)) throw ConfigError("codec.r_out_max must be > 0");
}

std::size_t CodecParams::steps() const noexcept {
    return static_cast<std::size_t>(std::llround(window / dt));
}

Normalized normalize_error(double e, double e_max) noexcept {
    const double raw = (e + e_max) / (2.0 * e_max);
    if (raw < 0.0) return {0.0, true};
    if (raw > 1.0) return {1.0, true};
    return {raw, false};
}

SpikeRaster::SpikeRaster(std::size_t n_neurons, std::size_t n_steps, double dt)
    : n_neurons_(n_neurons), n_steps_(n_steps), dt_(dt), bits_(n_neurons * n_steps, 0) {}

std::uint8_t SpikeRaster::at(std::size_t neuron, std::size_t step) const {
    if (neuron >= n_neurons_ || step >= n_steps_) throw StructuralError("raster index out of range");
    return bits_[step * n_neurons_ + neuron];
}

void SpikeRaster::set(std::size_t neuron, std::size_t step, bool spike) {
    if (neuron >= n_neurons_ || step >= n_steps_) throw StructuralError("raster index out of range");
    bits_[step * n_neurons_ + neuron] = spike ? 1 : 0;
}

std::span<const std::uint8_t> SpikeRaster::column(std::size_t step) const {
    if (step >= n_steps_) throw StructuralError("raster step out of range");
    return std::span<const std::uint8_t>(bits_).subspan(step * n_neurons_, n_neurons_);
}

std::span<std::uint8_t> SpikeRaster::column(std::size_t step) {
    if (step >= n_steps_) throw StructuralError("raster step out of range");
    return std::span<std::uint8_t>(bits_).subspan(step * n_neurons_, n_neurons_);
}

std::size_t SpikeRaster::total_spikes() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

SpikeRaster poisson_encode(double value, std::size_t n_neurons, double rate, const CodecParams& p,
                           Rng& rng) {
    if (!(value >= 0.0 && value <= 1.0)) throw DomainError("poisson_encode: value outside [0, 1]");
    const double prob = value * rate * p.dt;
    if (prob > 1.0 || prob < 0.0) throw DomainError("poisson_encode: spike probability outside [0, 1]");
    SpikeRaster raster(n_neurons, p.steps(), p.dt);
    if (prob == 0.0) return raster;
    const std::size_t steps = raster.n_steps();
    if (prob >= 1.0) {
        for (std::size_t s = 0; s < steps; ++s) {
            for (auto& bit : raster.column(s)) bit = 1;
        }
        return raster;
    }
    // Gaps between successive spikes of one Bernoulli(prob) sequence are
    // geometric, so each neuron costs one draw per spike instead of one per step.
    std::geometric_distribution<std::size_t> gap(prob);
    for (std::size_t n = 0; n < n_neurons; ++n) {
        std::size_t s = gap(rng);
        while (s < steps) {
            raster.set(n, s, true);
            s += gap(rng) + 1;
        }
    }
    return raster;
}

double rate_decode(std::span<const std::size_t> spike_counts, const CodecParams& p) {
    if (!(p.window > 0.0)) throw ConfigError("rate_decode: window must be > 0");
    if (spike_counts.empty()) throw StructuralError("rate_decode: no output neurons");
    const auto total = std::accumulate(spike_counts.begin(), spike_counts.end(), std::size_t{0});
    if (total == 0 && p.symmetric_zero) return 0.0;
    const double rate = static_cast<double>(total) /
                        (static_cast<double>(spike_counts.size()) * p.window);
    return (rate / p.r_out_max - 0.5) * 2.0 * p.e_max;
}

void input_current(const SynapseMatrix& w, std::span<const std::uint8_t> spikes, std::span<double> out) {
    if (spikes.size() != w.n_pre() || out.size() != w.n_post()) {
        throw StructuralError("input_current: dimension mismatch");
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < spikes.size(); ++i) {
        if (!spikes[i]) continue;
        const auto r = w.row(i);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += r[j];
    }
}

std::vector<double> input_current(const SynapseMatrix& w, std::span<const std::uint8_t> spikes) {
    std::vector<double> out(w.n_post());
    input_current(w, spikes, out);
    return out;
}

}  // namespace glidesnn
