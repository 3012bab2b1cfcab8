#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "glidesnn/codec.hpp"
#include "glidesnn/neuron.hpp"
#include "glidesnn/plasticity.hpp"
#include "glidesnn/rng.hpp"

namespace glidesnn {

/// How radar errors are scaled before Poisson encoding.
enum class Normalization {
    /// One full-scale value (codec.e_max) for the whole run.
    Fixed,
    /// Each channel uses scale_sigmas times that radar's own per-axis sigma
    /// at the current sample.
    PerSample,
};

/// How output spike counts become a fused error.
enum class Decoder {
    /// codec rate_decode: affine in the population rate, scaled by r_out_max.
    Affine,
    /// Inverts the calibrated count-vs-drive curve using the live weights.
    Calibrated,
};

struct NetworkConfig {
    std::size_t n_in_per_channel = 20;
    std::size_t n_out = 20;
    double tau_syn = 5.0;  ///< ms
    NeuronParams neuron;
    StdpParams stdp;
    CodecParams codec = [] {
        CodecParams c;
        c.r_max = 1.0;
        return c;
    }();
    bool learning_enabled = true;
    /// Return output neurons to rest (and clear i_syn) at the start of every window.
    bool reset_each_window = true;
    /// After each learning window, rescale every output neuron's incoming
    /// weights back to their initial sum (synaptic scaling).
    bool weight_normalization = true;
    /// Accumulate STDP updates during a window and commit them at its end.
    bool deferred_plasticity = true;
    /// Normalize each channel's share separately instead of the neuron's total.
    bool per_channel_normalization = true;

    Normalization normalization = Normalization::PerSample;
    double scale_sigmas = 5.0;
    /// Scale each channel's peak rate by sigma_min / sigma_k.
    bool reliability_gain = true;
    Decoder decoder = Decoder::Calibrated;

    double init_low = 0.25;   ///< initial weights ~ U[init_low, init_high] * w_max
    double init_high = 0.75;

    std::size_t calibration_levels = 8;
    std::size_t calibration_warmup = 5;   ///< windows discarded per level
    std::size_t calibration_windows = 5; ///< windows recorded per level
    /// While learning, refit the transfer curve every this many windows (0 = never).
    std::size_t recalibration_interval = 50;

    void validate() const;
    [[nodiscard]] std::size_t n_inputs() const noexcept { return 2 * n_in_per_channel; }
};

/// One radar's error on one axis plus the sigma used for per-sample scaling.
struct ChannelSignal {
    double error = 0.0;  ///< m
    double sigma = 0.0;  ///< m; ignored under Normalization::Fixed
};

struct AxisSignals {
    ChannelSignal radar1;
    ChannelSignal radar2;
};

struct AxisTrace {
    std::array<std::size_t, 2> input_spikes{};  ///< per channel
    std::vector<std::size_t> output_counts;
    double weight_change = 0.0;  ///< sum of |delta w| over the window
    std::size_t saturations = 0;
    double fused = 0.0;
};

struct WindowTrace {
    AxisTrace x;
    AxisTrace y;
    SpikeRaster raster_x;  ///< only filled when keep_rasters is set
    SpikeRaster raster_y;
    bool keep_rasters = false;
};

/// i_syn * exp(-dt / tau_syn) element-wise, plus `increments` when given.
void synaptic_current_step(std::span<double> i_syn, double dt, double tau_syn,
                           std::span<const double> increments = {});

/// Monotone map from mean per-step input current to expected output spikes
/// per neuron per window, measured on the live network.
class TransferCurve {
public:
    TransferCurve() = default;
    /// Fits from (drive, count) samples: quantile bins, then pool-adjacent-violators.
    static TransferCurve fit(std::vector<std::pair<double, double>> samples, std::size_t bins);

    [[nodiscard]] double operator()(double drive) const noexcept;
    [[nodiscard]] bool empty() const noexcept { return drive_.empty(); }
    [[nodiscard]] const std::vector<double>& drives() const noexcept { return drive_; }
    [[nodiscard]] const std::vector<double>& counts() const noexcept { return count_; }

private:
    std::vector<double> drive_;
    std::vector<double> count_;
};

/// Feedforward subnetwork for one axis: 2 * n_in Poisson inputs fully connected
/// to n_out Izhikevich neurons through STDP synapses.
class AxisNetwork {
public:
    AxisNetwork(const NetworkConfig& cfg, Rng& init_rng);

    /// Simulates one encoding window and returns the decoded fused error (m).
    double run(const AxisSignals& in, Rng& rng, AxisTrace* trace = nullptr,
               SpikeRaster* raster_out = nullptr);

    /// Measures the transfer curve and r_out_max on a frozen copy of this network.
    void calibrate(Rng& rng);
    /// As above, and keeps `rng` for later periodic recalibration.
    void calibrate_with(Rng rng);

    [[nodiscard]] SynapseMatrix& synapses() noexcept { return syn_; }
    [[nodiscard]] const SynapseMatrix& synapses() const noexcept { return syn_; }
    [[nodiscard]] const std::vector<NeuronState>& neurons() const noexcept { return out_; }
    [[nodiscard]] const std::vector<double>& synaptic_current() const noexcept { return i_syn_; }
    [[nodiscard]] const TransferCurve& transfer() const noexcept { return curve_; }
    [[nodiscard]] const NetworkConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] double clock_ms() const noexcept { return t_ms_; }

    /// Rescales each output neuron's incoming weights to its initial sum, then clamps.
    void normalize_weights();

    /// Encoding used for one channel at the current sample.
    struct ChannelCode {
        double value = 0.5;  ///< normalized error
        double rate = 0.0;   ///< spikes/ms
        double scale = 1.0;  ///< full-scale error (m)
        bool saturated = false;
    };
    [[nodiscard]] std::array<ChannelCode, 2> encode_plan(const AxisSignals& in) const;

    /// Fused error whose implied drive best explains `total_count` output spikes.
    /// Uses the current weights.
    [[nodiscard]] double decode(const std::array<ChannelCode, 2>& plan, double total_count) const;
    /// Uses per-output-neuron incoming weight sums {radar1, radar2}.
    [[nodiscard]] double decode(const std::array<ChannelCode, 2>& plan, double total_count,
                                const std::vector<std::array<double, 2>>& mass) const;

    /// Incoming weight sum of every output neuron, split by channel.
    [[nodiscard]] std::vector<std::array<double, 2>> channel_mass() const;

private:
    std::array<std::size_t, 2> simulate(const std::array<ChannelCode, 2>& plan, Rng& rng, bool learn,
                         std::vector<std::size_t>& counts, double* weight_change,
                         SpikeRaster* raster_out);

    NetworkConfig cfg_;
    SynapseMatrix syn_;
    std::vector<NeuronState> out_;
    std::vector<double> i_syn_;
    double t_ms_ = 0.0;
    TransferCurve curve_;
    std::vector<std::array<double, 2>> target_mass_;  // initial incoming weight sums
    Rng calibration_rng_;
    std::size_t windows_run_ = 0;

    // scratch
    std::vector<double> current_;
    std::vector<std::size_t> pre_idx_;
    std::vector<std::size_t> post_idx_;
    std::vector<std::uint8_t> column_;
};

struct FusedError {
    double ex = 0.0;
    double ey = 0.0;
};

/// Two independent axis subnetworks.
class Network {
public:
    Network(const NetworkConfig& cfg, const StreamFactory& streams);
    /// Separate configurations per axis (e.g. a per-axis fixed e_max).
    Network(const NetworkConfig& cfg_x, const NetworkConfig& cfg_y, const StreamFactory& streams);

    /// One radar sample: both axes simulate one window on their own streams.
    FusedError run_window(const AxisSignals& x, const AxisSignals& y, Rng& rng_x, Rng& rng_y,
                          WindowTrace* trace = nullptr);

    [[nodiscard]] AxisNetwork& axis_x() noexcept { return x_; }
    [[nodiscard]] AxisNetwork& axis_y() noexcept { return y_; }
    [[nodiscard]] const AxisNetwork& axis_x() const noexcept { return x_; }
    [[nodiscard]] const AxisNetwork& axis_y() const noexcept { return y_; }

private:
    AxisNetwork x_;
    AxisNetwork y_;
};

/// Builds both axis subnetworks from the "network.*" streams and calibrates them.
[[nodiscard]] Network build_network(const NetworkConfig& cfg, const StreamFactory& streams);

/// Firing rate (spikes/ms) of one neuron under constant current, after a warm-up.
[[nodiscard]] double constant_current_rate(const NeuronParams& p, double current, double dt,
                                           double duration_ms);

}  // namespace glidesnn
