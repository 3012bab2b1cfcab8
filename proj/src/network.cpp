#include "glidesnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "glidesnn/error.hpp"

namespace glidesnn {

void NetworkConfig::validate() const {
    if (n_in_per_channel < 1 || n_out < 1) throw ConfigError("network layer sizes must be >= 1");
    if (!(tau_syn > 0.0)) throw ConfigError("network.tau_syn must be > 0");
    if (!(scale_sigmas > 0.0)) throw ConfigError("network.scale_sigmas must be > 0");
    if (!(init_low >= 0.0 && init_low <= init_high && init_high <= 1.0)) {
        throw ConfigError("network initial weight fractions must satisfy 0 <= low <= high <= 1");
    }
    if (calibration_levels < 2 || calibration_windows < 1) {
        throw ConfigError("network calibration needs >= 2 levels and >= 1 window");
    }
    neuron.validate();
    stdp.validate();
    codec.validate();
    if (codec.dt > neuron.max_dt) throw ConfigError("codec.dt exceeds neuron.max_dt");
    const double lo = init_low * stdp.w_max;
    const double hi = init_high * stdp.w_max;
    if (lo < stdp.w_min || hi > stdp.w_max) {
        throw ConfigError("initial weight range must lie inside [w_min, w_max]");
    }
}

void synaptic_current_step(std::span<double> i_syn, double dt, double tau_syn,
                           std::span<const double> increments) {
    if (!(dt > 0.0) || !(tau_syn > 0.0)) throw ConfigError("synaptic_current_step: dt and tau must be > 0");
    if (!increments.empty() && increments.size() != i_syn.size()) {
        throw StructuralError("synaptic_current_step: increment size mismatch");
    }
    const double decay = std::exp(-dt / tau_syn);
    for (std::size_t j = 0; j < i_syn.size(); ++j) {
        i_syn[j] *= decay;
        if (!increments.empty()) i_syn[j] += increments[j];
    }
}

// ---------------------------------------------------------------------------
// TransferCurve

TransferCurve TransferCurve::fit(std::vector<std::pair<double, double>> samples, std::size_t bins) {
    if (samples.empty()) throw DomainError("TransferCurve::fit: no samples");
    bins = std::clamp<std::size_t>(bins, 1, samples.size());
    std::sort(samples.begin(), samples.end());

    struct Block {
        double drive;
        double count;
        double weight;
    };
    std::vector<Block> blocks;
    const std::size_t n = samples.size();
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = b * n / bins;
        const std::size_t hi = (b + 1) * n / bins;
        if (hi <= lo) continue;
        double sd = 0.0;
        double sc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            sd += samples[k].first;
            sc += samples[k].second;
        }
        const double m = static_cast<double>(hi - lo);
        blocks.push_back({sd / m, sc / m, m});
    }

    // Pool adjacent violators: counts must be non-decreasing in drive.
    std::vector<Block> pooled;
    for (const Block& b : blocks) {
        pooled.push_back(b);
        while (pooled.size() > 1 && pooled[pooled.size() - 2].count > pooled.back().count) {
            Block top = pooled.back();
            pooled.pop_back();
            Block& prev = pooled.back();
            const double w = prev.weight + top.weight;
            prev.drive = (prev.drive * prev.weight + top.drive * top.weight) / w;
            prev.count = (prev.count * prev.weight + top.count * top.weight) / w;
            prev.weight = w;
        }
    }

    TransferCurve curve;
    for (const Block& b : pooled) {
        if (!curve.drive_.empty() && b.drive <= curve.drive_.back()) continue;
        curve.drive_.push_back(b.drive);
        curve.count_.push_back(b.count);
    }
    return curve;
}

double TransferCurve::operator()(double drive) const noexcept {
    if (drive_.empty()) return 0.0;
    if (drive_.size() == 1) return count_.front();
    const auto it = std::upper_bound(drive_.begin(), drive_.end(), drive);
    std::size_t k;
    if (it == drive_.begin()) {
        k = 0;
    } else if (it == drive_.end()) {
        k = drive_.size() - 2;
    } else {
        k = static_cast<std::size_t>(it - drive_.begin()) - 1;
    }
    const double x0 = drive_[k];
    const double x1 = drive_[k + 1];
    const double y0 = count_[k];
    const double y1 = count_[k + 1];
    const double y = y0 + (y1 - y0) * (drive - x0) / (x1 - x0);
    return std::max(0.0, y);
}

// ---------------------------------------------------------------------------
// AxisNetwork

AxisNetwork::AxisNetwork(const NetworkConfig& cfg, Rng& init_rng)
    : cfg_(cfg),
      syn_(cfg.n_inputs(), cfg.n_out),
      out_(cfg.n_out, resting_state(cfg.neuron)),
      i_syn_(cfg.n_out, 0.0),
      current_(cfg.n_out, 0.0),
      column_(cfg.n_inputs(), 0) {
    cfg_.validate();
    std::uniform_real_distribution<double> u(cfg.init_low * cfg.stdp.w_max,
                                             cfg.init_high * cfg.stdp.w_max);
    for (std::size_t i = 0; i < syn_.n_pre(); ++i) {
        for (double& w : syn_.row(i)) w = u(init_rng);
    }
    target_mass_ = channel_mass();
    pre_idx_.reserve(cfg.n_inputs());
    post_idx_.reserve(cfg.n_out);
}

std::array<AxisNetwork::ChannelCode, 2> AxisNetwork::encode_plan(const AxisSignals& in) const {
    const std::array<ChannelSignal, 2> ch{in.radar1, in.radar2};
    for (const auto& c : ch) {
        if (!std::isfinite(c.error) || !std::isfinite(c.sigma)) {
            throw DomainError("run_window: non-finite radar error");
        }
    }
    const bool have_sigma = ch[0].sigma > 0.0 && ch[1].sigma > 0.0;
    if (cfg_.normalization == Normalization::PerSample && !have_sigma) {
        throw DomainError("run_window: per-sample normalization needs positive sigmas");
    }
    const double sigma_min = have_sigma ? std::min(ch[0].sigma, ch[1].sigma) : 0.0;

    std::array<ChannelCode, 2> plan{};
    for (std::size_t k = 0; k < 2; ++k) {
        ChannelCode& c = plan[k];
        c.scale = cfg_.normalization == Normalization::PerSample ? cfg_.scale_sigmas * ch[k].sigma
                                                                 : cfg_.codec.e_max;
        const Normalized n = normalize_error(ch[k].error, c.scale);
        c.value = n.value;
        c.saturated = n.saturated;
        c.rate = cfg_.codec.r_max;
        if (cfg_.reliability_gain && have_sigma) c.rate *= sigma_min / ch[k].sigma;
    }
    return plan;
}

std::array<std::size_t, 2> AxisNetwork::simulate(const std::array<ChannelCode, 2>& plan, Rng& rng, bool learn,
                                  std::vector<std::size_t>& counts, double* weight_change,
                                  SpikeRaster* raster_out) {
    const std::size_t n_in = cfg_.n_in_per_channel;
    const SpikeRaster r1 = poisson_encode(plan[0].value, n_in, plan[0].rate, cfg_.codec, rng);
    const SpikeRaster r2 = poisson_encode(plan[1].value, n_in, plan[1].rate, cfg_.codec, rng);
    const std::size_t steps = r1.n_steps();
    const double dt = cfg_.codec.dt;

    if (raster_out != nullptr) *raster_out = SpikeRaster(cfg_.n_inputs(), steps, dt);
    std::vector<double> before;
    if (weight_change != nullptr) before.assign(syn_.weights().begin(), syn_.weights().end());

    if (cfg_.reset_each_window) {
        std::fill(out_.begin(), out_.end(), resting_state(cfg_.neuron));
        std::fill(i_syn_.begin(), i_syn_.end(), 0.0);
    }
    // Deferred plasticity accumulates on a shadow copy; the window sees fixed weights.
    const bool deferred = learn && cfg_.deferred_plasticity;
    SynapseMatrix pending = deferred ? syn_ : SynapseMatrix(0, 0);

    counts.assign(cfg_.n_out, 0);
    std::array<std::size_t, 2> input_spikes{};
    for (std::size_t s = 0; s < steps; ++s) {
        t_ms_ += dt;
        const auto c1 = r1.column(s);
        const auto c2 = r2.column(s);
        std::copy(c1.begin(), c1.end(), column_.begin());
        std::copy(c2.begin(), c2.end(), column_.begin() + static_cast<std::ptrdiff_t>(n_in));
        if (raster_out != nullptr) {
            auto dst = raster_out->column(s);
            std::copy(column_.begin(), column_.end(), dst.begin());
        }

        input_current(syn_, column_, current_);
        post_idx_.clear();
        for (std::size_t j = 0; j < cfg_.n_out; ++j) {
            const double drive = current_[j] + i_syn_[j];
            try {
                out_[j] = apply_reset(rk4_step(out_[j], drive, dt, cfg_.neuron), cfg_.neuron);
            } catch (const NumericError& e) {
                std::ostringstream msg;
                msg << "output neuron " << j << " at step " << s << ": " << e.what();
                throw NumericError(msg.str());
            }
            if (out_[j].fired) {
                ++counts[j];
                post_idx_.push_back(j);
            }
        }
        synaptic_current_step(i_syn_, dt, cfg_.tau_syn);

        pre_idx_.clear();
        for (std::size_t i = 0; i < column_.size(); ++i) {
            if (column_[i]) pre_idx_.push_back(i);
        }
        for (std::size_t i : pre_idx_) ++input_spikes[i < n_in ? 0 : 1];
        if (learn) (deferred ? pending : syn_).on_spikes(pre_idx_, post_idx_, t_ms_, cfg_.stdp);
    }

    if (learn && deferred) syn_ = std::move(pending);
    if (learn && cfg_.weight_normalization) normalize_weights();

    if (weight_change != nullptr) {
        double sum = 0.0;
        const auto after = syn_.weights();
        for (std::size_t k = 0; k < after.size(); ++k) sum += std::abs(after[k] - before[k]);
        *weight_change = sum;
    }
    return input_spikes;
}

void AxisNetwork::normalize_weights() {
    const auto mass = channel_mass();
    const std::size_t n_in = cfg_.n_in_per_channel;
    std::vector<std::array<double, 2>> factor(cfg_.n_out, {1.0, 1.0});
    for (std::size_t j = 0; j < cfg_.n_out; ++j) {
        if (cfg_.per_channel_normalization) {
            for (std::size_t k = 0; k < 2; ++k) {
                factor[j][k] = mass[j][k] > 0.0 ? target_mass_[j][k] / mass[j][k] : 1.0;
            }
        } else {
            const double total = mass[j][0] + mass[j][1];
            const double f = total > 0.0 ? (target_mass_[j][0] + target_mass_[j][1]) / total : 1.0;
            factor[j] = {f, f};
        }
    }
    for (std::size_t i = 0; i < syn_.n_pre(); ++i) {
        const std::size_t k = i < n_in ? 0 : 1;
        auto r = syn_.row(i);
        for (std::size_t j = 0; j < cfg_.n_out; ++j) {
            r[j] = std::clamp(r[j] * factor[j][k], cfg_.stdp.w_min, cfg_.stdp.w_max);
        }
    }
}

std::vector<std::array<double, 2>> AxisNetwork::channel_mass() const {
    const std::size_t n_in = cfg_.n_in_per_channel;
    std::vector<std::array<double, 2>> mass(cfg_.n_out, {0.0, 0.0});
    for (std::size_t i = 0; i < syn_.n_pre(); ++i) {
        const std::size_t k = i < n_in ? 0 : 1;
        const auto r = syn_.row(i);
        for (std::size_t j = 0; j < cfg_.n_out; ++j) mass[j][k] += r[j];
    }
    return mass;
}

double AxisNetwork::decode(const std::array<ChannelCode, 2>& plan, double total_count) const {
    return decode(plan, total_count, channel_mass());
}

double AxisNetwork::decode(const std::array<ChannelCode, 2>& plan, double total_count,
                           const std::vector<std::array<double, 2>>& mass) const {
    if (cfg_.decoder == Decoder::Affine || curve_.empty()) {
        CodecParams p = cfg_.codec;
        p.e_max = std::max(plan[0].scale, plan[1].scale);
        const double rate = total_count / (static_cast<double>(cfg_.n_out) * p.window);
        if (total_count == 0.0 && p.symmetric_zero) return 0.0;
        return (rate / p.r_out_max - 0.5) * 2.0 * p.e_max;
    }
    if (mass.size() != cfg_.n_out) throw StructuralError("decode: weight mass size mismatch");

    const double dt = cfg_.codec.dt;
    auto expected = [&](double e) {
        double total = 0.0;
        for (std::size_t j = 0; j < cfg_.n_out; ++j) {
            double drive = 0.0;
            for (std::size_t k = 0; k < 2; ++k) {
                const double x = std::clamp(0.5 + e / (2.0 * plan[k].scale), 0.0, 1.0);
                drive += mass[j][k] * plan[k].rate * dt * x;
            }
            total += curve_(drive);
        }
        return total;
    };

    double lo = -std::max(plan[0].scale, plan[1].scale);
    double hi = -lo;
    if (total_count <= expected(lo)) return lo;
    if (total_count >= expected(hi)) return hi;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (expected(mid) < total_count) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double AxisNetwork::run(const AxisSignals& in, Rng& rng, AxisTrace* trace, SpikeRaster* raster_out) {
    const auto plan = encode_plan(in);
    if (cfg_.learning_enabled && cfg_.recalibration_interval > 0 && windows_run_ > 0 &&
        windows_run_ % cfg_.recalibration_interval == 0) {
        calibrate(calibration_rng_);
    }
    ++windows_run_;
    const auto mass = channel_mass();
    std::vector<std::size_t> counts;
    double dw = 0.0;
    const auto input_spikes =
        simulate(plan, rng, cfg_.learning_enabled, counts, trace != nullptr ? &dw : nullptr, raster_out);
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    const double fused = decode(plan, total, mass);
    if (trace != nullptr) {
        trace->input_spikes = input_spikes;
        trace->output_counts = std::move(counts);
        trace->weight_change = dw;
        trace->saturations = static_cast<std::size_t>(plan[0].saturated) +
                             static_cast<std::size_t>(plan[1].saturated);
        trace->fused = fused;
    }
    return fused;
}

void AxisNetwork::calibrate_with(Rng rng) {
    calibrate(rng);
    calibration_rng_ = rng;
}

void AxisNetwork::calibrate(Rng& rng) {
    AxisNetwork probe = *this;
    const std::size_t levels = cfg_.calibration_levels;
    const double dt = cfg_.codec.dt;
    std::vector<std::pair<double, double>> samples;
    samples.reserve(levels * cfg_.calibration_windows * cfg_.n_out);
    std::vector<std::size_t> counts;
    for (std::size_t l = 0; l < levels; ++l) {
        const double x = static_cast<double>(l + 1) / static_cast<double>(levels);
        std::array<ChannelCode, 2> plan{};
        for (auto& c : plan) {
            c.value = x;
            c.rate = cfg_.codec.r_max;
        }
        std::vector<double> drive(cfg_.n_out, 0.0);
        for (std::size_t i = 0; i < probe.syn_.n_pre(); ++i) {
            const auto r = probe.syn_.row(i);
            for (std::size_t j = 0; j < cfg_.n_out; ++j) drive[j] += r[j] * x * cfg_.codec.r_max * dt;
        }
        const std::size_t warmup = cfg_.reset_each_window ? 0 : cfg_.calibration_warmup;
        for (std::size_t w = 0; w < warmup; ++w) {
            probe.simulate(plan, rng, false, counts, nullptr, nullptr);
        }
        // With per-window resets every window starts from the live weights, so
        // plasticity inside the window is part of the measured response.
        const bool fresh = cfg_.reset_each_window;
        for (std::size_t w = 0; w < cfg_.calibration_windows; ++w) {
            if (fresh) probe.syn_ = syn_;
            probe.simulate(plan, rng, fresh && cfg_.learning_enabled && !cfg_.deferred_plasticity, counts,
                           nullptr, nullptr);
            for (std::size_t j = 0; j < cfg_.n_out; ++j) {
                samples.emplace_back(drive[j], static_cast<double>(counts[j]));
            }
        }
    }
    curve_ = TransferCurve::fit(std::move(samples), 4 * levels);

    const double full_drive = cfg_.stdp.w_max * cfg_.codec.r_max * static_cast<double>(cfg_.n_inputs()) * dt;
    const double r = constant_current_rate(cfg_.neuron, full_drive, dt, 2000.0);
    cfg_.codec.r_out_max = r > 0.0 ? r : cfg_.codec.r_max;
}

// ---------------------------------------------------------------------------
// Network

namespace {

AxisNetwork make_axis(const NetworkConfig& cfg, const StreamFactory& streams, const char* init_tag,
                      const char* cal_tag) {
    Rng init = streams.stream(init_tag);
    AxisNetwork axis(cfg, init);
    axis.calibrate_with(streams.stream(cal_tag));
    return axis;
}

}  // namespace

Network::Network(const NetworkConfig& cfg, const StreamFactory& streams) : Network(cfg, cfg, streams) {}

Network::Network(const NetworkConfig& cfg_x, const NetworkConfig& cfg_y, const StreamFactory& streams)
    : x_(make_axis(cfg_x, streams, "network.init.x", "network.calibration.x")),
      y_(make_axis(cfg_y, streams, "network.init.y", "network.calibration.y")) {}

FusedError Network::run_window(const AxisSignals& x, const AxisSignals& y, Rng& rng_x, Rng& rng_y,
                               WindowTrace* trace) {
    FusedError out;
    if (trace != nullptr) {
        SpikeRaster* rx = trace->keep_rasters ? &trace->raster_x : nullptr;
        SpikeRaster* ry = trace->keep_rasters ? &trace->raster_y : nullptr;
        out.ex = x_.run(x, rng_x, &trace->x, rx);
        out.ey = y_.run(y, rng_y, &trace->y, ry);
    } else {
        out.ex = x_.run(x, rng_x);
        out.ey = y_.run(y, rng_y);
    }
    return out;
}

Network build_network(const NetworkConfig& cfg, const StreamFactory& streams) {
    return Network(cfg, streams);
}

double constant_current_rate(const NeuronParams& p, double current, double dt, double duration_ms) {
    NeuronState s = resting_state(p);
    const auto steps = static_cast<std::size_t>(std::llround(duration_ms / dt));
    // First half settles the adaptation variable; the second half is counted.
    std::size_t spikes = 0;
    for (std::size_t k = 0; k < 2 * steps; ++k) {
        s = apply_reset(rk4_step(s, current, dt, p), p);
        if (k >= steps && s.fired) ++spikes;
    }
    return static_cast<double>(spikes) / duration_ms;
}

}  // namespace glidesnn
