#include "glidesnn/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glidesnn/error.hpp"

namespace glidesnn {

namespace {
constexpr double kNever = -std::numeric_limits<double>::infinity();
}

void StdpParams::validate() const {
    if (!(a_plus > 0.0) || !(a_minus > 0.0)) throw ConfigError("STDP rates must be > 0");
    if (!(tau_plus > 0.0) || !(tau_minus > 0.0)) throw ConfigError("STDP time constants must be > 0");
    if (!(w_min < w_max)) throw ConfigError("STDP requires w_min < w_max");
}

double stdp_window(double delta_t, const StdpParams& p) noexcept {
    if (delta_t > 0.0) {
        return p.a_plus * std::exp(-delta_t / p.tau_plus);
    }
    if (delta_t < 0.0) {
        return -p.a_minus * std::exp(delta_t / p.tau_minus);
    }
    return 0.0;
}

SynapseMatrix::SynapseMatrix(std::size_t n_pre, std::size_t n_post, double initial_weight)
    : n_pre_(n_pre),
      n_post_(n_post),
      w_(n_pre * n_post, initial_weight),
      last_pre_(n_pre, kNever),
      last_post_(n_post, kNever),
      pre_delta_(n_pre, 0.0),
      post_delta_(n_post, 0.0) {}

double& SynapseMatrix::at(std::size_t pre, std::size_t post) {
    if (pre >= n_pre_ || post >= n_post_) throw StructuralError("synapse index out of range");
    return w_[pre * n_post_ + post];
}

double SynapseMatrix::at(std::size_t pre, std::size_t post) const {
    if (pre >= n_pre_ || post >= n_post_) throw StructuralError("synapse index out of range");
    return w_[pre * n_post_ + post];
}

std::span<double> SynapseMatrix::row(std::size_t pre) {
    if (pre >= n_pre_) throw StructuralError("pre-neuron index out of range");
    return std::span<double>(w_).subspan(pre * n_post_, n_post_);
}

std::span<const double> SynapseMatrix::row(std::size_t pre) const {
    if (pre >= n_pre_) throw StructuralError("pre-neuron index out of range");
    return std::span<const double>(w_).subspan(pre * n_post_, n_post_);
}

void SynapseMatrix::clamp(double lo, double hi) noexcept {
    for (double& w : w_) w = std::clamp(w, lo, hi);
}

void SynapseMatrix::on_spikes(std::span<const std::size_t> pre_spikes,
                              std::span<const std::size_t> post_spikes, double t,
                              const StdpParams& p) {
    for (std::size_t i : pre_spikes) {
        if (i >= n_pre_) throw StructuralError("pre spike index out of range");
        if (t < last_pre_[i]) throw DomainError("STDP update time precedes a recorded pre spike");
    }
    for (std::size_t j : post_spikes) {
        if (j >= n_post_) throw StructuralError("post spike index out of range");
        if (t < last_post_[j]) throw DomainError("STDP update time precedes a recorded post spike");
    }
    if (pre_spikes.empty() && post_spikes.empty()) return;

    // Causal delta is t_post - t_pre; the literal convention flips its sign.
    const double sign = p.convention == StdpConvention::Causal ? 1.0 : -1.0;

    if (!post_spikes.empty()) {
        for (std::size_t i = 0; i < n_pre_; ++i) {
            pre_delta_[i] = std::isfinite(last_pre_[i]) ? stdp_window(sign * (t - last_pre_[i]), p) : 0.0;
        }
        for (std::size_t j : post_spikes) {
            for (std::size_t i = 0; i < n_pre_; ++i) {
                w_[i * n_post_ + j] += pre_delta_[i];
            }
        }
    }
    if (!pre_spikes.empty()) {
        for (std::size_t j = 0; j < n_post_; ++j) {
            post_delta_[j] =
                std::isfinite(last_post_[j]) ? stdp_window(sign * (last_post_[j] - t), p) : 0.0;
        }
        for (std::size_t i : pre_spikes) {
            double* r = w_.data() + i * n_post_;
            for (std::size_t j = 0; j < n_post_; ++j) r[j] += post_delta_[j];
        }
    }

    // Only touched synapses can leave the bounds.
    for (std::size_t j : post_spikes) {
        for (std::size_t i = 0; i < n_pre_; ++i) {
            double& w = w_[i * n_post_ + j];
            w = std::clamp(w, p.w_min, p.w_max);
        }
    }
    for (std::size_t i : pre_spikes) {
        double* r = w_.data() + i * n_post_;
        for (std::size_t j = 0; j < n_post_; ++j) r[j] = std::clamp(r[j], p.w_min, p.w_max);
    }

    for (std::size_t i : pre_spikes) last_pre_[i] = t;
    for (std::size_t j : post_spikes) last_post_[j] = t;
}

}  // namespace glidesnn
