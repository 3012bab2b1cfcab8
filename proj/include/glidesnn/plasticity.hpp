#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glidesnn {

/// Which spike-time difference potentiates.
enum class StdpConvention {
    /// delta_t = t_post - t_pre; pre-before-post pairs strengthen (default).
    Causal,
    /// delta_t = t_pre - t_post, taken literally; post-before-pre pairs strengthen.
    AntiCausal,
};

struct StdpParams {
    double a_plus = 0.1;     ///< potentiation amplitude
    double a_minus = 0.12;   ///< depression amplitude
    double tau_plus = 20.0;  ///< ms
    double tau_minus = 20.0; ///< ms
    double w_min = 0.0;
    double w_max = 10.0;
    StdpConvention convention = StdpConvention::Causal;

    void validate() const;
};

/// delta_t > 0: +A+ exp(-delta_t / tau+); delta_t < 0: -A- exp(delta_t / tau-); 0 -> 0.
[[nodiscard]] double stdp_window(double delta_t, const StdpParams& p) noexcept;

/// Dense pre x post weight matrix plus the most recent spike time of every neuron.
/// Row-major: the weights leaving pre-neuron i are contiguous.
class SynapseMatrix {
public:
    SynapseMatrix(std::size_t n_pre, std::size_t n_post, double initial_weight = 0.0);

    [[nodiscard]] std::size_t n_pre() const noexcept { return n_pre_; }
    [[nodiscard]] std::size_t n_post() const noexcept { return n_post_; }

    [[nodiscard]] double& at(std::size_t pre, std::size_t post);
    [[nodiscard]] double at(std::size_t pre, std::size_t post) const;

    [[nodiscard]] std::span<double> row(std::size_t pre);
    [[nodiscard]] std::span<const double> row(std::size_t pre) const;
    [[nodiscard]] std::span<const double> weights() const noexcept { return w_; }

    [[nodiscard]] double last_pre_spike(std::size_t pre) const { return last_pre_.at(pre); }
    [[nodiscard]] double last_post_spike(std::size_t post) const { return last_post_.at(post); }

    void clamp(double lo, double hi) noexcept;

    /// Nearest-spike STDP for all neurons spiking at time t, then records t as
    /// their latest spike. Throws StructuralError for out-of-range indices and
    /// DomainError if t precedes a recorded spike.
    void on_spikes(std::span<const std::size_t> pre_spikes, std::span<const std::size_t> post_spikes,
                   double t, const StdpParams& p);

private:
    std::size_t n_pre_;
    std::size_t n_post_;
    std::vector<double> w_;
    std::vector<double> last_pre_;
    std::vector<double> last_post_;
    std::vector<double> pre_delta_;   // scratch, one entry per pre-neuron
    std::vector<double> post_delta_;  // scratch, one entry per post-neuron
};

/// Free-function form of SynapseMatrix::on_spikes.
inline void on_spike_pair_update(SynapseMatrix& syn, std::span<const std::size_t> pre_spikes,
                                 std::span<const std::size_t> post_spikes, double t,
                                 const StdpParams& p) {
    syn.on_spikes(pre_spikes, post_spikes, t, p);
}

}  // namespace glidesnn
