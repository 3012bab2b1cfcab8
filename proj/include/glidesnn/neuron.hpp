#pragma once

namespace glidesnn {

/// Izhikevich parameters. Defaults are the glide-path network's values
/// (note b = 0.01, far below the textbook 0.2: u is only weakly driven by v).
struct NeuronParams {
    double a = 0.02;         ///< recovery rate (1/ms)
    double b = 0.01;         ///< sensitivity of u to v
    double c = -55.0;        ///< reset potential (mV)
    double d = 6.0;          ///< increment of u at reset
    double v_thresh = 30.0;  ///< spike threshold (mV)
    double max_dt = 1.0;     ///< largest accepted integration step (ms)

    /// Throws ConfigError unless a > 0 and v_thresh > c.
    void validate() const;
};

struct NeuronState {
    double v = -65.0;  ///< membrane potential (mV)
    double u = -0.65;  ///< recovery variable
    bool fired = false;
};

struct Derivative {
    double dv = 0.0;
    double du = 0.0;
};

/// dv = 0.04 v^2 + 5 v + 140 - u + I,  du = a (b v - u).
[[nodiscard]] constexpr Derivative izhikevich_rhs(double v, double u, double i,
                                                  const NeuronParams& p) noexcept {
    return {0.04 * v * v + 5.0 * v + 140.0 - u + i, p.a * (p.b * v - u)};
}

/// Resting state for zero input: the stable root of 0.04 v^2 + (5 - b) v + 140 = 0
/// with u = b v. Falls back to v = c if no equilibrium exists.
[[nodiscard]] NeuronState resting_state(const NeuronParams& p) noexcept;

/// One classical RK4 step with the input held constant over the step. Does not
/// apply the reset rule; `fired` is cleared.
/// Throws ConfigError for dt <= 0 or dt > max_dt, NumericError on a non-finite result.
[[nodiscard]] NeuronState rk4_step(const NeuronState& state, double i, double dt,
                                   const NeuronParams& p);

/// v > v_thresh -> (c, u + d, fired); otherwise unchanged with fired = false.
[[nodiscard]] constexpr NeuronState apply_reset(const NeuronState& s, const NeuronParams& p) noexcept {
    if (s.v > p.v_thresh) {
        return {p.c, s.u + p.d, true};
    }
    return {s.v, s.u, false};
}

}  // namespace glidesnn
