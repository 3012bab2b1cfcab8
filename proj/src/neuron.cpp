#include "glidesnn/neuron.hpp"

#include <cmath>
#include <sstream>

#include "glidesnn/error.hpp"

namespace glidesnn {

void NeuronParams::validate() const {
    if (!(a > 0.0)) throw ConfigError("neuron.a must be > 0");
    if (!(v_thresh > c)) throw ConfigError("neuron.v_thresh must exceed neuron.c");
    if (!(max_dt > 0.0)) throw ConfigError("neuron.max_dt must be > 0");
}

NeuronState resting_state(const NeuronParams& p) noexcept {
    const double qa = 0.04;
    const double qb = 5.0 - p.b;
    const double qc = 140.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) {
        return {p.c, p.b * p.c, false};
    }
    // Lower root: the stable node of the v-nullcline/u-nullcline intersection.
    const double v = (-qb - std::sqrt(disc)) / (2.0 * qa);
    return {v, p.b * v, false};
}

NeuronState rk4_step(const NeuronState& s, double i, double dt, const NeuronParams& p) {
    if (!(dt > 0.0)) throw ConfigError("rk4_step: dt must be > 0");
    if (dt > p.max_dt) throw ConfigError("rk4_step: dt exceeds the configured stability limit");

    const double h = 0.5 * dt;
    const Derivative k1 = izhikevich_rhs(s.v, s.u, i, p);
    const Derivative k2 = izhikevich_rhs(s.v + h * k1.dv, s.u + h * k1.du, i, p);
    const Derivative k3 = izhikevich_rhs(s.v + h * k2.dv, s.u + h * k2.du, i, p);
    const Derivative k4 = izhikevich_rhs(s.v + dt * k3.dv, s.u + dt * k3.du, i, p);

    NeuronState out;
    out.v = s.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    out.u = s.u + dt / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
    out.fired = false;
    if (!std::isfinite(out.v) || !std::isfinite(out.u)) {
        std::ostringstream msg;
        msg << "rk4_step: non-finite state from v=" << s.v << " u=" << s.u << " I=" << i
            << " dt=" << dt;
        throw NumericError(msg.str());
    }
    return out;
}

}  // namespace glidesnn
