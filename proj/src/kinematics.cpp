#include "glidesnn/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "glidesnn/error.hpp"

namespace glidesnn {

namespace {

bool finite(const AircraftState& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.vx) && std::isfinite(s.vy);
}

}  // namespace

AircraftState cv_step(const AircraftState& state, double T, const CvNoise& noise) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("cv_step: step duration must be positive and finite");
    }
    if (!finite(state) || !std::isfinite(noise.wx) || !std::isfinite(noise.wy)) {
        throw DomainError("cv_step: non-finite state or noise");
    }
    const double half_t2 = 0.5 * T * T;
    return AircraftState{
        state.x + T * state.vx + half_t2 * noise.wx,
        state.y + T * state.vy + half_t2 * noise.wy,
        state.vx + T * noise.wx,
        state.vy + T * noise.wy,
    };
}

CvNoise sample_cv_noise(double sigma_w, double T, Rng& rng) {
    if (sigma_w < 0.0 || !std::isfinite(sigma_w)) {
        throw ConfigError("sigma_w must be finite and >= 0");
    }
    if (sigma_w == 0.0) {
        return {};
    }
    std::normal_distribution<double> n(0.0, sigma_w / std::sqrt(T));
    const double wx = n(rng);
    const double wy = n(rng);
    return {wx, wy};
}

std::size_t sample_count(double duration, double sample_period) {
    if (!(duration > 0.0) || !(sample_period > 0.0) || !std::isfinite(duration) ||
        !std::isfinite(sample_period)) {
        throw ConfigError("duration and sample_period must be positive");
    }
    const double ratio = duration / sample_period;
    return static_cast<std::size_t>(std::floor(ratio + 1e-9 * std::max(1.0, ratio))) + 1;
}

std::vector<TrajectoryPoint> generate_trajectory(const GlideConfig& config,
                                                 const StreamFactory& streams) {
    const std::size_t n = sample_count(config.duration, config.sample_period);
    if (!finite(config.initial)) {
        throw ConfigError("initial aircraft state must be finite");
    }
    std::vector<TrajectoryPoint> out;
    out.reserve(n);
    AircraftState s = config.initial;
    out.push_back({0.0, s});
    for (std::size_t k = 1; k < n; ++k) {
        CvNoise w;
        if (config.sigma_w > 0.0) {
            Rng rng = streams.stream("kinematics", k);
            w = sample_cv_noise(config.sigma_w, config.sample_period, rng);
        } else if (config.sigma_w < 0.0) {
            throw ConfigError("sigma_w must be >= 0");
        }
        s = cv_step(s, config.sample_period, w);
        out.push_back({static_cast<double>(k) * config.sample_period, s});
    }
    return out;
}

}  // namespace glidesnn
