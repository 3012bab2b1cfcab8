#pragma once

#include <cstddef>
#include <vector>

#include "glidesnn/rng.hpp"

namespace glidesnn {

/// Planar aircraft state: two independent constant-velocity axes.
struct AircraftState {
    double x = 0.0;   ///< along-track position (m)
    double y = 0.0;   ///< altitude (m)
    double vx = 0.0;  ///< horizontal velocity (m/s)
    double vy = 0.0;  ///< vertical velocity (m/s), negative when descending
};

/// One draw of the acceleration noise entering the CV model through G = [T^2/2, T]^T.
struct CvNoise {
    double wx = 0.0;  ///< along-track acceleration (m/s^2)
    double wy = 0.0;  ///< vertical acceleration (m/s^2)
};

struct TrajectoryPoint {
    double t = 0.0;
    AircraftState state;
};

struct GlideConfig {
    AircraftState initial{-600.0, 100.0, 10.0, -1.0};
    /// Acceleration noise intensity (m/s^2 per sqrt(Hz)); 0 gives the ideal glide line.
    double sigma_w = 0.0;
    double sample_period = 0.1;  ///< s
    double duration = 60.0;      ///< s
};

/// Advances the state by T seconds: [p; v] <- [[1, T], [0, 1]] [p; v] + [T^2/2; T] w per axis.
/// Throws DomainError for non-finite input or T <= 0.
[[nodiscard]] AircraftState cv_step(const AircraftState& state, double T, const CvNoise& noise = {});

/// Draws one CvNoise for a step of length T. The per-step acceleration has
/// standard deviation sigma_w / sqrt(T), so velocity variance grows as sigma_w^2 * t.
[[nodiscard]] CvNoise sample_cv_noise(double sigma_w, double T, Rng& rng);

/// Number of samples floor(duration / period) + 1, tolerant to the rounding of
/// e.g. 60 / 0.1.
[[nodiscard]] std::size_t sample_count(double duration, double sample_period);

/// True glide trajectory sampled at t_k = k * sample_period. Step k draws its
/// noise from streams.stream("kinematics", k).
[[nodiscard]] std::vector<TrajectoryPoint> generate_trajectory(const GlideConfig& config,
                                                               const StreamFactory& streams);

}  // namespace glidesnn
