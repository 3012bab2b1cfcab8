#pragma once

#include "glidesnn/rng.hpp"

namespace glidesnn {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

enum class Source { Radar1, Radar2, Fused };

[[nodiscard]] const char* to_string(Source s) noexcept;

/// Radar equation constants. Gains are linear ratios (20 dB -> 100).
struct RadarParams {
    double transmit_power = 300.0;  ///< P_t (W)
    double tx_gain = 100.0;         ///< G_t
    double rx_gain = 100.0;         ///< G_r
    double wavelength = 0.03188;    ///< lambda (m)
    double rcs = 6.0;               ///< sigma (m^2)
    double bandwidth = 1e8;         ///< B (Hz)
    double loss = 1e-17;            ///< L, divides the echo power
    double aperture = 10.0;         ///< D (m)
    Vec2 position{};
    double noise_rms = 10.0;        ///< A; noise power is A^2

    /// Throws ConfigError unless every scalar is positive and finite.
    void validate() const;
};

struct RadarMeasurement {
    double t = 0.0;
    Source radar_id = Source::Radar1;
    double range_true = 0.0;    ///< m
    double bearing_true = 0.0;  ///< rad, CCW from +x, measured at the radar
    double range_meas = 0.0;
    double bearing_meas = 0.0;
    double x_meas = 0.0;
    double y_meas = 0.0;
    double sigma_r = 0.0;      ///< m
    double sigma_theta = 0.0;  ///< rad
    double snr = 0.0;          ///< linear
};

struct ErrorSample {
    double t = 0.0;
    double ex = 0.0;  ///< true_x - x_meas
    double ey = 0.0;  ///< true_y - y_meas
    Source source = Source::Radar1;
};

/// Per-axis standard deviation of a measurement's Cartesian error, linearized
/// around the measured geometry.
struct AxisSigma {
    double x = 0.0;
    double y = 0.0;
};

/// P_t G_t G_r lambda^2 sigma / ((4 pi)^3 R^4 L). Throws DomainError for range <= 0.
[[nodiscard]] double echo_power(const RadarParams& params, double range);

/// p_r / A^2. Throws ConfigError for noise_rms <= 0.
[[nodiscard]] double snr(double p_r, double noise_rms);

/// sqrt(3) lambda / (pi D sqrt(2 SNR)).
[[nodiscard]] double angle_rms(double wavelength, double aperture, double snr);

/// (c / 2) / (2 pi B sqrt(2 SNR)).
[[nodiscard]] double range_rms(double bandwidth, double snr);

struct MeasureOptions {
    /// Multiplies both noise standard deviations. 0 gives noiseless measurements;
    /// the reported sigma fields are unaffected.
    double noise_scale = 1.0;
};

/// Noisy polar measurement of `true_pos`: range ~ N(R, sigma_r^2), bearing ~
/// N(theta, sigma_theta^2), sigmas evaluated at the true range.
/// Throws DomainError when the target sits on the radar.
[[nodiscard]] RadarMeasurement measure(const RadarParams& params, Vec2 true_pos, double t,
                                       Source radar_id, Rng& rng,
                                       const MeasureOptions& options = {});

/// ex = true_x - x_meas, ey = true_y - y_meas.
[[nodiscard]] ErrorSample measurement_error(const RadarMeasurement& m, Vec2 true_pos);

/// Projects (sigma_r, sigma_theta) onto the Cartesian axes at the true geometry.
[[nodiscard]] AxisSigma axis_sigma(const RadarMeasurement& m);

}  // namespace glidesnn
