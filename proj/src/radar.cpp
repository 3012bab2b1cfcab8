#include "glidesnn/radar.hpp"

#include <cmath>
#include <random>

#include "glidesnn/error.hpp"

namespace glidesnn {

const char* to_string(Source s) noexcept {
    switch (s) {
        case Source::Radar1: return "radar1";
        case Source::Radar2: return "radar2";
        case Source::Fused: return "snn";
    }
    return "?";
}

void RadarParams::validate() const {
    for (double v : {transmit_power, tx_gain, rx_gain, wavelength, rcs, bandwidth, loss, aperture,
                     noise_rms}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("radar parameters must be positive and finite");
        }
    }
    if (!std::isfinite(position.x) || !std::isfinite(position.y)) {
        throw ConfigError("radar position must be finite");
    }
}

double echo_power(const RadarParams& p, double range) {
    if (!(range > 0.0) || !std::isfinite(range)) {
        throw DomainError("echo_power: range must be positive");
    }
    const double four_pi = 4.0 * kPi;
    const double r2 = range * range;
    return p.transmit_power * p.tx_gain * p.rx_gain * p.wavelength * p.wavelength * p.rcs /
           (four_pi * four_pi * four_pi * r2 * r2 * p.loss);
}

double snr(double p_r, double noise_rms) {
    if (!(noise_rms > 0.0)) {
        throw ConfigError("snr: noise RMS must be positive");
    }
    return p_r / (noise_rms * noise_rms);
}

double angle_rms(double wavelength, double aperture, double snr_linear) {
    if (!(wavelength > 0.0) || !(aperture > 0.0) || !(snr_linear > 0.0)) {
        throw DomainError("angle_rms: wavelength, aperture and SNR must be positive");
    }
    return std::sqrt(3.0) * wavelength / (kPi * aperture * std::sqrt(2.0 * snr_linear));
}

double range_rms(double bandwidth, double snr_linear) {
    if (!(bandwidth > 0.0) || !(snr_linear > 0.0)) {
        throw DomainError("range_rms: bandwidth and SNR must be positive");
    }
    return 0.5 * kSpeedOfLight / (2.0 * kPi * bandwidth * std::sqrt(2.0 * snr_linear));
}

RadarMeasurement measure(const RadarParams& params, Vec2 true_pos, double t, Source radar_id,
                         Rng& rng, const MeasureOptions& options) {
    const double dx = true_pos.x - params.position.x;
    const double dy = true_pos.y - params.position.y;
    const double range = std::hypot(dx, dy);
    if (!(range > 0.0)) {
        throw DomainError("measure: target coincides with the radar position");
    }

    RadarMeasurement m;
    m.t = t;
    m.radar_id = radar_id;
    m.range_true = range;
    m.bearing_true = std::atan2(dy, dx);
    m.snr = snr(echo_power(params, range), params.noise_rms);
    m.sigma_r = range_rms(params.bandwidth, m.snr);
    m.sigma_theta = angle_rms(params.wavelength, params.aperture, m.snr);

    // Two draws per measurement in fixed order: range then bearing.
    std::normal_distribution<double> unit(0.0, 1.0);
    const double nr = unit(rng);
    const double nb = unit(rng);
    m.range_meas = range + options.noise_scale * m.sigma_r * nr;
    m.bearing_meas = m.bearing_true + options.noise_scale * m.sigma_theta * nb;
    if (options.noise_scale == 0.0) {
        // Reproduce the truth exactly rather than through cos/sin round-off.
        m.x_meas = true_pos.x;
        m.y_meas = true_pos.y;
    } else {
        m.x_meas = params.position.x + m.range_meas * std::cos(m.bearing_meas);
        m.y_meas = params.position.y + m.range_meas * std::sin(m.bearing_meas);
    }
    return m;
}

ErrorSample measurement_error(const RadarMeasurement& m, Vec2 true_pos) {
    return ErrorSample{m.t, true_pos.x - m.x_meas, true_pos.y - m.y_meas, m.radar_id};
}

AxisSigma axis_sigma(const RadarMeasurement& m) {
    const double c = std::cos(m.bearing_true);
    const double s = std::sin(m.bearing_true);
    const double cross = m.range_true * m.sigma_theta;
    return AxisSigma{std::hypot(c * m.sigma_r, s * cross), std::hypot(s * m.sigma_r, c * cross)};
}

}  // namespace glidesnn
