#include <doctest.h>

#include <cmath>

#include "glidesnn/error.hpp"
#include "glidesnn/kinematics.hpp"
#include "glidesnn/radar.hpp"

using namespace glidesnn;

namespace {
const double kR1 = std::hypot(600.0, 100.0);  // radar1 to the start point
const double kR2 = std::hypot(700.0, 100.0);
}  // namespace

TEST_CASE("echo power, SNR and RMS at the start of the glide (radar1)") {
    const RadarParams p;
    const double pr = echo_power(p, kR1);
    CHECK(pr == doctest::Approx(6734046.1804968556).epsilon(1e-12));
    const double s = snr(pr, p.noise_rms);
    CHECK(s == doctest::Approx(67340.461804968552).epsilon(1e-12));
    CHECK(angle_rms(p.wavelength, p.aperture, s) == doctest::Approx(4.7893439176373923e-06).epsilon(1e-12));
    CHECK(range_rms(p.bandwidth, s) == doctest::Approx(0.00065006651476157227).epsilon(1e-12));
}

TEST_CASE("radar2 start values and a close-range point") {
    const RadarParams p;
    const double s2 = snr(echo_power(p, kR2), p.noise_rms);
    CHECK(s2 == doctest::Approx(36875.636884400781).epsilon(1e-12));
    CHECK(range_rms(p.bandwidth, s2) == doctest::Approx(0.00087846826319131388).epsilon(1e-12));
    const double s100 = snr(echo_power(p, 100.0), p.noise_rms);
    CHECK(s100 == doctest::Approx(92189092.211001948).epsilon(1e-12));
    CHECK(angle_rms(p.wavelength, p.aperture, s100) == doctest::Approx(1.2944172750371331e-07).epsilon(1e-12));
}

TEST_CASE("echo power scales as R^-4") {
    const RadarParams p;
    CHECK(echo_power(p, 200.0) / echo_power(p, 400.0) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("radar formula domain errors") {
    const RadarParams p;
    CHECK_THROWS_AS((void)echo_power(p, 0.0), DomainError);
    CHECK_THROWS_AS((void)echo_power(p, -5.0), DomainError);
    CHECK_THROWS_AS((void)snr(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS((void)angle_rms(0.03, 10.0, 0.0), DomainError);
    CHECK_THROWS_AS((void)range_rms(1e8, -1.0), DomainError);
}

TEST_CASE("RadarParams validation") {
    RadarParams p;
    CHECK_NOTHROW(p.validate());
    p.bandwidth = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.loss = std::nan("");
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("noiseless measurement reproduces the truth exactly") {
    const RadarParams p;
    Rng rng(1);
    const Vec2 truth{-412.3, 81.17};
    const auto m = measure(p, truth, 0.0, Source::Radar1, rng, MeasureOptions{0.0});
    const auto e = measurement_error(m, truth);
    CHECK(e.ex == 0.0);
    CHECK(e.ey == 0.0);
    CHECK(m.sigma_r > 0.0);
    CHECK(m.range_true == doctest::Approx(std::hypot(412.3, 81.17)));
}

TEST_CASE("measuring a target on the radar is a domain error") {
    RadarParams p;
    p.position = {3.0, 4.0};
    Rng rng(1);
    CHECK_THROWS_AS((void)measure(p, {3.0, 4.0}, 0.0, Source::Radar1, rng), DomainError);
}

TEST_CASE("polar noise has the analytic standard deviations") {
    const RadarParams p;
    const Vec2 truth{-600.0, 100.0};
    Rng rng(42);
    const int n = 40000;
    double sr = 0.0;
    double st = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    RadarMeasurement m;
    for (int k = 0; k < n; ++k) {
        m = measure(p, truth, 0.0, Source::Radar1, rng);
        sr += std::pow(m.range_meas - m.range_true, 2);
        st += std::pow(m.bearing_meas - m.bearing_true, 2);
        const auto e = measurement_error(m, truth);
        sx += e.ex * e.ex;
        sy += e.ey * e.ey;
    }
    const auto ax = axis_sigma(m);
    // sample std of a normal: relative spread ~ 1/sqrt(2n) = 0.35 %
    CHECK(std::sqrt(sr / n) / m.sigma_r == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::sqrt(st / n) / m.sigma_theta == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::sqrt(sx / n) / ax.x == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::sqrt(sy / n) / ax.y == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("axis_sigma on the x axis splits range and cross-range") {
    const RadarParams p;
    Rng rng(1);
    const auto m = measure(p, {300.0, 0.0}, 0.0, Source::Radar1, rng);
    const auto s = axis_sigma(m);
    CHECK(s.x == doctest::Approx(m.sigma_r).epsilon(1e-9));
    CHECK(s.y == doctest::Approx(300.0 * m.sigma_theta).epsilon(1e-9));
}

TEST_CASE("along the default glide both RMS values strictly decrease and radar1 is tighter") {
    const GlideConfig g;
    const auto traj = generate_trajectory(g, StreamFactory(1));
    RadarParams r1;
    RadarParams r2;
    r2.position = {100.0, 0.0};
    double prev_r1 = 1e9;
    double prev_r2 = 1e9;
    for (const auto& pt : traj) {
        Rng rng(0);
        const Vec2 pos{pt.state.x, pt.state.y};
        const auto m1 = measure(r1, pos, pt.t, Source::Radar1, rng, MeasureOptions{0.0});
        const auto m2 = measure(r2, pos, pt.t, Source::Radar2, rng, MeasureOptions{0.0});
        CHECK(m1.sigma_r < prev_r1);
        CHECK(m2.sigma_r < prev_r2);
        CHECK(m1.sigma_r < m2.sigma_r);
        CHECK(m1.sigma_theta < m2.sigma_theta);
        prev_r1 = m1.sigma_r;
        prev_r2 = m2.sigma_r;
    }
}

TEST_CASE("source names") {
    CHECK(std::string(to_string(Source::Radar1)) == "radar1");
    CHECK(std::string(to_string(Source::Radar2)) == "radar2");
    CHECK(std::string(to_string(Source::Fused)) == "snn");
}
