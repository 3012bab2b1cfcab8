#include "glidesnn/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <thread>

#include "glidesnn/error.hpp"

namespace glidesnn {

void ScenarioConfig::validate() const {
    radar1.validate();
    radar2.validate();
    if (radar1.position.x == radar2.position.x && radar1.position.y == radar2.position.y) {
        throw ConfigError("radar positions must be distinct");
    }
    if (sample_count(glide.duration, glide.sample_period) < 10) {
        throw ConfigError("duration / sample_period must yield at least 10 samples");
    }
    if (!(glide.sigma_w >= 0.0)) throw ConfigError("sigma_w must be >= 0");
    if (!(radar_noise_scale >= 0.0)) throw ConfigError("radar_noise_scale must be >= 0");
    network.validate();
}

namespace {

std::string at_sample(std::size_t n, const char* what) {
    std::ostringstream os;
    os << "sample " << n << ": " << what;
    return os.str();
}

template <class E>
[[noreturn]] void rethrow_with(std::size_t n, const E& e) {
    throw E(at_sample(n, e.what()));
}

/// Per-axis full scale for Normalization::Fixed, from the t = 0 geometry.
std::pair<double, double> initial_full_scale(const ScenarioConfig& cfg, Vec2 start) {
    Rng dummy(0);
    const MeasureOptions silent{0.0};
    const auto s1 = axis_sigma(measure(cfg.radar1, start, 0.0, Source::Radar1, dummy, silent));
    const auto s2 = axis_sigma(measure(cfg.radar2, start, 0.0, Source::Radar2, dummy, silent));
    const double k = cfg.network.scale_sigmas;
    return {k * std::max(s1.x, s2.x), k * std::max(s1.y, s2.y)};
}

}  // namespace

void summarize(RunReport& r) {
    if (r.samples.empty()) throw DomainError("summarize: report has no samples");
    std::vector<ErrorSample> e1;
    std::vector<ErrorSample> e2;
    std::vector<ErrorSample> ef;
    std::vector<ErrorSample> eo;
    for (const auto& s : r.samples) {
        e1.push_back(s.radar1);
        e2.push_back(s.radar2);
        ef.push_back(s.fused);
        eo.push_back(s.oracle);
    }
    r.radar1 = compute_stats(e1);
    r.radar2 = compute_stats(e2);
    r.fused = compute_stats(ef);
    r.oracle = compute_stats(eo);

    auto hist = [](const std::vector<ErrorSample>& v) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& s : v) {
            xs.push_back(s.ex);
            ys.push_back(s.ey);
        }
        return AxisHistograms{histogram(xs, kHistogramBinWidth), histogram(ys, kHistogramBinWidth)};
    };
    r.hist_radar1 = hist(e1);
    r.hist_radar2 = hist(e2);
    r.hist_fused = hist(ef);
}

RunReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const StreamFactory streams(cfg.seed);
    const auto trajectory = generate_trajectory(cfg.glide, streams);

    NetworkConfig net_x = cfg.network;
    NetworkConfig net_y = cfg.network;
    if (cfg.network.normalization == Normalization::Fixed) {
        const auto [sx, sy] = initial_full_scale(
            cfg, Vec2{trajectory.front().state.x, trajectory.front().state.y});
        net_x.codec.e_max = sx;
        net_y.codec.e_max = sy;
    }
    std::optional<Network> net;
    if (cfg.fusion == FusionMode::Snn) net.emplace(net_x, net_y, streams);

    RunReport report;
    report.seed = cfg.seed;
    report.samples.reserve(trajectory.size());
    const MeasureOptions opts{cfg.radar_noise_scale};

    for (std::size_t n = 0; n < trajectory.size(); ++n) {
        try {
            const auto& pt = trajectory[n];
            const Vec2 truth{pt.state.x, pt.state.y};

            Rng rng1 = streams.stream("radar1", n);
            Rng rng2 = streams.stream("radar2", n);
            const auto m1 = measure(cfg.radar1, truth, pt.t, Source::Radar1, rng1, opts);
            const auto m2 = measure(cfg.radar2, truth, pt.t, Source::Radar2, rng2, opts);

            SampleRecord rec;
            rec.t = pt.t;
            rec.truth = truth;
            rec.radar1 = measurement_error(m1, truth);
            rec.radar2 = measurement_error(m2, truth);
            rec.sigma1 = axis_sigma(m1);
            rec.sigma2 = axis_sigma(m2);
            rec.sigma_r1 = m1.sigma_r;
            rec.sigma_r2 = m2.sigma_r;
            rec.sigma_theta1 = m1.sigma_theta;
            rec.sigma_theta2 = m2.sigma_theta;

            rec.oracle = ErrorSample{
                pt.t,
                inverse_variance_oracle(rec.radar1.ex, rec.radar2.ex, rec.sigma1.x, rec.sigma2.x),
                inverse_variance_oracle(rec.radar1.ey, rec.radar2.ey, rec.sigma1.y, rec.sigma2.y),
                Source::Fused};

            if (net) {
                const AxisSignals xs{{rec.radar1.ex, rec.sigma1.x}, {rec.radar2.ex, rec.sigma2.x}};
                const AxisSignals ys{{rec.radar1.ey, rec.sigma1.y}, {rec.radar2.ey, rec.sigma2.y}};
                Rng rx = streams.stream("snn.x", n);
                Rng ry = streams.stream("snn.y", n);
                WindowTrace trace;
                const FusedError f = net->run_window(xs, ys, rx, ry, &trace);
                rec.fused = ErrorSample{pt.t, f.ex, f.ey, Source::Fused};
                report.saturations += trace.x.saturations + trace.y.saturations;
                report.weight_change += trace.x.weight_change + trace.y.weight_change;
            } else {
                rec.fused = ErrorSample{pt.t, rec.radar1.ex, rec.radar1.ey, Source::Fused};
            }
            report.samples.push_back(rec);
        } catch (const DomainError& e) {
            rethrow_with(n, e);
        } catch (const NumericError& e) {
            rethrow_with(n, e);
        } catch (const StructuralError& e) {
            rethrow_with(n, e);
        }
    }
    summarize(report);
    return report;
}

double SeedSummary::fused_to_oracle_x() const noexcept {
    return oracle.x.variance > 0.0 ? fused.x.variance / oracle.x.variance : 0.0;
}

double SeedSummary::fused_to_oracle_y() const noexcept {
    return oracle.y.variance > 0.0 ? fused.y.variance / oracle.y.variance : 0.0;
}

SeedSummary summarize_seed(const RunReport& r) {
    return {r.seed, r.radar1, r.radar2, r.fused, r.oracle};
}

SweepReport aggregate(std::vector<SeedSummary> seeds) {
    if (seeds.empty()) throw DomainError("aggregate: no seeds");
    SweepReport out;
    const auto n = static_cast<double>(seeds.size());
    auto add = [](SourceStats& acc, const SourceStats& s, double w) {
        acc.x.mean += s.x.mean * w;
        acc.x.variance += s.x.variance * w;
        acc.x.rms += s.x.rms * w;
        acc.y.mean += s.y.mean * w;
        acc.y.variance += s.y.variance * w;
        acc.y.rms += s.y.rms * w;
    };
    for (const auto& s : seeds) {
        const double fx = s.fused.x.variance;
        const double fy = s.fused.y.variance;
        const double r1x = s.radar1.x.variance;
        const double r1y = s.radar1.y.variance;
        const double r2x = s.radar2.x.variance;
        const double r2y = s.radar2.y.variance;
        out.frac_below_r1_x += fx < r1x;
        out.frac_below_r1_y += fy < r1y;
        out.frac_below_r2_x += fx < r2x;
        out.frac_below_r2_y += fy < r2y;
        out.frac_below_min_x += fx < std::min(r1x, r2x);
        out.frac_below_min_y += fy < std::min(r1y, r2y);
        out.frac_below_max_x += fx <= std::max(r1x, r2x);
        out.frac_below_max_y += fy <= std::max(r1y, r2y);
        add(out.mean_radar1, s.radar1, 1.0 / n);
        add(out.mean_radar2, s.radar2, 1.0 / n);
        add(out.mean_fused, s.fused, 1.0 / n);
        add(out.mean_oracle, s.oracle, 1.0 / n);
    }
    for (double* f : {&out.frac_below_r1_x, &out.frac_below_r1_y, &out.frac_below_r2_x,
                      &out.frac_below_r2_y, &out.frac_below_min_x, &out.frac_below_min_y,
                      &out.frac_below_max_x, &out.frac_below_max_y}) {
        *f /= n;
    }
    out.seeds = std::move(seeds);
    return out;
}

SweepReport sweep(const ScenarioConfig& cfg, std::size_t n_seeds, std::size_t jobs, const RunSink& sink) {
    if (n_seeds < 1) throw ConfigError("sweep: n_seeds must be >= 1");
    cfg.validate();
    jobs = std::clamp<std::size_t>(jobs, 1, n_seeds);

    std::vector<SeedSummary> results(n_seeds);
    std::vector<std::exception_ptr> errors(n_seeds);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < n_seeds; k = next++) {
            ScenarioConfig c = cfg;
            c.seed = cfg.seed + k;
            try {
                const RunReport r = run_scenario(c);
                if (sink) sink(r);
                results[k] = summarize_seed(r);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t k = 0; k < n_seeds; ++k) {
        if (!errors[k]) continue;
        const std::uint64_t seed = cfg.seed + k;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const ConfigError& e) {
            throw ConfigError("seed " + std::to_string(seed) + ": " + e.what());
        } catch (const IoError& e) {
            throw IoError("seed " + std::to_string(seed) + ": " + e.what());
        } catch (const DomainError& e) {
            throw DomainError("seed " + std::to_string(seed) + ": " + e.what());
        } catch (const StructuralError& e) {
            throw StructuralError("seed " + std::to_string(seed) + ": " + e.what());
        } catch (const NumericError& e) {
            throw NumericError("seed " + std::to_string(seed) + ": " + e.what());
        }
    }
    return aggregate(std::move(results));
}

}  // namespace glidesnn
