#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "glidesnn/kinematics.hpp"
#include "glidesnn/network.hpp"
#include "glidesnn/radar.hpp"
#include "glidesnn/stats.hpp"

namespace glidesnn {

/// What produces the "fused" column.
enum class FusionMode {
    Snn,
    /// Copies radar1's error; used to check the pipeline around the network.
    PassthroughRadar1,
};

struct ScenarioConfig {
    RadarParams radar1{};
    RadarParams radar2 = [] {
        RadarParams r;
        r.position = {100.0, 0.0};
        return r;
    }();
    GlideConfig glide;
    NetworkConfig network;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    double radar_noise_scale = 1.0;  ///< test hook; 0 removes measurement noise
    FusionMode fusion = FusionMode::Snn;

    /// Throws ConfigError on any invalid field.
    void validate() const;
};

struct SampleRecord {
    double t = 0.0;
    Vec2 truth;
    ErrorSample radar1;
    ErrorSample radar2;
    ErrorSample fused;
    ErrorSample oracle;  ///< inverse-variance baseline
    AxisSigma sigma1;
    AxisSigma sigma2;
    double sigma_r1 = 0.0;
    double sigma_r2 = 0.0;
    double sigma_theta1 = 0.0;
    double sigma_theta2 = 0.0;
};

struct AxisHistograms {
    Histogram x;
    Histogram y;
};

struct RunReport {
    std::uint64_t seed = 0;
    std::vector<SampleRecord> samples;
    SourceStats radar1;
    SourceStats radar2;
    SourceStats fused;
    SourceStats oracle;
    AxisHistograms hist_radar1;
    AxisHistograms hist_radar2;
    AxisHistograms hist_fused;
    std::size_t saturations = 0;  ///< encoder clamps over the run
    double weight_change = 0.0;   ///< total |delta w| over the run
};

inline constexpr double kHistogramBinWidth = 0.01;  // m

/// Runs the full pipeline for cfg.seed. Errors carry the failing sample index.
[[nodiscard]] RunReport run_scenario(const ScenarioConfig& cfg);

/// Fills stats and histograms of a report from its samples.
void summarize(RunReport& report);

struct SeedSummary {
    std::uint64_t seed = 0;
    SourceStats radar1;
    SourceStats radar2;
    SourceStats fused;
    SourceStats oracle;
    [[nodiscard]] double fused_to_oracle_x() const noexcept;
    [[nodiscard]] double fused_to_oracle_y() const noexcept;
};

[[nodiscard]] SeedSummary summarize_seed(const RunReport& r);

struct SweepReport {
    std::vector<SeedSummary> seeds;
    /// Fraction of seeds with fused variance below radar1 / radar2 / both, per axis.
    double frac_below_r1_x = 0.0;
    double frac_below_r1_y = 0.0;
    double frac_below_r2_x = 0.0;
    double frac_below_r2_y = 0.0;
    double frac_below_min_x = 0.0;
    double frac_below_min_y = 0.0;
    double frac_below_max_x = 0.0;
    double frac_below_max_y = 0.0;
    /// Means of the per-seed statistics.
    SourceStats mean_radar1;
    SourceStats mean_radar2;
    SourceStats mean_fused;
    SourceStats mean_oracle;
};

/// Callback invoked with each finished run (from worker threads, one call per seed).
using RunSink = std::function<void(const RunReport&)>;

/// Runs seeds cfg.seed .. cfg.seed + n_seeds - 1 on up to `jobs` threads. The
/// result is independent of `jobs`.
[[nodiscard]] SweepReport sweep(const ScenarioConfig& cfg, std::size_t n_seeds, std::size_t jobs = 1,
                                const RunSink& sink = {});

[[nodiscard]] SweepReport aggregate(std::vector<SeedSummary> seeds);

}  // namespace glidesnn
