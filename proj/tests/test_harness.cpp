#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "glidesnn/config.hpp"
#include "glidesnn/error.hpp"
#include "glidesnn/output.hpp"
#include "glidesnn/scenario.hpp"
#include "glidesnn/stats.hpp"

using namespace glidesnn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const char* name) {
    const auto p = fs::temp_directory_path() / ("glidesnn_test_" + std::string(name));
    fs::remove_all(p);
    return p;
}

ScenarioConfig radar_only() {
    ScenarioConfig cfg;
    cfg.fusion = FusionMode::PassthroughRadar1;
    return cfg;
}

ScenarioConfig short_snn() {
    ScenarioConfig cfg;
    cfg.glide.duration = 3.0;
    return cfg;
}

}  // namespace

TEST_CASE("compute_stats") {
    const std::vector<double> c(7, 0.25);
    const auto a = compute_stats(c);
    CHECK(a.mean == 0.25);
    CHECK(a.variance == 0.0);
    CHECK(a.rms == 0.25);

    const std::vector<double> pm{-1.0, 1.0};
    const auto b = compute_stats(pm);
    CHECK(b.mean == 0.0);
    CHECK(b.variance == 1.0);
    CHECK(b.rms == 1.0);

    CHECK_THROWS_AS((void)compute_stats(std::vector<double>{}), DomainError);
}

TEST_CASE("compute_stats on 1e5 normal draws") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 0.02);
    std::vector<double> v(100000);
    for (auto& x : v) x = n(rng);
    CHECK(compute_stats(v).variance == doctest::Approx(4e-4).epsilon(0.03));
}

TEST_CASE("histogram edges and counts") {
    const std::vector<double> same(9, 0.005);
    const auto h = histogram(same, 0.01);
    REQUIRE(h.counts.size() == 1);
    CHECK(h.lower_edge(0) == 0.0);
    CHECK(h.upper_edge(0) == doctest::Approx(0.01));
    CHECK(h.counts[0] == 9);

    const auto two = histogram(std::vector<double>{-0.005, 0.005}, 0.01);
    REQUIRE(two.counts.size() == 2);
    CHECK(two.first_bin == -1);
    CHECK(two.counts[0] == 1);
    CHECK(two.counts[1] == 1);

    // values sitting exactly on an edge go to the upper bin
    CHECK(bin_index(0.03, 0.01) == 3);
    CHECK(bin_index(-0.03, 0.01) == -3);
    CHECK(bin_index(0.0, 0.01) == 0);

    CHECK_THROWS_AS((void)histogram(same, 0.0), DomainError);
}

TEST_CASE("uniform histogram is multinomial") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 0.05);
    std::vector<double> v(100000);
    for (auto& x : v) x = u(rng);
    const auto h = histogram(v, 0.01);
    REQUIRE(h.counts.size() == 5);
    CHECK(h.total() == v.size());
    const double n = 1e5;
    const double p = 0.2;
    for (auto c : h.counts) CHECK(std::abs(static_cast<double>(c) - n * p) <= 3.0 * std::sqrt(n * p * (1 - p)));
}

TEST_CASE("inverse-variance oracle") {
    CHECK(inverse_variance_oracle(1.0, 3.0, 2.0, 2.0) == doctest::Approx(2.0));
    CHECK(inverse_variance_oracle(1.0, 3.0, 1.0, 2.0) == doctest::Approx(1.4));
    CHECK(inverse_variance_oracle(1.0, 3.0, 1.0, 1e9) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)inverse_variance_oracle(1.0, 3.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)inverse_variance_oracle(1.0, 3.0, 1.0, -1.0), DomainError);
}

TEST_CASE("scenario validation") {
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.radar2.position = cfg.radar1.position;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.glide.duration = 0.5;  // 6 samples
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("default scenario sample count and radar-only pipeline") {
    const auto r = run_scenario(radar_only());
    CHECK(r.samples.size() == 601);
    CHECK(r.samples.back().t == doctest::Approx(60.0));
    // passthrough: fused stats equal radar1 exactly
    CHECK(r.fused.x.variance == r.radar1.x.variance);
    CHECK(r.fused.y.mean == r.radar1.y.mean);
    CHECK(r.fused.y.rms == r.radar1.y.rms);
    for (const auto* h : {&r.hist_radar1, &r.hist_radar2, &r.hist_fused}) {
        CHECK(h->x.total() == 601);
        CHECK(h->y.total() == 601);
        CHECK(h->x.bin_width == 0.01);
    }
    // oracle never does worse than the better radar (5 % sampling slack)
    CHECK(r.oracle.x.variance <= 1.05 * std::min(r.radar1.x.variance, r.radar2.x.variance));
    CHECK(r.oracle.y.variance <= 1.05 * std::min(r.radar1.y.variance, r.radar2.y.variance));
}

TEST_CASE("noiseless radars give exactly zero errors") {
    auto cfg = radar_only();
    cfg.radar_noise_scale = 0.0;
    const auto r = run_scenario(cfg);
    for (const auto& s : r.samples) {
        CHECK(s.radar1.ex == 0.0);
        CHECK(s.radar1.ey == 0.0);
        CHECK(s.radar2.ex == 0.0);
        CHECK(s.radar2.ey == 0.0);
    }
}

TEST_CASE("same seed gives byte-identical CSV") {
    const auto cfg = short_snn();
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    CHECK(errors_csv(a) == errors_csv(b));
    auto other = cfg;
    other.seed = 2;
    CHECK(errors_csv(run_scenario(other)) != errors_csv(a));
}

TEST_CASE("sweep of one seed equals the single run and jobs do not matter") {
    auto cfg = short_snn();
    cfg.seed = 10;
    const auto single = summarize_seed(run_scenario(cfg));
    const auto one = sweep(cfg, 1, 1);
    REQUIRE(one.seeds.size() == 1);
    CHECK(one.seeds[0].fused.x.variance == single.fused.x.variance);
    CHECK(one.mean_fused.y.mean == single.fused.y.mean);

    const auto s1 = sweep(cfg, 3, 1);
    const auto s3 = sweep(cfg, 3, 3);
    REQUIRE(s3.seeds.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(s1.seeds[k].seed == 10 + k);
        CHECK(s3.seeds[k].seed == 10 + k);
        CHECK(s1.seeds[k].fused.x.variance == s3.seeds[k].fused.x.variance);
        CHECK(s1.seeds[k].fused.y.mean == s3.seeds[k].fused.y.mean);
    }
    CHECK_THROWS_AS((void)sweep(cfg, 0, 1), ConfigError);
}

TEST_CASE("sweep aggregates converge as 1/sqrt(n)") {
    const auto cfg = radar_only();
    // spread of the mean per-seed variance between independent sweep blocks
    auto block_sd = [&](std::size_t n, std::size_t blocks) {
        std::vector<double> means;
        for (std::size_t b = 0; b < blocks; ++b) {
            auto c = cfg;
            c.seed = 1 + 1000 * (b + 1) + n;
            means.push_back(sweep(c, n, 1).mean_radar1.x.variance);
        }
        const auto st = compute_stats(means);
        return std::sqrt(st.variance);
    };
    const double small = block_sd(4, 12);
    const double large = block_sd(16, 12);
    // 4x the seeds halves the spread; accept a factor of 2 either side
    CHECK(small / large > 1.0);
    CHECK(small / large < 4.0);
}

TEST_CASE("fraction bookkeeping in aggregate") {
    SeedSummary a;
    a.radar1.x.variance = 2.0;
    a.radar2.x.variance = 3.0;
    a.fused.x.variance = 1.0;
    a.radar1.y.variance = 2.0;
    a.radar2.y.variance = 3.0;
    a.fused.y.variance = 2.5;
    SeedSummary b = a;
    b.fused.x.variance = 4.0;
    const auto rep = aggregate({a, b});
    CHECK(rep.frac_below_min_x == 0.5);
    CHECK(rep.frac_below_max_x == 0.5);
    CHECK(rep.frac_below_min_y == 0.0);
    CHECK(rep.frac_below_max_y == 1.0);
    CHECK(rep.frac_below_r2_y == 1.0);
}

TEST_CASE("emit_outputs") {
    const auto r = run_scenario(radar_only());
    const auto dir = scratch("emit");
    emit_outputs(r, dir);
    for (const char* f : {"errors.csv", "histograms.csv", "stats.csv", "errors_x.svg", "errors_y.svg",
                          "hist_x.svg", "hist_y.svg", "stats_bar.svg"})
        CHECK(fs::exists(dir / f));

    const auto csv = slurp(dir / "errors.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 602);
    CHECK(csv.rfind(kErrorsHeader, 0) == 0);

    std::vector<std::string> first;
    for (const auto& e : fs::directory_iterator(dir)) first.push_back(slurp(e.path()));
    emit_outputs(r, dir);
    std::vector<std::string> second;
    for (const auto& e : fs::directory_iterator(dir)) second.push_back(slurp(e.path()));
    CHECK(first == second);

    const auto hist = slurp(dir / "histograms.csv");
    CHECK(hist.find("radar1,x,") != std::string::npos);
    CHECK(hist.find("snn,y,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("empty report is an error and writes nothing") {
    const auto dir = scratch("empty");
    RunReport empty;
    CHECK_THROWS_AS(emit_outputs(empty, dir), DomainError);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("unwritable output directory is an I/O error naming the path") {
    const auto r = run_scenario(radar_only());
    const auto blocker = scratch("blocker");
    { std::ofstream(blocker) << "x"; }
    try {
        emit_outputs(r, blocker / "sub");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
    }
    fs::remove(blocker);
}

TEST_CASE("errors.csv round trip recovers the statistics exactly") {
    const auto r = run_scenario(radar_only());
    const auto dir = scratch("roundtrip");
    emit_outputs(r, dir);
    const auto back = read_errors_csv(dir / "errors.csv");
    CHECK(back.samples.size() == r.samples.size());
    CHECK(back.radar1.x.variance == r.radar1.x.variance);
    CHECK(back.radar2.y.mean == r.radar2.y.mean);
    CHECK(back.oracle.y.rms == r.oracle.y.rms);
    fs::remove_all(dir);
    CHECK_THROWS_AS((void)read_errors_csv(dir / "errors.csv"), IoError);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, -1.2345678901234567e-7, 6.02e23, 0.0}) {
        const auto s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("config parsing") {
    const auto def = parse_config("");
    CHECK(def.radar1.tx_gain == 100.0);
    CHECK(def.network.n_out == 20);

    const auto c = parse_config(R"(
seed: 42
radar1:
  tx_gain_db: 20
  rx_gain: 50
  loss_db: -170
radar2:
  position: [150, 5]
aircraft: {x: -500, vy: -2}
duration: 30
network:
  n_out: 10
  decoder: affine
  stdp: {convention: anticausal, w_max: 8}
  codec: {symmetric_zero: true}
fusion: passthrough_radar1
)");
    CHECK(c.seed == 42);
    CHECK(c.radar1.tx_gain == doctest::Approx(100.0));
    CHECK(c.radar1.rx_gain == 50.0);
    CHECK(c.radar1.loss == doctest::Approx(1e-17));
    CHECK(c.radar2.position.x == 150.0);
    CHECK(c.glide.initial.x == -500.0);
    CHECK(c.glide.initial.y == 100.0);
    CHECK(c.glide.initial.vy == -2.0);
    CHECK(c.glide.duration == 30.0);
    CHECK(c.network.n_out == 10);
    CHECK(c.network.decoder == Decoder::Affine);
    CHECK(c.network.stdp.convention == StdpConvention::AntiCausal);
    CHECK(c.network.stdp.w_max == 8.0);
    CHECK(c.network.codec.symmetric_zero);
    CHECK(c.fusion == FusionMode::PassthroughRadar1);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS((void)parse_config("sed: 1"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("network: {n_outt: 3}"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("radar1: {tx_gain: 100, tx_gain_db: 20}"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("duration: soon"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("network: {decoder: magic}"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("radar2: {position: [0, 0]}"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("radar1: [1, 2"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("- 1\n- 2\n"), ConfigError);
    CHECK_THROWS_AS((void)load_config("/nonexistent/glide.yaml"), IoError);
}

TEST_CASE("dump_config round trip") {
    auto c = parse_config("seed: 9\nradar1: {loss_db: -170}\nnetwork: {scale_sigmas: 4.5}\n");
    const auto again = parse_config(dump_config(c));
    CHECK(dump_config(again) == dump_config(c));
    CHECK(again.radar1.loss == c.radar1.loss);
    CHECK(again.network.scale_sigmas == 4.5);
    CHECK(again.seed == 9);
    CHECK(dump_config(c).find("convention: causal") != std::string::npos);
}
