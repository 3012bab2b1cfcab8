#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include "glidesnn/config.hpp"
#include "glidesnn/error.hpp"
#include "glidesnn/output.hpp"
#include "glidesnn/scenario.hpp"

#ifndef GLIDESNN_VERSION
#define GLIDESNN_VERSION "0.0.0"
#endif

using namespace glidesnn;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

void print_stats(std::FILE* f, const char* name, const SourceStats& s) {
    std::fprintf(f, "%-7s x: mean % .4e var %.4e rms %.4e | y: mean % .4e var %.4e rms %.4e\n", name,
                 s.x.mean, s.x.variance, s.x.rms, s.y.mean, s.y.variance, s.y.rms);
}

void print_report(const RunReport& r) {
    std::printf("samples %zu\n", r.samples.size());
    print_stats(stdout, "radar1", r.radar1);
    print_stats(stdout, "radar2", r.radar2);
    print_stats(stdout, "snn", r.fused);
    print_stats(stdout, "oracle", r.oracle);
}

void write_text(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string());
    out << body;
    out.close();
    if (!out) throw IoError("write failed: " + p.string());
}

std::string seed_dir(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::string sweep_csv(const SweepReport& rep) {
    std::string out =
        "seed,r1_var_x,r2_var_x,snn_var_x,oracle_var_x,r1_var_y,r2_var_y,snn_var_y,oracle_var_y,"
        "snn_to_oracle_x,snn_to_oracle_y\n";
    for (const auto& s : rep.seeds) {
        const double v[] = {s.radar1.x.variance, s.radar2.x.variance, s.fused.x.variance,
                            s.oracle.x.variance, s.radar1.y.variance, s.radar2.y.variance,
                            s.fused.y.variance,  s.oracle.y.variance, s.fused_to_oracle_x(),
                            s.fused_to_oracle_y()};
        out += std::to_string(s.seed);
        for (double d : v) out += ',' + format_double(d);
        out += '\n';
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-radar glide-path error fusion with a spiking network"};
    app.set_version_flag("--version", GLIDESNN_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "simulate one seed and write CSV/SVG outputs");
    run->add_option("--config", config_path, "YAML scenario file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "master seed (overrides the config)");
    auto* out_opt = run->add_option("--out", out_dir, "output directory (overrides the config)");

    std::size_t n_seeds = 1;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sw = app.add_subcommand("sweep", "run consecutive seeds, one output directory per seed");
    sw->add_option("--config", config_path, "YAML scenario file")->required();
    sw->add_option("--seeds", n_seeds, "number of seeds")->required()->check(CLI::PositiveNumber);
    sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    auto* sw_out = sw->add_option("--out", out_dir, "output directory (overrides the config)");

    std::string in_path;
    auto* st = app.add_subcommand("stats", "recompute statistics from an errors.csv");
    st->add_option("--in", in_path, "errors.csv of a previous run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*st) {
            print_report(read_errors_csv(in_path));
            return kOk;
        }

        ScenarioConfig cfg = load_config(config_path);
        if (*run) {
            if (*seed_opt) cfg.seed = seed;
            if (*out_opt) cfg.output_dir = out_dir;
            const auto report = run_scenario(cfg);
            emit_outputs(report, cfg.output_dir);
            write_text(cfg.output_dir / "config.yaml", dump_config(cfg));
            print_report(report);
            std::printf("outputs in %s\n", cfg.output_dir.string().c_str());
            return kOk;
        }

        if (*sw_out) cfg.output_dir = out_dir;
        const fs::path root = cfg.output_dir;
        const auto rep = sweep(cfg, n_seeds, jobs, [&](const RunReport& r) {
            emit_outputs(r, root / seed_dir(r.seed));
        });
        write_text(root / "sweep.csv", sweep_csv(rep));
        write_text(root / "config.yaml", dump_config(cfg));
        for (const auto& s : rep.seeds) {
            std::printf("seed %llu  snn/oracle variance x %.3f y %.3f\n",
                        static_cast<unsigned long long>(s.seed), s.fused_to_oracle_x(),
                        s.fused_to_oracle_y());
        }
        std::printf("fraction of seeds with snn variance below min(radar1, radar2): x %.2f y %.2f\n",
                    rep.frac_below_min_x, rep.frac_below_min_y);
        std::printf("fraction of seeds with snn variance below max(radar1, radar2): x %.2f y %.2f\n",
                    rep.frac_below_max_x, rep.frac_below_max_y);
        std::printf("outputs in %s\n", root.string().c_str());
        return kOk;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kNumeric;
    }
}
