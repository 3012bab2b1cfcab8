#include "glidesnn/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "glidesnn/error.hpp"

namespace glidesnn {
namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void require_map(const YAML::Node& n, const std::string& path) {
    if (!n.IsMap()) throw ConfigError("config: '" + (path.empty() ? "<root>" : path) + "' must be a mapping");
}

void reject_unknown(const YAML::Node& n, const std::string& path,
                    std::initializer_list<std::string_view> known) {
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto k : known) ok = ok || k == key;
        if (!ok) throw ConfigError("config: unknown key '" + join(path, key) + "'");
    }
}

template <typename T>
T convert(const YAML::Node& n, const std::string& path) {
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config: bad value for '" + path + "'");
    }
}

void read(const YAML::Node& m, const std::string& path, const char* key, double& out) {
    if (auto n = m[key]) {
        out = convert<double>(n, join(path, key));
        if (!std::isfinite(out)) throw ConfigError("config: '" + join(path, key) + "' must be finite");
    }
}

void read(const YAML::Node& m, const std::string& path, const char* key, bool& out) {
    if (auto n = m[key]) out = convert<bool>(n, join(path, key));
}

void read(const YAML::Node& m, const std::string& path, const char* key, std::size_t& out) {
    if (auto n = m[key]) {
        const auto v = convert<long long>(n, join(path, key));
        if (v < 0) throw ConfigError("config: '" + join(path, key) + "' must be >= 0");
        out = static_cast<std::size_t>(v);
    }
}

// `key` linear or `key_db` in decibels, not both.
void read_gain(const YAML::Node& m, const std::string& path, const std::string& key, double& out) {
    const auto lin = m[key];
    const auto db = m[key + "_db"];
    if (lin && db) throw ConfigError("config: both '" + join(path, key) + "' and '" + join(path, key + "_db") + "' given");
    if (lin) read(m, path, key.c_str(), out);
    if (db) {
        double v = 0.0;
        read(m, path, (key + "_db").c_str(), v);
        out = std::pow(10.0, v / 10.0);
    }
}

Vec2 read_vec2(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence() || n.size() != 2) throw ConfigError("config: '" + path + "' must be [x, y]");
    return {convert<double>(n[0], path), convert<double>(n[1], path)};
}

template <typename E>
E read_enum(const YAML::Node& m, const std::string& path, const char* key, E current,
            const auto& names) {
    auto n = m[key];
    if (!n) return current;
    const auto s = convert<std::string>(n, join(path, key));
    for (const auto& [name, value] : names)
        if (name == s) return value;
    throw ConfigError("config: bad value '" + s + "' for '" + join(path, key) + "'");
}

constexpr std::pair<std::string_view, StdpConvention> kConventions[] = {
    {"causal", StdpConvention::Causal}, {"anticausal", StdpConvention::AntiCausal}};
constexpr std::pair<std::string_view, Normalization> kNormalizations[] = {
    {"per_sample", Normalization::PerSample}, {"fixed", Normalization::Fixed}};
constexpr std::pair<std::string_view, Decoder> kDecoders[] = {
    {"calibrated", Decoder::Calibrated}, {"affine", Decoder::Affine}};
constexpr std::pair<std::string_view, FusionMode> kFusions[] = {
    {"snn", FusionMode::Snn}, {"passthrough_radar1", FusionMode::PassthroughRadar1}};

template <typename E>
std::string_view name_of(E v, const auto& names) {
    for (const auto& [name, value] : names)
        if (value == v) return name;
    return "?";
}

void read_radar(const YAML::Node& n, const std::string& path, RadarParams& r) {
    require_map(n, path);
    reject_unknown(n, path, {"transmit_power", "tx_gain", "tx_gain_db", "rx_gain", "rx_gain_db",
                             "wavelength", "rcs", "bandwidth", "loss", "loss_db", "aperture",
                             "noise_rms", "position"});
    read(n, path, "transmit_power", r.transmit_power);
    read_gain(n, path, "tx_gain", r.tx_gain);
    read_gain(n, path, "rx_gain", r.rx_gain);
    read(n, path, "wavelength", r.wavelength);
    read(n, path, "rcs", r.rcs);
    read(n, path, "bandwidth", r.bandwidth);
    read_gain(n, path, "loss", r.loss);
    read(n, path, "aperture", r.aperture);
    read(n, path, "noise_rms", r.noise_rms);
    if (auto p = n["position"]) r.position = read_vec2(p, join(path, "position"));
}

void read_network(const YAML::Node& n, const std::string& path, NetworkConfig& c) {
    require_map(n, path);
    reject_unknown(n, path, {"n_in_per_channel", "n_out", "tau_syn", "learning_enabled",
                             "reset_each_window", "weight_normalization", "deferred_plasticity",
                             "per_channel_normalization", "normalization", "scale_sigmas",
                             "reliability_gain", "decoder", "init_low", "init_high",
                             "calibration_levels", "calibration_warmup", "calibration_windows",
                             "recalibration_interval", "neuron", "stdp", "codec"});
    read(n, path, "n_in_per_channel", c.n_in_per_channel);
    read(n, path, "n_out", c.n_out);
    read(n, path, "tau_syn", c.tau_syn);
    read(n, path, "learning_enabled", c.learning_enabled);
    read(n, path, "reset_each_window", c.reset_each_window);
    read(n, path, "weight_normalization", c.weight_normalization);
    read(n, path, "deferred_plasticity", c.deferred_plasticity);
    read(n, path, "per_channel_normalization", c.per_channel_normalization);
    c.normalization = read_enum(n, path, "normalization", c.normalization, kNormalizations);
    read(n, path, "scale_sigmas", c.scale_sigmas);
    read(n, path, "reliability_gain", c.reliability_gain);
    c.decoder = read_enum(n, path, "decoder", c.decoder, kDecoders);
    read(n, path, "init_low", c.init_low);
    read(n, path, "init_high", c.init_high);
    read(n, path, "calibration_levels", c.calibration_levels);
    read(n, path, "calibration_warmup", c.calibration_warmup);
    read(n, path, "calibration_windows", c.calibration_windows);
    read(n, path, "recalibration_interval", c.recalibration_interval);

    if (auto m = n["neuron"]) {
        const auto p = join(path, "neuron");
        require_map(m, p);
        reject_unknown(m, p, {"a", "b", "c", "d", "v_thresh", "max_dt"});
        read(m, p, "a", c.neuron.a);
        read(m, p, "b", c.neuron.b);
        read(m, p, "c", c.neuron.c);
        read(m, p, "d", c.neuron.d);
        read(m, p, "v_thresh", c.neuron.v_thresh);
        read(m, p, "max_dt", c.neuron.max_dt);
    }
    if (auto m = n["stdp"]) {
        const auto p = join(path, "stdp");
        require_map(m, p);
        reject_unknown(m, p, {"a_plus", "a_minus", "tau_plus", "tau_minus", "w_min", "w_max", "convention"});
        read(m, p, "a_plus", c.stdp.a_plus);
        read(m, p, "a_minus", c.stdp.a_minus);
        read(m, p, "tau_plus", c.stdp.tau_plus);
        read(m, p, "tau_minus", c.stdp.tau_minus);
        read(m, p, "w_min", c.stdp.w_min);
        read(m, p, "w_max", c.stdp.w_max);
        c.stdp.convention = read_enum(m, p, "convention", c.stdp.convention, kConventions);
    }
    if (auto m = n["codec"]) {
        const auto p = join(path, "codec");
        require_map(m, p);
        reject_unknown(m, p, {"e_max", "r_max", "window", "dt", "r_out_max", "symmetric_zero"});
        read(m, p, "e_max", c.codec.e_max);
        read(m, p, "r_max", c.codec.r_max);
        read(m, p, "window", c.codec.window);
        read(m, p, "dt", c.codec.dt);
        read(m, p, "r_out_max", c.codec.r_out_max);
        read(m, p, "symmetric_zero", c.codec.symmetric_zero);
    }
}

std::string num(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

ScenarioConfig parse_config(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ScenarioConfig cfg;
    if (root.IsNull()) {
        cfg.validate();
        return cfg;
    }
    require_map(root, "");
    reject_unknown(root, "", {"seed", "output_dir", "radar1", "radar2", "aircraft", "sigma_w",
                              "sample_period", "duration", "network", "radar_noise_scale", "fusion"});
    read(root, "", "seed", cfg.seed);
    if (auto n = root["output_dir"]) cfg.output_dir = convert<std::string>(n, "output_dir");
    if (auto n = root["radar1"]) read_radar(n, "radar1", cfg.radar1);
    if (auto n = root["radar2"]) read_radar(n, "radar2", cfg.radar2);
    if (auto n = root["aircraft"]) {
        require_map(n, "aircraft");
        reject_unknown(n, "aircraft", {"x", "y", "vx", "vy"});
        read(n, "aircraft", "x", cfg.glide.initial.x);
        read(n, "aircraft", "y", cfg.glide.initial.y);
        read(n, "aircraft", "vx", cfg.glide.initial.vx);
        read(n, "aircraft", "vy", cfg.glide.initial.vy);
    }
    read(root, "", "sigma_w", cfg.glide.sigma_w);
    read(root, "", "sample_period", cfg.glide.sample_period);
    read(root, "", "duration", cfg.glide.duration);
    if (auto n = root["network"]) read_network(n, "network", cfg.network);
    read(root, "", "radar_noise_scale", cfg.radar_noise_scale);
    cfg.fusion = read_enum(root, "", "fusion", cfg.fusion, kFusions);
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read config " + path.string());
    return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& cfg) {
    YAML::Emitter out;
    auto kv = [&](const char* k, const auto& v) { out << YAML::Key << k << YAML::Value << v; };
    auto kd = [&](const char* k, double v) { kv(k, num(v)); };
    auto radar = [&](const char* k, const RadarParams& r) {
        out << YAML::Key << k << YAML::Value << YAML::BeginMap;
        kd("transmit_power", r.transmit_power);
        kd("tx_gain", r.tx_gain);
        kd("rx_gain", r.rx_gain);
        kd("wavelength", r.wavelength);
        kd("rcs", r.rcs);
        kd("bandwidth", r.bandwidth);
        kd("loss", r.loss);
        kd("aperture", r.aperture);
        kd("noise_rms", r.noise_rms);
        out << YAML::Key << "position" << YAML::Value << YAML::Flow << YAML::BeginSeq
            << num(r.position.x) << num(r.position.y) << YAML::EndSeq;
        out << YAML::EndMap;
    };
    const auto& n = cfg.network;

    out << YAML::BeginMap;
    kv("seed", cfg.seed);
    kv("output_dir", cfg.output_dir.string());
    radar("radar1", cfg.radar1);
    radar("radar2", cfg.radar2);
    out << YAML::Key << "aircraft" << YAML::Value << YAML::BeginMap;
    kd("x", cfg.glide.initial.x);
    kd("y", cfg.glide.initial.y);
    kd("vx", cfg.glide.initial.vx);
    kd("vy", cfg.glide.initial.vy);
    out << YAML::EndMap;
    kd("sigma_w", cfg.glide.sigma_w);
    kd("sample_period", cfg.glide.sample_period);
    kd("duration", cfg.glide.duration);

    out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
    kv("n_in_per_channel", n.n_in_per_channel);
    kv("n_out", n.n_out);
    kd("tau_syn", n.tau_syn);
    kv("learning_enabled", n.learning_enabled);
    kv("reset_each_window", n.reset_each_window);
    kv("weight_normalization", n.weight_normalization);
    kv("deferred_plasticity", n.deferred_plasticity);
    kv("per_channel_normalization", n.per_channel_normalization);
    kv("normalization", std::string(name_of(n.normalization, kNormalizations)));
    kd("scale_sigmas", n.scale_sigmas);
    kv("reliability_gain", n.reliability_gain);
    kv("decoder", std::string(name_of(n.decoder, kDecoders)));
    kd("init_low", n.init_low);
    kd("init_high", n.init_high);
    kv("calibration_levels", n.calibration_levels);
    kv("calibration_warmup", n.calibration_warmup);
    kv("calibration_windows", n.calibration_windows);
    kv("recalibration_interval", n.recalibration_interval);

    out << YAML::Key << "neuron" << YAML::Value << YAML::BeginMap;
    kd("a", n.neuron.a);
    kd("b", n.neuron.b);
    kd("c", n.neuron.c);
    kd("d", n.neuron.d);
    kd("v_thresh", n.neuron.v_thresh);
    kd("max_dt", n.neuron.max_dt);
    out << YAML::EndMap;

    out << YAML::Key << "stdp" << YAML::Value << YAML::BeginMap;
    kd("a_plus", n.stdp.a_plus);
    kd("a_minus", n.stdp.a_minus);
    kd("tau_plus", n.stdp.tau_plus);
    kd("tau_minus", n.stdp.tau_minus);
    kd("w_min", n.stdp.w_min);
    kd("w_max", n.stdp.w_max);
    kv("convention", std::string(name_of(n.stdp.convention, kConventions)));
    out << YAML::EndMap;

    out << YAML::Key << "codec" << YAML::Value << YAML::BeginMap;
    kd("e_max", n.codec.e_max);
    kd("r_max", n.codec.r_max);
    kd("window", n.codec.window);
    kd("dt", n.codec.dt);
    kd("r_out_max", n.codec.r_out_max);
    kv("symmetric_zero", n.codec.symmetric_zero);
    out << YAML::EndMap;
    out << YAML::EndMap;

    kd("radar_noise_scale", cfg.radar_noise_scale);
    kv("fusion", std::string(name_of(cfg.fusion, kFusions)));
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace glidesnn
