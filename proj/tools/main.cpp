// hmdchan - channel simulation and performance metrics for multi-array mmWave HMDs
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hmdchan/channel_io.hpp"
#include "hmdchan/report.hpp"
#include "hmdchan/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hmdchan;

namespace {

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical degeneracy.
constexpr int exit_config = 2;
constexpr int exit_data = 3;
constexpr int exit_numeric = 4;

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

json load_config(const std::string &path)
{
    if (path.empty())
        return json::object();
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try
    {
        is >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError("malformed config file " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config root must be a JSON object: " + path);
    return j;
}

template <typename T>
T get_or(const json &j, const std::string &key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

Eigen::Vector3d vec3_from(const json &j, const std::string &key,
                          const Eigen::Vector3d &fallback)
{
    if (!j.contains(key))
        return fallback;
    auto v = get_or<std::vector<double>>(j, key, {});
    if (v.size() != 3)
        throw ConfigError("config key '" + key + "' must have 3 entries");
    return Eigen::Vector3d(v[0], v[1], v[2]);
}

SimSetup setup_from_config(const json &cfg)
{
    SimSetup setup;
    Scenario &sc = setup.scenario;

    if (cfg.contains("room"))
    {
        const json &room = cfg.at("room");
        sc.room_width = get_or(room, "width", sc.room_width);
        sc.room_length = get_or(room, "length", sc.room_length);
        sc.room_height = get_or(room, "height", sc.room_height);
    }
    sc.ap_position = vec3_from(cfg, "ap_position", sc.ap_position);
    sc.hmd_position = vec3_from(cfg, "hmd_position", sc.hmd_position);
    sc.ap_boresight_azimuth = get_or(cfg, "ap_boresight_azimuth", sc.ap_boresight_azimuth);
    sc.carrier_frequency = get_or(cfg, "carrier_frequency", sc.carrier_frequency);
    sc.bandwidth = get_or(cfg, "bandwidth", sc.bandwidth);
    sc.cross_pol_leakage_db = get_or(cfg, "cross_pol_leakage_db", sc.cross_pol_leakage_db);
    if (cfg.contains("surface_reflectivity"))
    {
        auto refl = get_or<std::vector<double>>(cfg, "surface_reflectivity", {});
        if (refl.size() != 6)
            throw ConfigError("surface_reflectivity must have 6 entries");
        std::copy(refl.begin(), refl.end(), sc.surface_reflectivity.begin());
    }

    setup.num_tones = get_or<std::size_t>(cfg, "num_tones", setup.num_tones);
    sc.num_tones = setup.num_tones;
    setup.max_reflection_order =
        get_or<std::size_t>(cfg, "reflection_order", setup.max_reflection_order);
    setup.dual_polarized = get_or(cfg, "dual_polarized", setup.dual_polarized);
    setup.initial_yaw = get_or(cfg, "initial_yaw", setup.initial_yaw);

    if (cfg.contains("hmd"))
    {
        const json &hmd = cfg.at("hmd");
        setup.hmd_rows = get_or<std::size_t>(hmd, "rows", setup.hmd_rows);
        setup.hmd_cols = get_or<std::size_t>(hmd, "cols", setup.hmd_cols);
        setup.num_hmd_arrays = get_or<std::size_t>(hmd, "arrays", setup.num_hmd_arrays);
        setup.ring_radius = get_or(hmd, "ring_radius", setup.ring_radius);
    }
    if (cfg.contains("ap"))
    {
        const json &ap = cfg.at("ap");
        setup.ap_rows = get_or<std::size_t>(ap, "rows", setup.ap_rows);
        setup.ap_cols = get_or<std::size_t>(ap, "cols", setup.ap_cols);
    }
    if (cfg.contains("mobility"))
    {
        const json &mob = cfg.at("mobility");
        auto seg = get_or<std::vector<double>>(mob, "segment_durations",
                                               {setup.mobility.segment_durations[0],
                                                setup.mobility.segment_durations[1],
                                                setup.mobility.segment_durations[2]});
        if (seg.size() != 3)
            throw ConfigError("mobility.segment_durations must have 3 entries");
        std::copy(seg.begin(), seg.end(), setup.mobility.segment_durations.begin());
        setup.mobility.snapshot_rate =
            get_or(mob, "snapshot_rate", setup.mobility.snapshot_rate);
        setup.mobility.pivot_offset =
            get_or(mob, "pivot_offset", setup.mobility.pivot_offset);
        setup.mobility.yaw_sign = get_or(mob, "yaw_sign", setup.mobility.yaw_sign);
    }
    if (cfg.contains("olos"))
    {
        const json &olos = cfg.at("olos");
        setup.olos_blocker_diameter =
            get_or(olos, "diameter", setup.olos_blocker_diameter);
        if (olos.contains("center"))
        {
            auto c = get_or<std::vector<double>>(olos, "center", {});
            if (c.size() != 2)
                throw ConfigError("olos.center must have 2 entries");
            setup.olos_blocker_center = Eigen::Vector2d(c[0], c[1]);
        }
    }

    if (setup.num_tones < 2)
        throw ConfigError("num_tones must be at least 2");
    if (setup.hmd_rows == 0 || setup.hmd_cols == 0 || setup.num_hmd_arrays == 0)
        throw ConfigError("hmd array dimensions must be positive");
    if (setup.ap_rows == 0 || setup.ap_cols == 0)
        throw ConfigError("ap array dimensions must be positive");
    if (sc.carrier_frequency <= 0.0 || sc.bandwidth <= 0.0)
        throw ConfigError("carrier_frequency and bandwidth must be positive");
    if (setup.mobility.snapshot_rate <= 0.0)
        throw ConfigError("mobility.snapshot_rate must be positive");
    return setup;
}

MetricOptions options_from_config(const json &cfg)
{
    MetricOptions options;
    if (!cfg.contains("metrics"))
        return options;
    const json &m = cfg.at("metrics");
    options.snr_db = get_or(m, "snr_db", options.snr_db);
    options.stream_limits =
        get_or<std::vector<std::size_t>>(m, "stream_limits", options.stream_limits);
    options.per_tone = get_or(m, "per_tone", options.per_tone);
    options.percentile = get_or(m, "percentile", options.percentile);
    options.config_qs =
        get_or<std::vector<std::size_t>>(m, "config_qs", options.config_qs);
    options.autocorr_lags =
        get_or<std::vector<std::size_t>>(m, "autocorr_lags", options.autocorr_lags);

    std::string corr = get_or<std::string>(m, "correlation", "second_moment");
    if (corr == "second_moment")
        options.correlation_mode = CorrelationMode::second_moment;
    else if (corr == "pearson")
        options.correlation_mode = CorrelationMode::pearson;
    else
        throw ConfigError("metrics.correlation must be second_moment or pearson");

    if (options.stream_limits.empty())
        throw ConfigError("metrics.stream_limits must not be empty");
    if (options.config_qs.empty())
        throw ConfigError("metrics.config_qs must not be empty");
    return options;
}

void apply_mode(MetricOptions &options, const std::string &mode)
{
    if (mode.empty())
        return;
    if (mode == "literal")
    {
        options.std_mode = EstimatorMode::literal;
        options.autocorr_mode = EstimatorMode::literal;
    }
    else if (mode == "conventional")
    {
        options.std_mode = EstimatorMode::conventional;
        options.autocorr_mode = EstimatorMode::conventional;
    }
    else
        throw ConfigError("--mode must be literal or conventional");
}

Provenance make_provenance(const json &cfg, std::uint64_t seed)
{
    Provenance prov;
    prov.seed = seed;
    prov.config_digest = fnv1a_hex(cfg.dump() + "#" + std::to_string(seed));
    return prov;
}

std::string container_name(std::uint32_t position, bool obstructed,
                           std::uint32_t snapshot)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "pos%03u_%s_snap%03u.hmdc", position,
                  obstructed ? "olos" : "los", snapshot);
    return buf;
}

// ------------------------------------------------------------------
// synth: simulate and write one container per (scenario, snapshot)
// ------------------------------------------------------------------
int run_synth(const json &cfg, const std::string &out_dir, std::uint64_t seed)
{
    SimSetup setup = setup_from_config(cfg);
    bool with_olos = true;
    if (cfg.contains("olos"))
        with_olos = get_or(cfg.at("olos"), "enabled", true);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory: " + out_dir);

    const SounderModel sounder = setup.sounder();
    const std::uint32_t position = get_or<std::uint32_t>(cfg, "position", 0);

    ContainerMeta meta;
    meta.position = position;
    meta.first_tone = sounder.tone_frequencies.front();
    meta.tone_spacing = sounder.tone_frequencies[1] - sounder.tone_frequencies[0];

    for (int scenario = 0; scenario < (with_olos ? 2 : 1); scenario++)
    {
        const bool obstructed = scenario == 1;
        ChannelTensor tensor = simulate_channel(setup, obstructed);
        meta.scenario = std::uint32_t(scenario);
        meta.port_map.resize(tensor.M);
        for (std::size_t m = 0; m < tensor.M; m++)
            meta.port_map[m] = std::uint32_t(m);

        const std::size_t mpc_count =
            first_snapshot_mpcs(setup, obstructed).size();
        for (std::size_t i = 0; i < tensor.I; i++)
        {
            meta.snapshot = std::uint32_t(i);
            std::string path =
                (fs::path(out_dir) / container_name(position, obstructed,
                                                    meta.snapshot)).string();
            write_container(path, meta, tensor.slice(i));
            std::printf("position %u scenario %s snapshot %zu mpcs %zu\n", position,
                        obstructed ? "olos" : "los", i, mpc_count);
        }
    }
    (void)seed;
    return 0;
}

// ------------------------------------------------------------------
// metrics: evaluate containers from a synth run
// ------------------------------------------------------------------
ChannelTensor tensor_from_containers(const std::vector<Container> &slices)
{
    if (slices.empty())
        throw std::runtime_error("no containers for scenario");
    std::map<std::uint32_t, const Container *> by_snapshot;
    for (const auto &c : slices)
        by_snapshot[c.meta.snapshot] = &c;

    const CtfSlice &first = slices.front().slice;
    ChannelTensor tensor(first.M, first.N, by_snapshot.size(), first.K);
    std::size_t i = 0;
    for (const auto &[snap, c] : by_snapshot)
    {
        if (c->slice.M != first.M || c->slice.N != first.N || c->slice.K != first.K)
            throw std::runtime_error("inconsistent container dimensions");
        tensor.set_slice(i++, c->slice);
    }
    return tensor;
}

int run_metrics(const json &cfg, const std::string &in_dir,
                const std::string &out_dir, const MetricOptions &options,
                std::uint64_t seed)
{
    SimSetup setup = setup_from_config(cfg);

    std::vector<Container> los, olos;
    if (!fs::is_directory(in_dir))
        throw std::runtime_error("container directory not found: " + in_dir);
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(in_dir))
        if (entry.path().extension() == ".hmdc")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto &path : files)
    {
        Container c = read_container(path.string());
        (c.meta.scenario == 0 ? los : olos).push_back(std::move(c));
    }
    if (los.empty())
        throw std::runtime_error("no line-of-sight containers in " + in_dir);

    ChannelTensor los_tensor = tensor_from_containers(los);
    std::optional<ChannelTensor> olos_tensor;
    if (!olos.empty())
        olos_tensor = tensor_from_containers(olos);
    else
        std::fprintf(stderr,
                     "warning: no obstructed containers, blockage columns NaN\n");

    ScenarioReport report = evaluate_scenario(
        setup, los_tensor, olos_tensor ? &*olos_tensor : nullptr, options);
    report.position = los.front().meta.position;

    ReportBundle bundle = render_report({report}, {}, {}, nullptr, options,
                                        make_provenance(cfg, seed));
    write_bundle(bundle, out_dir);
    return 0;
}

// ------------------------------------------------------------------
// capacity: waterfilling table for one container
// ------------------------------------------------------------------
int run_capacity(const std::string &in_file, const std::string &out_file,
                 double snr_db, const std::vector<std::size_t> &limits,
                 bool per_tone)
{
    Container c = read_container(in_file);
    ChannelTensor tensor(c.slice.M, c.slice.N, 1, c.slice.K);
    tensor.set_slice(0, c.slice);

    CapacityConfig cap;
    cap.snr = std::pow(10.0, snr_db / 10.0);

    std::string csv = "stream_limit,capacity_bits_per_hz\n";
    for (std::size_t limit : limits)
    {
        cap.max_streams =
            (limit == 0) ? std::numeric_limits<std::size_t>::max() : limit;
        double capacity;
        if (per_tone)
        {
            double acc = 0.0;
            for (std::size_t k = 0; k < tensor.K; k++)
                acc += waterfilling_capacity(tone_eigenmodes(tensor, 0, k), cap,
                                             tensor.M)
                           .capacity;
            capacity = acc / double(tensor.K);
        }
        else
        {
            capacity =
                waterfilling_capacity(mean_eigenmodes(tensor, 0), cap, tensor.M)
                    .capacity;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", limit, capacity);
        csv += buf;
    }

    if (out_file.empty())
        std::fputs(csv.c_str(), stdout);
    else
    {
        std::ofstream os(out_file, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot write " + out_file);
        os << csv;
    }
    return 0;
}

// ------------------------------------------------------------------
// gtd: knife-edge attenuation table
// ------------------------------------------------------------------
int run_gtd(double d_tx, double d_rx, double width, double frequency,
            std::size_t sweep_points, double sweep_to,
            const std::string &out_file)
{
    std::string csv = "d_tx_m,d_rx_m,width_m,frequency_hz,attenuation_db\n";
    auto append = [&](double a, double b) {
        double att = gtd_blockage_attenuation(a, b, width, frequency);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g\n", a, b, width,
                      frequency, att);
        csv += buf;
    };

    if (sweep_points < 2)
        append(d_tx, d_rx);
    else
    {
        // centered-blocker sweep from the given link length up to sweep_to
        double from = d_tx + d_rx;
        for (std::size_t p = 0; p < sweep_points; p++)
        {
            double total =
                from + (sweep_to - from) * double(p) / double(sweep_points - 1);
            append(total / 2.0, total / 2.0);
        }
    }

    if (out_file.empty())
        std::fputs(csv.c_str(), stdout);
    else
    {
        std::ofstream os(out_file, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot write " + out_file);
        os << csv;
    }
    return 0;
}

// ------------------------------------------------------------------
// sweep: randomized multi-scenario ensemble
// ------------------------------------------------------------------
int run_sweep_cmd(const json &cfg, const std::string &out_dir,
                  std::uint64_t seed, const MetricOptions &options)
{
    SweepConfig sweep;
    sweep.base = setup_from_config(cfg);
    sweep.options = options;
    sweep.seed = seed;
    if (cfg.contains("sweep"))
    {
        const json &s = cfg.at("sweep");
        sweep.num_scenarios =
            get_or<std::size_t>(s, "num_scenarios", sweep.num_scenarios);
        sweep.with_olos = get_or(s, "with_olos", sweep.with_olos);
        sweep.mask_counts =
            get_or<std::vector<std::size_t>>(s, "mask_counts", sweep.mask_counts);
    }
    if (sweep.num_scenarios == 0)
        throw ConfigError("sweep.num_scenarios must be positive");

    SweepResult result = run_sweep(sweep);
    ReportBundle bundle = render_report(result, make_provenance(cfg, seed));
    write_bundle(bundle, out_dir);
    std::printf("sweep: %zu scenarios, ple %.4f, wrote %zu tables to %s\n",
                result.scenarios.size(), result.ple.exponent,
                bundle.tables.size() + 1, out_dir.c_str());
    return 0;
}

// ------------------------------------------------------------------
// report: single-position end-to-end pipeline
// ------------------------------------------------------------------
int run_report(const json &cfg, const std::string &out_dir, std::uint64_t seed,
               const MetricOptions &options)
{
    SimSetup setup = setup_from_config(cfg);
    bool with_olos = true;
    if (cfg.contains("olos"))
        with_olos = get_or(cfg.at("olos"), "enabled", true);

    ChannelTensor los = simulate_channel(setup, false);
    std::optional<ChannelTensor> olos;
    if (with_olos)
        olos = simulate_channel(setup, true);

    ScenarioReport report =
        evaluate_scenario(setup, los, olos ? &*olos : nullptr, options);

    std::vector<std::vector<double>> mask_rows;
    std::vector<std::size_t> mask_counts;
    if (cfg.contains("sweep"))
        mask_counts = get_or<std::vector<std::size_t>>(cfg.at("sweep"),
                                                       "mask_counts", {});
    if (!mask_counts.empty())
        mask_rows.push_back(mask_correlation_sweep(setup, los, mask_counts,
                                                   options.correlation_mode));

    ReportBundle bundle = render_report({report}, mask_rows, mask_counts, nullptr,
                                        options, make_provenance(cfg, seed));
    write_bundle(bundle, out_dir);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mmWave multi-array HMD channel simulator and metrics engine"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, mode;
    std::uint64_t seed = 1;
    bool per_tone = false;

    auto add_common = [&](CLI::App *cmd, bool with_in) {
        cmd->add_option("-c,--config", config_path, "JSON configuration file");
        cmd->add_option("--seed", seed, "random seed (fixes all stochastic choices)");
        cmd->add_option("-o,--out", out_path, "output directory or file");
        cmd->add_option("--mode", mode,
                        "estimator variant: literal or conventional");
        cmd->add_flag("--per-tone", per_tone, "per-tone capacity sampling");
        if (with_in)
            cmd->add_option("-i,--in", in_path, "input directory or file")
                ->required();
    };

    CLI::App *synth = app.add_subcommand("synth", "simulate and write channel containers");
    add_common(synth, false);
    synth->get_option("--out")->required();

    CLI::App *metrics = app.add_subcommand("metrics", "evaluate metrics over containers");
    add_common(metrics, true);
    metrics->get_option("--out")->required();

    CLI::App *capacity = app.add_subcommand("capacity", "waterfilling capacity table");
    double snr_db = 10.0;
    std::vector<std::size_t> limits{1, 0};
    capacity->add_option("-i,--in", in_path, "channel container")->required();
    capacity->add_option("-o,--out", out_path, "output CSV (default stdout)");
    capacity->add_option("--snr-db", snr_db, "SNR in dB");
    capacity->add_option("--streams", limits, "stream limits (0 = unlimited)");
    capacity->add_flag("--per-tone", per_tone, "average per-tone capacities");

    CLI::App *gtd = app.add_subcommand("gtd", "knife-edge blockage attenuation table");
    double d_tx = 1.5, d_rx = 1.5, width = 0.15, frequency = 28e9, sweep_to = 9.0;
    std::size_t sweep_points = 0;
    gtd->add_option("--d-tx", d_tx, "blocker distance from transmitter [m]");
    gtd->add_option("--d-rx", d_rx, "blocker distance from receiver [m]");
    gtd->add_option("--width", width, "blocker width [m]");
    gtd->add_option("--frequency", frequency, "carrier frequency [Hz]");
    gtd->add_option("--sweep", sweep_points, "number of centered-blocker sweep rows");
    gtd->add_option("--sweep-to", sweep_to, "final link length of the sweep [m]");
    gtd->add_option("-o,--out", out_path, "output CSV (default stdout)");

    CLI::App *sweep = app.add_subcommand("sweep", "randomized multi-scenario ensemble");
    add_common(sweep, false);
    sweep->get_option("--out")->required();

    CLI::App *report = app.add_subcommand("report", "single-position pipeline report");
    add_common(report, false);
    report->get_option("--out")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        json cfg = load_config(config_path);
        MetricOptions options = options_from_config(cfg);
        apply_mode(options, mode);
        if (per_tone)
            options.per_tone = true;

        if (synth->parsed())
            return run_synth(cfg, out_path, seed);
        if (metrics->parsed())
            return run_metrics(cfg, in_path, out_path, options, seed);
        if (capacity->parsed())
            return run_capacity(in_path, out_path, snr_db, limits, per_tone);
        if (gtd->parsed())
            return run_gtd(d_tx, d_rx, width, frequency, sweep_points, sweep_to,
                           out_path);
        if (sweep->parsed())
            return run_sweep_cmd(cfg, out_path, seed, options);
        if (report->parsed())
            return run_report(cfg, out_path, seed, options);
    }
    catch (const ConfigError &e)
    {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return exit_config;
    }
    catch (const nlohmann::json::exception &e)
    {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return exit_config;
    }
    catch (const std::invalid_argument &e)
    {
        std::fprintf(stderr, "error: numeric: %s\n", e.what());
        return exit_numeric;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: data: %s\n", e.what());
        return exit_data;
    }
    return 0;
}
