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

#include "hmdchan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace hmdchan {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

Scenario snapshot_scenario(const SimSetup &setup, const Pose &pose, bool obstructed)
{
    Scenario sc = setup.scenario;
    Eigen::Matrix3d yaw0;
    double c = std::cos(setup.initial_yaw), s = std::sin(setup.initial_yaw);
    yaw0 << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    sc.hmd_position += yaw0 * pose.translation;

    sc.blocker.present = obstructed;
    if (obstructed)
    {
        if (setup.olos_blocker_center)
            sc.blocker.center = *setup.olos_blocker_center;
        else
            sc.blocker.center =
                0.5 * (setup.scenario.ap_position.head<2>() +
                       setup.scenario.hmd_position.head<2>());
        sc.blocker.diameter = setup.olos_blocker_diameter;
    }
    return sc;
}

Orientation snapshot_orientation(const SimSetup &setup, const Pose &pose)
{
    Orientation o = pose.orientation;
    o.yaw = wrap_angle(o.yaw + setup.initial_yaw);
    return o;
}

double median(std::vector<double> values)
{
    if (values.empty())
        return nan_value;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

HmdRing SimSetup::hmd_ring() const
{
    HmdRing ring;
    ring.layout.rows = hmd_rows;
    ring.layout.cols = hmd_cols;
    ring.layout.element_spacing = scenario.wavelength() / 2.0;
    ring.layout.dual_polarized = dual_polarized;
    ring.num_arrays = num_hmd_arrays;
    ring.ring_radius = ring_radius;
    return ring;
}

ApArray SimSetup::ap_array() const
{
    ApArray ap;
    ap.rows = ap_rows;
    ap.cols = ap_cols;
    ap.element_spacing = scenario.wavelength() / 2.0;
    ap.boresight_azimuth = scenario.ap_boresight_azimuth;
    ap.dual_polarized = dual_polarized;
    return ap;
}

SounderModel SimSetup::sounder() const
{
    return make_sounder(scenario.carrier_frequency, scenario.bandwidth, num_tones);
}

ChannelTensor simulate_channel(const SimSetup &setup, bool obstructed)
{
    const HmdRing ring = setup.hmd_ring();
    const std::vector<AntennaPort> rx = hmd_ports(ring);
    const std::vector<AntennaPort> tx = ap_ports(setup.ap_array());
    const SounderModel sounder = setup.sounder();

    const std::size_t I = setup.mobility.num_snapshots();
    ChannelTensor tensor(rx.size(), tx.size(), I, sounder.num_tones());

    for (std::size_t i = 0; i < I; i++)
    {
        Pose pose = mobility_pose(setup.mobility, setup.mobility.snapshot_time(i));
        Scenario sc = snapshot_scenario(setup, pose, obstructed);
        std::vector<Mpc> mpcs = generate_mpcs(sc, setup.max_reflection_order);
        CtfSlice slice =
            synthesize_ctf(mpcs, rx, tx, sounder, snapshot_orientation(setup, pose));
        tensor.set_slice(i, slice);
    }
    return tensor;
}

std::vector<Mpc> first_snapshot_mpcs(const SimSetup &setup, bool obstructed)
{
    Pose pose = mobility_pose(setup.mobility, 0.0);
    Scenario sc = snapshot_scenario(setup, pose, obstructed);
    return generate_mpcs(sc, setup.max_reflection_order);
}

namespace {

GainSeries config_gain_series(const ChannelTensor &tensor)
{
    std::vector<double> gains(tensor.I);
    for (std::size_t i = 0; i < tensor.I; i++)
        gains[i] = mean_gain(tensor.slice(i));
    return GainSeries::from_gains(std::move(gains));
}

std::vector<double> capacity_samples_band(const ChannelTensor &tensor,
                                          const CapacityConfig &cap, std::size_t ports)
{
    std::vector<double> samples;
    samples.reserve(tensor.I);
    for (std::size_t i = 0; i < tensor.I; i++)
        samples.push_back(
            waterfilling_capacity(mean_eigenmodes(tensor, i), cap, ports).capacity);
    return samples;
}

std::vector<double> capacity_samples_per_tone(const ChannelTensor &tensor,
                                              const CapacityConfig &cap,
                                              std::size_t ports)
{
    std::vector<double> samples;
    samples.reserve(tensor.I * tensor.K);
    for (std::size_t i = 0; i < tensor.I; i++)
        for (std::size_t k = 0; k < tensor.K; k++)
            samples.push_back(
                waterfilling_capacity(tone_eigenmodes(tensor, i, k), cap, ports).capacity);
    return samples;
}

// Correlation matrices grow with (M*N)^2; skip configurations beyond this.
constexpr std::size_t correlation_pair_limit = 2048;

ConfigReport evaluate_config(const HmdConfiguration &config, const std::string &name,
                             std::size_t q, const ChannelTensor &los,
                             const ChannelTensor *olos,
                             const ChannelTensor &los_normalized,
                             const SounderModel &sounder, const ArrayLayout &layout,
                             const MetricOptions &options)
{
    ConfigReport report;
    report.name = name;
    report.q = q;
    report.facing = config.facing;

    const std::vector<std::size_t> rows = port_index_map(config, layout);
    ChannelTensor sub = extract_subchannel(los, rows);

    std::vector<double> gains(sub.I);
    double ratio_acc = 0.0;
    for (std::size_t i = 0; i < sub.I; i++)
    {
        CtfSlice slice = sub.slice(i);
        SnapshotMetrics sm;
        sm.snapshot = i;
        sm.mean_gain = mean_gain(slice);
        sm.gain_ratio_db = gain_ratio_db(sm.mean_gain, mean_gain(los.slice(i)));
        sm.fading = frequency_selective_fading(slice);
        PowerDelayProfile pdp = ctf_to_cir(slice, sounder);
        sm.sigma_tau = rms_delay_spread(pdp);
        sm.tau_mean = mean_excess_delay(pdp);
        report.snapshots.push_back(sm);
        gains[i] = sm.mean_gain;
        ratio_acc += sm.gain_ratio_db;
    }
    report.mean_gain_ratio_db = ratio_acc / double(sub.I);

    GainSeries series = GainSeries::from_gains(gains);
    report.sigma_eta_db = gain_std_db(series, EstimatorMode::literal);
    report.sigma_eta_db_conventional = gain_std_db(series, EstimatorMode::conventional);
    for (std::size_t lag : options.autocorr_lags)
        report.autocorr.push_back(lag < sub.I
                                      ? gain_autocorrelation(series, lag,
                                                             options.autocorr_mode)
                                      : nan_value);

    if (olos != nullptr)
    {
        GainSeries olos_series = config_gain_series(extract_subchannel(*olos, rows));
        report.blockage_first_db = blockage_ratio_db(series, olos_series, 1);
        report.blockage_all_db =
            blockage_ratio_db(series, olos_series,
                              std::min(series.mean_gain.size(),
                                       olos_series.mean_gain.size()));
    }
    else
    {
        report.blockage_first_db = nan_value;
        report.blockage_all_db = nan_value;
    }

    ChannelTensor sub_norm = extract_subchannel(los_normalized, rows);
    double snr = std::pow(10.0, options.snr_db / 10.0);
    for (std::size_t limit : options.stream_limits)
    {
        CapacityConfig cap;
        cap.snr = snr;
        cap.max_streams =
            (limit == 0) ? std::numeric_limits<std::size_t>::max() : limit;

        std::vector<double> band = capacity_samples_band(sub_norm, cap, rows.size());
        double mean = 0.0;
        for (double c : band)
            mean += c;
        report.capacity_mean.push_back(mean / double(band.size()));
        report.capacity_p3.push_back(minimal_service(band, options.percentile));
        if (options.per_tone)
            report.capacity_p3_per_tone.push_back(minimal_service(
                capacity_samples_per_tone(sub_norm, cap, rows.size()),
                options.percentile));
    }

    // First snapshot only; the pair count grows with (M*N)^2.
    report.mean_correlation =
        (rows.size() * los.N <= correlation_pair_limit)
            ? gain_correlation(sub.slice(0), options.correlation_mode)
            : nan_value;
    return report;
}

} // namespace

ScenarioReport evaluate_scenario(const SimSetup &setup, const ChannelTensor &los,
                                 const ChannelTensor *olos,
                                 const MetricOptions &options)
{
    const HmdRing ring = setup.hmd_ring();
    const ArrayLayout &layout = ring.layout;
    if (los.M != ring.num_arrays * layout.ports_per_array())
        throw std::invalid_argument("evaluate_scenario: tensor is not the full ring");

    const SounderModel sounder = setup.sounder();
    ChannelTensor los_normalized = normalize_channel(los);

    ScenarioReport report;
    report.ap_hmd_distance =
        (setup.scenario.ap_position - setup.scenario.hmd_position).norm();
    report.first_snapshot_gain = mean_gain(los.slice(0));

    report.azimuth = azimuth_spread(first_snapshot_mpcs(setup, false));

    {
        std::vector<double> taus(los.I);
        for (std::size_t i = 0; i < los.I; i++)
            taus[i] = rms_delay_spread(ctf_to_cir(los.slice(i), sounder));
        report.sigma_tau_median = median(std::move(taus));
    }

    AntennaMask full_mask{0, 0, layout.rows, layout.cols};
    for (std::size_t q : options.config_qs)
    {
        HmdConfiguration fwd = preset_configuration(q, Facing::forward, full_mask);
        std::string name = "Q" + std::to_string(q);
        report.configs.push_back(evaluate_config(fwd, name + "-fwd", q, los, olos,
                                                 los_normalized, sounder, layout,
                                                 options));

        HmdConfiguration bwd = mirror_configuration(fwd);
        if (bwd.active_arrays != fwd.active_arrays)
            report.configs.push_back(evaluate_config(bwd, name + "-bwd", q, los, olos,
                                                     los_normalized, sounder, layout,
                                                     options));
    }
    return report;
}

std::vector<double> mask_correlation_sweep(const SimSetup &setup,
                                           const ChannelTensor &los,
                                           const std::vector<std::size_t> &antenna_counts,
                                           CorrelationMode mode)
{
    const HmdRing ring = setup.hmd_ring();
    const ArrayLayout &layout = ring.layout;

    std::vector<double> out;
    out.reserve(antenna_counts.size());
    for (std::size_t count : antenna_counts)
    {
        // Corner-anchored rectangular masks, widest shape first.
        AntennaMask mask{0, 0, 1, count};
        while (mask.cols > layout.cols)
        {
            mask.cols /= 2;
            mask.rows *= 2;
        }
        if (mask.rows > layout.rows)
            throw std::invalid_argument("mask_correlation_sweep: count exceeds array");

        HmdConfiguration config = preset_configuration(3, Facing::forward, mask);
        ChannelTensor sub = extract_subchannel(los, port_index_map(config, layout));
        out.push_back(gain_correlation(sub.slice(0), mode));
    }
    return out;
}

SweepResult run_sweep(const SweepConfig &config)
{
    SweepResult result;
    result.config = config;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const Scenario &room = config.base.scenario;
    std::vector<std::pair<double, double>> ple_samples;

    for (std::size_t s = 0; s < config.num_scenarios; s++)
    {
        SimSetup setup = config.base;

        // HMD placement away from the walls and the AP; draws stay in
        // lockstep with the seed regardless of acceptance/rejection.
        const double margin = 0.8;
        for (int attempt = 0; attempt < 64; attempt++)
        {
            double x = margin + unit(rng) * (room.room_width - 2.0 * margin);
            double y = margin + unit(rng) * (room.room_length - 2.0 * margin);
            setup.scenario.hmd_position = Eigen::Vector3d(x, y, 1.5);
            if ((setup.scenario.hmd_position - room.ap_position).head<2>().norm() > 1.5)
                break;
        }
        setup.initial_yaw = wrap_angle(unit(rng) * 2.0 * pi);

        ChannelTensor los = simulate_channel(setup, false);
        ChannelTensor olos;
        if (config.with_olos)
            olos = simulate_channel(setup, true);

        ScenarioReport report = evaluate_scenario(
            setup, los, config.with_olos ? &olos : nullptr, config.options);
        report.position = s;
        ple_samples.emplace_back(report.ap_hmd_distance, report.first_snapshot_gain);

        if (!config.mask_counts.empty())
            result.mask_correlations.push_back(mask_correlation_sweep(
                setup, los, config.mask_counts, config.options.correlation_mode));

        result.scenarios.push_back(std::move(report));
    }

    result.ple = fit_ple(ple_samples);
    return result;
}

} // namespace hmdchan
