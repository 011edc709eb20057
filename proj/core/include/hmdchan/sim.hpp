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

#pragma once

#include "hmdchan/channel.hpp"
#include "hmdchan/metrics.hpp"
#include "hmdchan/propagation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hmdchan {

/// End-to-end simulation setup: room, arrays, sounding plan and mobility.
struct SimSetup
{
    Scenario scenario{};
    std::size_t max_reflection_order = 2;

    std::size_t hmd_rows = 2, hmd_cols = 2;
    std::size_t ap_rows = 2, ap_cols = 4;
    bool dual_polarized = true;
    std::size_t num_hmd_arrays = 8;
    double ring_radius = 0.09;

    std::size_t num_tones = 128;
    double initial_yaw = 0.0; // rad, random per measurement position
    MobilityPattern mobility{};

    /// Blocker used in the OLoS variant; placed on the LoS midpoint when
    /// no explicit center is configured.
    std::optional<Eigen::Vector2d> olos_blocker_center;
    double olos_blocker_diameter = 0.4;

    HmdRing hmd_ring() const;
    ApArray ap_array() const;
    SounderModel sounder() const;
};

/// Synthesize the full-ring channel tensor for one (position, scenario)
/// pair across all mobility snapshots. `obstructed` enables the blocker.
ChannelTensor simulate_channel(const SimSetup &setup, bool obstructed);

/// MPCs of the first snapshot (used for azimuth spread and PLE tables).
std::vector<Mpc> first_snapshot_mpcs(const SimSetup &setup, bool obstructed);

// ---------------------------------------------------------------------
// Metric evaluation over simulated or loaded tensors
// ---------------------------------------------------------------------

struct MetricOptions
{
    EstimatorMode std_mode = EstimatorMode::literal;
    EstimatorMode autocorr_mode = EstimatorMode::conventional;
    double snr_db = 10.0;
    std::vector<std::size_t> stream_limits = {1, 0}; // 0 = unlimited (SM)
    bool per_tone = false;
    double percentile = 3.0;
    std::vector<std::size_t> config_qs = {1, 2, 3, 4, 8};
    std::vector<std::size_t> autocorr_lags = {1, 5};
    CorrelationMode correlation_mode = CorrelationMode::second_moment;
};

struct SnapshotMetrics
{
    std::size_t snapshot = 0;
    double mean_gain = 0.0;      // linear, raw channel
    double gain_ratio_db = 0.0;  // vs the 8-array configuration
    double fading = 0.0;         // xi
    double sigma_tau = 0.0;      // s
    double tau_mean = 0.0;       // s
};

struct ConfigReport
{
    std::string name;
    std::size_t q = 0;
    Facing facing = Facing::forward;

    std::vector<SnapshotMetrics> snapshots; // LoS scenario
    double mean_gain_ratio_db = 0.0;
    double sigma_eta_db = 0.0;
    double sigma_eta_db_conventional = 0.0;
    std::vector<double> autocorr; // at options.autocorr_lags

    double blockage_first_db = 0.0; // NaN without an OLoS tensor
    double blockage_all_db = 0.0;

    // Capacity per stream limit (same order as options.stream_limits).
    std::vector<double> capacity_mean;
    std::vector<double> capacity_p3;
    std::vector<double> capacity_p3_per_tone; // empty unless per_tone

    double mean_correlation = 0.0;
};

struct ScenarioReport
{
    std::size_t position = 0;
    double ap_hmd_distance = 0.0;
    double first_snapshot_gain = 0.0; // linear, 8-array LoS
    AzimuthSpread azimuth{0.0, 0.0};
    double sigma_tau_median = 0.0; // 8-array LoS, across snapshots
    std::vector<ConfigReport> configs;
};

/// Apply the metric suite to one position: the four forward presets and
/// the 8-array reference, plus their backward-facing counterparts for the
/// rear-headband comparison. `olos` may be null (blockage entries NaN).
ScenarioReport evaluate_scenario(const SimSetup &setup, const ChannelTensor &los,
                                 const ChannelTensor *olos,
                                 const MetricOptions &options);

/// Mean gain correlation of the Q=3 configuration for each sub-array
/// antenna count (masks anchored at the array corner), averaged over LoS
/// snapshots.
std::vector<double> mask_correlation_sweep(const SimSetup &setup,
                                           const ChannelTensor &los,
                                           const std::vector<std::size_t> &antenna_counts,
                                           CorrelationMode mode);

// ---------------------------------------------------------------------
// Deterministic ensemble sweep
// ---------------------------------------------------------------------

struct SweepConfig
{
    SimSetup base{};
    MetricOptions options{};
    std::size_t num_scenarios = 50;
    std::uint64_t seed = 1;
    bool with_olos = false;
    std::vector<std::size_t> mask_counts{}; // e.g. {1,2,4,8,16}; empty = skip
};

struct SweepResult
{
    SweepConfig config;
    std::vector<ScenarioReport> scenarios;
    std::vector<std::vector<double>> mask_correlations; // per scenario
    PleFit ple{0.0, 0.0}; // over first-snapshot gains vs distance
};

/// Randomizes HMD placement and initial orientation per scenario from the
/// seed, runs the full pipeline and evaluates all metrics. Deterministic:
/// identical config + seed give identical results.
SweepResult run_sweep(const SweepConfig &config);

} // namespace hmdchan
