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

#include "hmdchan/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hmdchan {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

const char *facing_name(Facing f)
{
    return f == Facing::forward ? "forward" : "backward";
}

std::vector<double> collect(const std::vector<ScenarioReport> &scenarios,
                            const std::string &config_name,
                            double (*pick)(const ConfigReport &))
{
    std::vector<double> out;
    for (const auto &sc : scenarios)
        for (const auto &cfg : sc.configs)
            if (cfg.name == config_name)
            {
                double v = pick(cfg);
                if (!std::isnan(v))
                    out.push_back(v);
            }
    return out;
}

nlohmann::ordered_json percentile_table(std::vector<double> values)
{
    nlohmann::ordered_json t;
    if (values.empty())
        return t;
    t["p3"] = minimal_service(values, 3.0);
    t["p50"] = minimal_service(values, 50.0);
    t["p97"] = minimal_service(values, 97.0);
    return t;
}

} // namespace

std::string fnv1a_hex(const std::string &text)
{
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text)
    {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)hash);
    return buf;
}

ReportBundle render_report(const std::vector<ScenarioReport> &scenarios,
                           const std::vector<std::vector<double>> &mask_correlations,
                           const std::vector<std::size_t> &mask_counts,
                           const PleFit *ple, const MetricOptions &options,
                           const Provenance &provenance)
{
    ReportBundle bundle;
    const std::string prov = "," + std::to_string(provenance.seed) + "," +
                             provenance.config_digest + "," + provenance.version + "\n";

    // Per-snapshot table.
    {
        std::string csv = "position,config,snapshot,mean_gain,gain_ratio_db,"
                          "fading_xi,sigma_tau_s,tau_mean_s,seed,config_digest,version\n";
        for (const auto &sc : scenarios)
            for (const auto &cfg : sc.configs)
                for (const auto &snap : cfg.snapshots)
                    csv += std::to_string(sc.position) + "," + cfg.name + "," +
                           std::to_string(snap.snapshot) + "," + fmt(snap.mean_gain) +
                           "," + fmt(snap.gain_ratio_db) + "," + fmt(snap.fading) +
                           "," + fmt(snap.sigma_tau) + "," + fmt(snap.tau_mean) + prov;
        bundle.tables.emplace_back("snapshots.csv", std::move(csv));
    }

    // Per-configuration summary table.
    {
        std::string header = "position,config,q,facing,distance_m,mean_gain_ratio_db,"
                             "sigma_eta_db,sigma_eta_db_conventional";
        for (std::size_t lag : options.autocorr_lags)
            header += ",autocorr_lag" + std::to_string(lag);
        header += ",blockage_first_db,blockage_all_db";
        for (std::size_t limit : options.stream_limits)
        {
            std::string tag = (limit == 0) ? "sm" : "r" + std::to_string(limit);
            header += ",capacity_mean_" + tag + ",capacity_p3_" + tag;
            if (options.per_tone)
                header += ",capacity_p3_tone_" + tag;
        }
        header += ",mean_correlation,azimuth_spread,azimuth_lambda,"
                  "sigma_tau_median_s,seed,config_digest,version\n";

        std::string csv = header;
        for (const auto &sc : scenarios)
            for (const auto &cfg : sc.configs)
            {
                csv += std::to_string(sc.position) + "," + cfg.name + "," +
                       std::to_string(cfg.q) + "," + facing_name(cfg.facing) + "," +
                       fmt(sc.ap_hmd_distance) + "," + fmt(cfg.mean_gain_ratio_db) +
                       "," + fmt(cfg.sigma_eta_db) + "," +
                       fmt(cfg.sigma_eta_db_conventional);
                for (double r : cfg.autocorr)
                    csv += "," + fmt(r);
                csv += "," + fmt(cfg.blockage_first_db) + "," + fmt(cfg.blockage_all_db);
                for (std::size_t s = 0; s < options.stream_limits.size(); s++)
                {
                    csv += "," + fmt(cfg.capacity_mean[s]) + "," +
                           fmt(cfg.capacity_p3[s]);
                    if (options.per_tone)
                        csv += "," + fmt(cfg.capacity_p3_per_tone[s]);
                }
                csv += "," + fmt(cfg.mean_correlation) + "," +
                       fmt(sc.azimuth.sigma_phi) + "," + fmt(sc.azimuth.lambda) + "," +
                       fmt(sc.sigma_tau_median) + prov;
            }
        bundle.tables.emplace_back("summary.csv", std::move(csv));
    }

    // Sub-array mask correlation table.
    if (!mask_correlations.empty())
    {
        std::string csv = "position";
        for (std::size_t c : mask_counts)
            csv += ",correlation_" + std::to_string(c) + "ant";
        csv += ",seed,config_digest,version\n";
        for (std::size_t s = 0; s < mask_correlations.size(); s++)
        {
            csv += std::to_string(s);
            for (double v : mask_correlations[s])
                csv += "," + fmt(v);
            csv += prov;
        }
        bundle.tables.emplace_back("mask_correlation.csv", std::move(csv));
    }

    // JSON summary with percentile tables.
    {
        nlohmann::ordered_json j;
        j["provenance"] = {{"seed", provenance.seed},
                           {"config_digest", provenance.config_digest},
                           {"version", provenance.version}};
        j["num_positions"] = scenarios.size();

        nlohmann::ordered_json configs = nlohmann::ordered_json::object();
        std::vector<std::string> names;
        for (const auto &sc : scenarios)
            for (const auto &cfg : sc.configs)
                if (std::find(names.begin(), names.end(), cfg.name) == names.end())
                    names.push_back(cfg.name);

        for (const std::string &name : names)
        {
            nlohmann::ordered_json entry;
            entry["gain_ratio_db"] = percentile_table(collect(
                scenarios, name, [](const ConfigReport &c) { return c.mean_gain_ratio_db; }));
            entry["sigma_eta_db"] = percentile_table(collect(
                scenarios, name, [](const ConfigReport &c) { return c.sigma_eta_db; }));
            entry["capacity_p3_first_limit"] = percentile_table(collect(
                scenarios, name, [](const ConfigReport &c) {
                    return c.capacity_p3.empty() ? std::nan("") : c.capacity_p3.front();
                }));
            configs[name] = entry;
        }
        j["configurations"] = configs;

        if (ple != nullptr)
            j["path_loss_fit"] = {{"exponent", ple->exponent},
                                  {"reference_loss_db", ple->reference_loss}};
        bundle.json_summary = j.dump(2) + "\n";
    }
    return bundle;
}

ReportBundle render_report(const SweepResult &result, const Provenance &provenance)
{
    return render_report(result.scenarios, result.mask_correlations,
                         result.config.mask_counts, &result.ple, result.config.options,
                         provenance);
}

void write_bundle(const ReportBundle &bundle, const std::string &directory)
{
    std::filesystem::create_directories(directory);
    for (const auto &[name, content] : bundle.tables)
    {
        std::ofstream os(std::filesystem::path(directory) / name, std::ios::binary);
        if (!os)
            throw std::runtime_error("write_bundle: cannot write " + name);
        os << content;
    }
    std::ofstream os(std::filesystem::path(directory) / "summary.json",
                     std::ios::binary);
    os << bundle.json_summary;
}

} // namespace hmdchan
