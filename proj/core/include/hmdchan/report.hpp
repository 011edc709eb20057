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

#include "hmdchan/sim.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hmdchan {

inline constexpr const char *version_string = "0.1.0";

struct Provenance
{
    std::uint64_t seed = 0;
    std::string config_digest; // hex FNV-1a of the canonical config text
    std::string version = version_string;
};

/// CSV tables plus a JSON summary; re-rendering the same inputs produces
/// byte-identical payloads.
struct ReportBundle
{
    std::vector<std::pair<std::string, std::string>> tables; // name -> CSV
    std::string json_summary;
};

/// 64-bit FNV-1a digest of a string, lowercase hex.
std::string fnv1a_hex(const std::string &text);

ReportBundle render_report(const std::vector<ScenarioReport> &scenarios,
                           const std::vector<std::vector<double>> &mask_correlations,
                           const std::vector<std::size_t> &mask_counts,
                           const PleFit *ple, const MetricOptions &options,
                           const Provenance &provenance);

ReportBundle render_report(const SweepResult &result, const Provenance &provenance);

/// Write every table (and the JSON summary) into a directory.
void write_bundle(const ReportBundle &bundle, const std::string &directory);

} // namespace hmdchan
