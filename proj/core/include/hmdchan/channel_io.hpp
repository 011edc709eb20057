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

#include <cstdint>
#include <string>
#include <vector>

namespace hmdchan {

/// Binary channel container, one file per (position, scenario, snapshot).
///
/// Layout (little-endian):
///   char[4]  magic "HMDC"
///   u32      version (1)
///   u32      position, scenario (0 = LoS, 1 = OLoS), snapshot
///   u32      M, N, K
///   f64      first tone frequency [Hz], tone spacing [Hz]
///   u32[M]   global HMD port rows carried by this container
///   c64[M*N*K] interleaved float32 re/im, index (m*N + n)*K + k
struct ContainerMeta
{
    std::uint32_t position = 0;
    std::uint32_t scenario = 0;
    std::uint32_t snapshot = 0;
    double first_tone = 0.0;   // Hz
    double tone_spacing = 0.0; // Hz
    std::vector<std::uint32_t> port_map;
};

void write_container(const std::string &path, const ContainerMeta &meta,
                     const CtfSlice &slice);

struct Container
{
    ContainerMeta meta;
    CtfSlice slice;
};

/// Throws std::runtime_error on missing files or malformed headers.
Container read_container(const std::string &path);

/// CSV export for small slices: one row per (m, n, k) with re/im columns.
void write_slice_csv(const std::string &path, const CtfSlice &slice);

} // namespace hmdchan
