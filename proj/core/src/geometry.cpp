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

#include "hmdchan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmdchan {

double wrap_angle(double a)
{
    a = std::fmod(a + pi, 2.0 * pi);
    if (a <= 0.0)
        a += 2.0 * pi;
    return a - pi;
}

double patch_element_gain(const PatchElementPattern &pattern, double azimuth_offset)
{
    double off = wrap_angle(azimuth_offset);
    if (std::abs(off) > pattern.fov_halfwidth)
        return 0.0;
    double c = std::cos(off);
    return c * c;
}

double compound_gain_analytical(double mpc_gain, double mpc_azimuth,
                                std::size_t num_arrays,
                                std::size_t antennas_per_array,
                                std::size_t ap_antennas)
{
    if (num_arrays == 0)
        throw std::invalid_argument("compound_gain_analytical: num_arrays must be >= 1");

    const PatchElementPattern pattern{};
    double acc = 0.0;
    for (std::size_t q = 0; q < num_arrays; q++)
    {
        double off = mpc_azimuth - double(q) * 2.0 * pi / double(num_arrays);
        acc += mpc_gain * patch_element_gain(pattern, off);
    }
    return double(ap_antennas) * double(antennas_per_array) * acc;
}

double HmdRing::array_azimuth(std::size_t a) const
{
    double step = 2.0 * pi / double(num_arrays);
    return wrap_angle((double(a) - double(forward_index)) * step);
}

HmdConfiguration preset_configuration(std::size_t q, Facing facing, AntennaMask mask)
{
    HmdConfiguration config;
    config.mask = mask;
    switch (q)
    {
    case 1: config.active_arrays = {6}; break;          // VII
    case 2: config.active_arrays = {5, 7}; break;       // VI, VIII
    case 3: config.active_arrays = {5, 6, 7}; break;    // VI, VII, VIII
    case 4: config.active_arrays = {0, 2, 4, 6}; break; // I, III, V, VII
    case 8: config.active_arrays = {0, 1, 2, 3, 4, 5, 6, 7}; break;
    default:
        throw std::invalid_argument("preset_configuration: q must be 1..4 or 8");
    }
    if (facing == Facing::backward)
        return mirror_configuration(config);
    return config;
}

HmdConfiguration mirror_configuration(const HmdConfiguration &config)
{
    HmdConfiguration out = config;
    out.facing = (config.facing == Facing::forward) ? Facing::backward : Facing::forward;
    for (auto &a : out.active_arrays)
        a = (16 - a) % 8; // azimuth alpha -> pi - alpha on the 45 deg ring
    std::sort(out.active_arrays.begin(), out.active_arrays.end());
    return out;
}

std::vector<std::size_t> port_index_map(const HmdConfiguration &config,
                                        const ArrayLayout &layout)
{
    if (config.active_arrays.empty())
        throw std::invalid_argument("port_index_map: no active arrays");
    if (config.mask.count() == 0)
        throw std::invalid_argument("port_index_map: empty antenna mask");
    if (config.mask.row0 + config.mask.rows > layout.rows ||
        config.mask.col0 + config.mask.cols > layout.cols)
        throw std::invalid_argument("port_index_map: mask exceeds array bounds");

    const std::size_t ppa = layout.ports_per_array();
    const std::size_t pols = layout.dual_polarized ? 2 : 1;

    std::vector<std::size_t> arrays = config.active_arrays;
    std::sort(arrays.begin(), arrays.end());

    std::vector<std::size_t> map;
    map.reserve(arrays.size() * config.mask.count() * pols);
    for (std::size_t a : arrays)
    {
        for (std::size_t r = 0; r < layout.rows; r++)
            for (std::size_t c = 0; c < layout.cols; c++)
            {
                if (!config.mask.contains(r, c))
                    continue;
                std::size_t base = a * ppa + (r * layout.cols + c) * pols;
                for (std::size_t p = 0; p < pols; p++)
                    map.push_back(base + p); // H then V
            }
    }
    return map;
}

Eigen::Matrix3d Orientation::rotation() const
{
    // x forward, y left, z up; positive yaw turns leftward, positive pitch
    // tilts the nose up (the mobility pattern uses negative pitch).
    double cy = std::cos(yaw), sy = std::sin(yaw);
    double cp = std::cos(pitch), sp = std::sin(pitch);
    Eigen::Matrix3d rz, rp;
    rz << cy, -sy, 0.0,
          sy,  cy, 0.0,
          0.0, 0.0, 1.0;
    rp << cp, 0.0, -sp,
          0.0, 1.0, 0.0,
          sp, 0.0,  cp;
    return rz * rp;
}

std::size_t MobilityPattern::num_snapshots() const
{
    return std::size_t(std::floor(total_duration() * snapshot_rate)) + 1;
}

Orientation mobility_orientation(const MobilityPattern &pattern, double t)
{
    const double d0 = pattern.segment_durations[0];
    const double d1 = pattern.segment_durations[1];
    const double d2 = pattern.segment_durations[2];
    const double total = d0 + d1 + d2;
    if (t < 0.0 || t > total)
        throw std::out_of_range("mobility_orientation: t outside [0, total duration]");

    const double yaw_step = pattern.yaw_sign * pi / 6.0; // 30 deg
    const double pitch_step = -pi / 6.0;                 // 30 deg downward

    Orientation o;
    if (t <= d0)
    {
        o.yaw = yaw_step * (t / d0);
    }
    else if (t <= d0 + d1)
    {
        o.yaw = yaw_step;
        o.pitch = pitch_step * ((t - d0) / d1);
    }
    else
    {
        o.yaw = yaw_step * (1.0 + (t - d0 - d1) / d2);
        o.pitch = pitch_step;
    }
    return o;
}

Pose mobility_pose(const MobilityPattern &pattern, double t)
{
    Pose pose;
    pose.orientation = mobility_orientation(pattern, t);
    // HMD center sits pivot_offset above the tripod pitch axis; pitching
    // swings it forward, and the final yaw then carries it on an arc.
    Eigen::Vector3d arm(0.0, 0.0, pattern.pivot_offset);
    pose.translation = pose.orientation.rotation() * arm - arm;
    return pose;
}

} // namespace hmdchan
