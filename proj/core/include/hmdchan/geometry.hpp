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

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <vector>

namespace hmdchan {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0; // m/s

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Ideal coupling-free patch element power pattern: cos^2 within the
/// field of view, zero outside. Boresight gain is 1 (0 dB) and the
/// -3 dB points sit at +-fov_halfwidth/2 for the default 90 deg FoV.
struct PatchElementPattern
{
    double boresight_azimuth = 0.0;   // rad
    double boresight_elevation = 0.0; // rad
    double fov_halfwidth = pi / 2.0;  // rad, clip boundary of the pattern
};

/// Power gain (linear) of a patch element for a given azimuth offset
/// from boresight. Offsets are wrapped to (-pi, pi] first; exactly
/// +-fov_halfwidth counts as inside (the cos^2 value is 0 there anyway).
double patch_element_gain(const PatchElementPattern &pattern, double azimuth_offset);

/// Analytical compound power gain of a Q-array HMD illuminated by a single
/// azimuthal component: N * M_Q * sum_q |alpha|^2 cos^2(phi - q*2pi/Q) clipped
/// to each array's +-pi/2 field of view. For Q = 4 the result is independent
/// of phi. Throws std::invalid_argument for num_arrays = 0.
double compound_gain_analytical(double mpc_gain, double mpc_azimuth,
                                std::size_t num_arrays,
                                std::size_t antennas_per_array,
                                std::size_t ap_antennas);

/// Planar patch array on the HMD azimuth ring.
struct ArrayLayout
{
    std::size_t rows = 4;
    std::size_t cols = 4;
    double element_spacing; // m, half-wavelength at carrier
    double array_azimuth = 0.0; // rad, boresight azimuth in the HMD frame
    bool dual_polarized = true;

    std::size_t ports_per_array() const
    {
        return rows * cols * (dual_polarized ? 2 : 1);
    }
    std::size_t antennas() const { return rows * cols; }
};

/// Ring of Q_total arrays at uniform azimuth offsets. Arrays carry the
/// sounder's Roman-numeral labels I..VIII (0-based indices 0..7); the
/// forward-facing array is VII (index 6).
struct HmdRing
{
    ArrayLayout layout;            // common per-array layout
    std::size_t num_arrays = 8;    // arrays on the ring
    double ring_radius = 0.09;     // m, array phase centers from the head axis
    std::size_t forward_index = 6; // array VII faces forward

    /// Boresight azimuth of array a in the HMD frame (forward = 0).
    double array_azimuth(std::size_t a) const;
};

/// Rectangular sub-array antenna mask, identical on every active array.
struct AntennaMask
{
    std::size_t row0 = 0, col0 = 0; // top-left corner
    std::size_t rows = 4, cols = 4;

    std::size_t count() const { return rows * cols; }
    bool contains(std::size_t r, std::size_t c) const
    {
        return r >= row0 && r < row0 + rows && c >= col0 && c < col0 + cols;
    }
};

enum class Facing { forward, backward };

/// Selection of active arrays (and the antenna mask within each) that
/// makes up a studied HMD configuration.
struct HmdConfiguration
{
    std::vector<std::size_t> active_arrays; // 0-based: I=0 ... VIII=7
    Facing facing = Facing::forward;
    AntennaMask mask{};

    std::size_t num_arrays() const { return active_arrays.size(); }
};

/// The four studied forward-facing presets (Q = 1..4): {VII}, {VI, VIII},
/// {VI, VII, VIII} and the uniform-coverage {I, III, V, VII}.
HmdConfiguration preset_configuration(std::size_t q, Facing facing = Facing::forward,
                                      AntennaMask mask = {});

/// Mirror a configuration about the lateral axis (forward <-> backward).
HmdConfiguration mirror_configuration(const HmdConfiguration &config);

/// Global port rows owned by a configuration, 0-based. Array a owns the
/// block a*ports_per_array .. (a+1)*ports_per_array - 1; ordering is
/// array-major, row-major within the array, polarization (H then V)
/// innermost. Throws std::invalid_argument for an empty selection.
std::vector<std::size_t> port_index_map(const HmdConfiguration &config,
                                        const ArrayLayout &layout);

/// HMD attitude. Roll is excluded from the mobility pattern and always 0.
struct Orientation
{
    double yaw = 0.0;   // rad
    double pitch = 0.0; // rad
    double roll = 0.0;  // always 0

    /// Body-to-world rotation: R = Rz(yaw) * Ry(pitch), right-hand rule,
    /// x forward / y left / z up. Negative pitch tilts the nose down.
    Eigen::Matrix3d rotation() const;
};

struct Pose
{
    Orientation orientation;
    Eigen::Vector3d translation = Eigen::Vector3d::Zero(); // vs start, m
};

/// Tripod-driven rotation sequence: 30 deg yaw, 30 deg downward pitch,
/// then a final 30 deg yaw executed while pitched, which swings the HMD
/// center about the tripod vertical axis on the pivot offset.
struct MobilityPattern
{
    double pivot_offset = 0.25;                      // m, pivot to HMD center
    double snapshot_rate = 1.0;                      // Hz
    std::array<double, 3> segment_durations{3.0, 15.0, 15.0}; // s
    double yaw_sign = 1.0; // +1 = right-hand-rule positive (leftward)

    double total_duration() const
    {
        return segment_durations[0] + segment_durations[1] + segment_durations[2];
    }
    /// 34 snapshots at 1 Hz including t = 0 for the default timing.
    std::size_t num_snapshots() const;
    double snapshot_time(std::size_t i) const { return double(i) / snapshot_rate; }
};

/// Orientation at time t along the mobility pattern (piecewise linear in
/// the rotation angles). Throws std::out_of_range outside [0, total].
Orientation mobility_orientation(const MobilityPattern &pattern, double t);

/// Orientation plus the HMD-center translation induced by pivoting.
Pose mobility_pose(const MobilityPattern &pattern, double t);

} // namespace hmdchan
