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

#include "hmdchan/channel_types.hpp"
#include "hmdchan/geometry.hpp"

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace hmdchan {

/// Cylindrical human blocker standing on the floor, described by its 2-D
/// footprint. Default diameter matches a human torso seen edge-on.
struct Blocker
{
    Eigen::Vector2d center = Eigen::Vector2d::Zero(); // m, floor plane
    double diameter = 0.15;                           // m
    bool present = false;
};

/// Axis-aligned conference room with per-surface power reflection
/// coefficients, AP/HMD placement and the sounding frequency plan.
/// Surface order: x=0, x=width, y=0, y=length, floor, ceiling.
struct Scenario
{
    double room_width = 6.0;   // m, x extent
    double room_length = 9.15; // m, y extent
    double room_height = 3.0;  // m, z extent

    Eigen::Vector3d ap_position{5.7, 8.8, 2.0};
    double ap_boresight_azimuth = -2.2; // rad, world frame
    Eigen::Vector3d hmd_position{2.0, 3.0, 1.5};

    std::array<double, 6> surface_reflectivity{0.6, 0.6, 0.6, 0.6, 0.3, 0.6};

    double carrier_frequency = 28e9; // Hz
    double bandwidth = 768e6;        // Hz
    std::size_t num_tones = 2048;

    double cross_pol_leakage_db = -15.0; // per reflection

    Blocker blocker{};

    double wavelength() const { return speed_of_light / carrier_frequency; }
    double tone_spacing() const { return bandwidth / double(num_tones); }
};

/// Generate specular MPCs by the image method: LoS, one bounce per
/// surface for order 1, and all ordered two-surface combinations
/// (excluding same-surface double bounces) for order 2. Amplitudes are
/// free-space (lambda / 4 pi d) times the product of surface reflection
/// amplitudes; an active blocker applies knife-edge attenuation to every
/// ray whose 2-D polyline passes within diameter/2 of its center.
/// Doppler is zero (quasi-static room). Throws std::invalid_argument for
/// coincident AP and HMD or an unsupported reflection order.
std::vector<Mpc> generate_mpcs(const Scenario &scenario, std::size_t max_reflection_order);

/// Double-knife-edge attenuation (dB >= 0) of a cylinder of the given
/// width blocking a link at distances d_tx / d_rx from its endpoints.
/// Each half of the cylinder acts as an absorbing edge at +-width/2; the
/// per-edge fields come from numerically integrated Fresnel integrals
/// and add coherently. Throws std::invalid_argument for non-positive
/// distances or width.
double gtd_blockage_attenuation(double d_tx, double d_rx, double width, double frequency);

/// Complex Fresnel integral int_0^v exp(-j pi t^2 / 2) dt.
std::complex<double> fresnel_integral(double v);

/// Log-distance path loss model, PL(d) = PL0 + 10 n log10(d/d0) + X_sigma.
struct PathLossModel
{
    double exponent = 2.0;       // n
    double reference_loss = 0.0; // dB at d0
    double reference_distance = 1.0; // m
    double shadow_fading = 0.0;  // dB >= 0
};

/// Path loss in dB at distance d. Throws std::invalid_argument for d <= 0.
double path_loss(const PathLossModel &model, double d);

struct PleFit
{
    double exponent;       // n
    double reference_loss; // dB at 1 m
};

/// Fit the path loss exponent by least squares over (log10 d, gain_dB)
/// pairs; gains are linear power gains. Throws std::invalid_argument for
/// fewer than two samples or all-equal distances.
PleFit fit_ple(const std::vector<std::pair<double, double>> &samples);

} // namespace hmdchan
