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
#include <complex>

namespace hmdchan {

using cdouble = std::complex<double>;

/// One specular multipath component: polarimetric amplitude matrix,
/// departure/arrival angles, delay and Doppler.
struct Mpc
{
    Eigen::Matrix2cd gamma = Eigen::Matrix2cd::Zero(); // [HH HV; VH VV] amplitude
    double azimuth_departure = 0.0;   // rad, world frame
    double elevation_departure = 0.0; // rad
    double azimuth_arrival = 0.0;     // rad, world frame
    double elevation_arrival = 0.0;   // rad
    double delay = 0.0;               // s
    double doppler = 0.0;             // Hz
    int reflection_order = 0;

    /// Combined power gain across all polarizations.
    double power() const { return gamma.squaredNorm(); }
};

} // namespace hmdchan
