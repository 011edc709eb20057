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

#include <cstdint>
#include <vector>

namespace hmdchan {

/// Switched-sounder model: per-tone system response, optional noise
/// injection and the per-element-pair sampling schedule.
struct SounderModel
{
    std::vector<double> tone_frequencies;   // Hz, size K
    std::vector<cdouble> system_response;   // per tone; empty means 1
    double noise_power = 0.0;               // linear, 0 = reconstructed channel
    double sampling_interval = 18.3e-6;     // s per element pair, row-major over (m, n)
    std::uint64_t noise_seed = 0;

    std::size_t num_tones() const { return tone_frequencies.size(); }
    bool uniform_grid(double rel_tol = 1e-9) const;
};

/// Uniform tone grid centered on the carrier.
SounderModel make_sounder(double carrier_frequency, double bandwidth, std::size_t num_tones);

/// Antenna port: phase-center position, polarization (0 = H, 1 = V) and
/// the patch boresight direction of the array it belongs to.
struct AntennaPort
{
    Eigen::Vector3d position;  // m, local frame
    int polarization;          // 0 = H, 1 = V
    double boresight_azimuth;  // rad, local frame
    double boresight_elevation = 0.0;
};

/// All HMD ports of a ring, in global port order (array-major, row-major
/// within the array, H then V innermost), positions in the HMD body frame.
std::vector<AntennaPort> hmd_ports(const HmdRing &ring);

/// AP-side planar array.
struct ApArray
{
    std::size_t rows = 4;
    std::size_t cols = 16;
    double element_spacing; // m
    double boresight_azimuth = 0.0; // rad, world frame
    bool dual_polarized = true;

    std::size_t num_ports() const { return rows * cols * (dual_polarized ? 2 : 1); }
};

std::vector<AntennaPort> ap_ports(const ApArray &ap);

/// One M x N x K transfer-function slice (a single snapshot).
struct CtfSlice
{
    std::size_t M = 0, N = 0, K = 0;
    std::vector<cdouble> data; // index (m*N + n)*K + k

    CtfSlice() = default;
    CtfSlice(std::size_t m, std::size_t n, std::size_t k)
        : M(m), N(n), K(k), data(m * n * k, cdouble(0.0, 0.0)) {}

    cdouble &at(std::size_t m, std::size_t n, std::size_t k)
    {
        return data[(m * N + n) * K + k];
    }
    cdouble at(std::size_t m, std::size_t n, std::size_t k) const
    {
        return data[(m * N + n) * K + k];
    }
    const cdouble *pair(std::size_t m, std::size_t n) const
    {
        return data.data() + (m * N + n) * K;
    }
    double squared_norm() const;
};

/// Complex transfer-function tensor over snapshots and tones for one
/// (position, scenario) pair.
struct ChannelTensor
{
    std::size_t M = 0, N = 0, I = 0, K = 0;
    std::vector<cdouble> data; // snapshot-major, then (m*N + n)*K + k

    ChannelTensor() = default;
    ChannelTensor(std::size_t m, std::size_t n, std::size_t i, std::size_t k)
        : M(m), N(n), I(i), K(k), data(m * n * i * k, cdouble(0.0, 0.0)) {}

    cdouble &at(std::size_t i, std::size_t m, std::size_t n, std::size_t k)
    {
        return data[((i * M + m) * N + n) * K + k];
    }
    cdouble at(std::size_t i, std::size_t m, std::size_t n, std::size_t k) const
    {
        return data[((i * M + m) * N + n) * K + k];
    }

    void set_slice(std::size_t i, const CtfSlice &slice);
    CtfSlice slice(std::size_t i) const;
    double squared_norm() const;
};

/// Sum over MPCs of the polarimetric port responses, delay and Doppler
/// phasors, evaluated per (m, n, k). The snapshot orientation rotates all
/// arrival directions into the HMD body frame before pattern and phase
/// evaluation. Optional complex Gaussian noise of sounder.noise_power is
/// added on top.
CtfSlice synthesize_ctf(const std::vector<Mpc> &mpcs,
                        const std::vector<AntennaPort> &hmd,
                        const std::vector<AntennaPort> &ap,
                        const SounderModel &sounder,
                        const Orientation &snapshot_orientation);

/// Power delay profile on the uniform delay grid 1/bandwidth.
struct PowerDelayProfile
{
    std::vector<double> taps;   // linear power per delay bin
    std::vector<double> delays; // s

    double total_power() const;
};

/// Per-pair inverse DFT of the slice; the PDP is the squared Frobenius
/// norm across port pairs per delay bin. The CIR is scaled so that
/// Parseval holds bin-for-tone: sum_k |H[k]|^2 = sum_u |h[u]|^2.
/// Throws std::invalid_argument for a non-uniform tone grid.
PowerDelayProfile ctf_to_cir(const CtfSlice &ctf, const SounderModel &sounder);

/// Scale by sqrt(M N I K / sum_{i,k} ||H||_F^2) so the mean per-entry
/// per-tone power is 1. With per_tone_unit_mean = false an extra 1/sqrt(K)
/// makes E[sum_k |H|^2] = 1 instead. Throws std::invalid_argument on an
/// all-zero tensor.
ChannelTensor normalize_channel(const ChannelTensor &full_tensor,
                                bool per_tone_unit_mean = true);

/// Row-slice every snapshot/tone matrix by the configuration's port map.
ChannelTensor extract_subchannel(const ChannelTensor &full_tensor,
                                 const std::vector<std::size_t> &port_rows);

} // namespace hmdchan
