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

#include "hmdchan/channel.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <random>
#include <stdexcept>

namespace hmdchan {

bool SounderModel::uniform_grid(double rel_tol) const
{
    if (tone_frequencies.size() < 2)
        return true;
    double step = tone_frequencies[1] - tone_frequencies[0];
    for (std::size_t k = 2; k < tone_frequencies.size(); k++)
    {
        double s = tone_frequencies[k] - tone_frequencies[k - 1];
        if (std::abs(s - step) > rel_tol * std::abs(step))
            return false;
    }
    return true;
}

SounderModel make_sounder(double carrier_frequency, double bandwidth, std::size_t num_tones)
{
    SounderModel sounder;
    sounder.tone_frequencies.resize(num_tones);
    double spacing = bandwidth / double(num_tones);
    double f0 = carrier_frequency - bandwidth / 2.0;
    for (std::size_t k = 0; k < num_tones; k++)
        sounder.tone_frequencies[k] = f0 + double(k) * spacing;
    return sounder;
}

std::vector<AntennaPort> hmd_ports(const HmdRing &ring)
{
    const ArrayLayout &lay = ring.layout;
    const std::size_t pols = lay.dual_polarized ? 2 : 1;
    std::vector<AntennaPort> ports;
    ports.reserve(ring.num_arrays * lay.ports_per_array());

    for (std::size_t a = 0; a < ring.num_arrays; a++)
    {
        double az = ring.array_azimuth(a);
        Eigen::Vector3d boresight(std::cos(az), std::sin(az), 0.0);
        Eigen::Vector3d tangent(-std::sin(az), std::cos(az), 0.0);
        Eigen::Vector3d vertical(0.0, 0.0, 1.0);
        Eigen::Vector3d center = ring.ring_radius * boresight;

        for (std::size_t r = 0; r < lay.rows; r++)
            for (std::size_t c = 0; c < lay.cols; c++)
            {
                Eigen::Vector3d pos = center +
                    (double(c) - 0.5 * double(lay.cols - 1)) * lay.element_spacing * tangent +
                    (0.5 * double(lay.rows - 1) - double(r)) * lay.element_spacing * vertical;
                for (std::size_t p = 0; p < pols; p++)
                    ports.push_back(AntennaPort{pos, int(p), az, 0.0});
            }
    }
    return ports;
}

std::vector<AntennaPort> ap_ports(const ApArray &ap)
{
    const std::size_t pols = ap.dual_polarized ? 2 : 1;
    double az = ap.boresight_azimuth;
    Eigen::Vector3d tangent(-std::sin(az), std::cos(az), 0.0);
    Eigen::Vector3d vertical(0.0, 0.0, 1.0);

    std::vector<AntennaPort> ports;
    ports.reserve(ap.num_ports());
    for (std::size_t r = 0; r < ap.rows; r++)
        for (std::size_t c = 0; c < ap.cols; c++)
        {
            Eigen::Vector3d pos =
                (double(c) - 0.5 * double(ap.cols - 1)) * ap.element_spacing * tangent +
                (0.5 * double(ap.rows - 1) - double(r)) * ap.element_spacing * vertical;
            for (std::size_t p = 0; p < pols; p++)
                ports.push_back(AntennaPort{pos, int(p), az, 0.0});
        }
    return ports;
}

double CtfSlice::squared_norm() const
{
    double acc = 0.0;
    for (const auto &v : data)
        acc += std::norm(v);
    return acc;
}

void ChannelTensor::set_slice(std::size_t i, const CtfSlice &slice)
{
    if (slice.M != M || slice.N != N || slice.K != K)
        throw std::invalid_argument("ChannelTensor::set_slice: shape mismatch");
    std::copy(slice.data.begin(), slice.data.end(), data.begin() + i * M * N * K);
}

CtfSlice ChannelTensor::slice(std::size_t i) const
{
    CtfSlice s(M, N, K);
    std::copy(data.begin() + i * M * N * K, data.begin() + (i + 1) * M * N * K,
              s.data.begin());
    return s;
}

double ChannelTensor::squared_norm() const
{
    double acc = 0.0;
    for (const auto &v : data)
        acc += std::norm(v);
    return acc;
}

namespace {

/// Separable cos^2 patch response: pattern gain in azimuth and elevation
/// relative to the port's boresight, evaluated for a unit direction.
double port_pattern_gain(const AntennaPort &port, const Eigen::Vector3d &direction)
{
    PatchElementPattern pat{port.boresight_azimuth, port.boresight_elevation, pi / 2.0};
    double az = std::atan2(direction.y(), direction.x());
    double el = std::atan2(direction.z(), std::hypot(direction.x(), direction.y()));
    double g_az = patch_element_gain(pat, az - port.boresight_azimuth);
    double g_el = patch_element_gain(PatchElementPattern{}, el - port.boresight_elevation);
    return g_az * g_el;
}

} // namespace

CtfSlice synthesize_ctf(const std::vector<Mpc> &mpcs,
                        const std::vector<AntennaPort> &hmd,
                        const std::vector<AntennaPort> &ap,
                        const SounderModel &sounder,
                        const Orientation &snapshot_orientation)
{
    const std::size_t M = hmd.size();
    const std::size_t N = ap.size();
    const std::size_t K = sounder.num_tones();
    if (M == 0 || N == 0 || K == 0)
        throw std::invalid_argument("synthesize_ctf: empty port or tone set");
    if (!sounder.system_response.empty() && sounder.system_response.size() != K)
        throw std::invalid_argument("synthesize_ctf: system response length mismatch");

    CtfSlice out(M, N, K);
    const Eigen::Matrix3d body_to_world = snapshot_orientation.rotation();
    const Eigen::Matrix3d world_to_body = body_to_world.transpose();

    Eigen::VectorXcd g_rx(M), g_tx(N);

    for (const Mpc &mpc : mpcs)
    {
        // Arrival direction (towards the source) in the HMD body frame.
        Eigen::Vector3d arr_world(
            std::cos(mpc.elevation_arrival) * std::cos(mpc.azimuth_arrival),
            std::cos(mpc.elevation_arrival) * std::sin(mpc.azimuth_arrival),
            std::sin(mpc.elevation_arrival));
        Eigen::Vector3d arr_body = world_to_body * arr_world;

        Eigen::Vector3d dep_world(
            std::cos(mpc.elevation_departure) * std::cos(mpc.azimuth_departure),
            std::cos(mpc.elevation_departure) * std::sin(mpc.azimuth_departure),
            std::sin(mpc.elevation_departure));

        // Frequency-independent pattern amplitudes and spatial projections.
        Eigen::VectorXd amp_rx(M), proj_rx(M);
        for (std::size_t m = 0; m < M; m++)
        {
            amp_rx[m] = std::sqrt(port_pattern_gain(hmd[m], arr_body));
            proj_rx[m] = arr_body.dot(hmd[m].position);
        }
        Eigen::VectorXd amp_tx(N), proj_tx(N);
        for (std::size_t n = 0; n < N; n++)
        {
            amp_tx[n] = std::sqrt(port_pattern_gain(ap[n], dep_world));
            proj_tx[n] = dep_world.dot(ap[n].position);
        }

        const bool has_doppler = mpc.doppler != 0.0;

        for (std::size_t k = 0; k < K; k++)
        {
            double fk = sounder.tone_frequencies[k];
            double wave = 2.0 * pi * fk / speed_of_light;
            cdouble delay_phasor = std::polar(1.0, -2.0 * pi * fk * mpc.delay);
            cdouble sys = sounder.system_response.empty()
                              ? cdouble(1.0, 0.0)
                              : sounder.system_response[k];
            cdouble common = delay_phasor * sys;

            for (std::size_t m = 0; m < M; m++)
                g_rx[m] = amp_rx[m] * std::polar(1.0, wave * proj_rx[m]);
            for (std::size_t n = 0; n < N; n++)
                g_tx[n] = amp_tx[n] * std::polar(1.0, wave * proj_tx[n]);

            for (std::size_t m = 0; m < M; m++)
            {
                const cdouble rm = g_rx[m];
                if (rm == cdouble(0.0, 0.0))
                    continue;
                const int pm = hmd[m].polarization;
                cdouble *row = out.data.data() + (m * N) * K + k;
                for (std::size_t n = 0; n < N; n++)
                {
                    cdouble val = rm * mpc.gamma(pm, ap[n].polarization) * g_tx[n] * common;
                    if (has_doppler)
                    {
                        double t = double(m * N + n) * sounder.sampling_interval;
                        val *= std::polar(1.0, 2.0 * pi * mpc.doppler * t);
                    }
                    row[n * K] += val;
                }
            }
        }
    }

    if (sounder.noise_power > 0.0)
    {
        std::mt19937_64 rng(sounder.noise_seed);
        std::normal_distribution<double> dist(0.0, std::sqrt(sounder.noise_power / 2.0));
        for (auto &v : out.data)
            v += cdouble(dist(rng), dist(rng));
    }
    return out;
}

double PowerDelayProfile::total_power() const
{
    double acc = 0.0;
    for (double t : taps)
        acc += t;
    return acc;
}

PowerDelayProfile ctf_to_cir(const CtfSlice &ctf, const SounderModel &sounder)
{
    const std::size_t K = ctf.K;
    if (K < 2)
        throw std::invalid_argument("ctf_to_cir: need at least two tones");
    if (sounder.num_tones() != K)
        throw std::invalid_argument("ctf_to_cir: tone grid size mismatch");
    if (!sounder.uniform_grid())
        throw std::invalid_argument("ctf_to_cir: non-uniform tone grid unsupported");

    double spacing = sounder.tone_frequencies[1] - sounder.tone_frequencies[0];
    double bandwidth = spacing * double(K);
    double delay_resolution = 1.0 / bandwidth;

    PowerDelayProfile pdp;
    pdp.taps.assign(K, 0.0);
    pdp.delays.resize(K);
    for (std::size_t u = 0; u < K; u++)
        pdp.delays[u] = double(u) * delay_resolution;

    Eigen::FFT<double> fft;
    std::vector<cdouble> freq(K), time(K);
    const double scale = std::sqrt(double(K)); // Parseval bin-for-tone

    for (std::size_t m = 0; m < ctf.M; m++)
        for (std::size_t n = 0; n < ctf.N; n++)
        {
            const cdouble *h = ctf.pair(m, n);
            std::copy(h, h + K, freq.begin());
            fft.inv(time, freq);
            for (std::size_t u = 0; u < K; u++)
                pdp.taps[u] += std::norm(time[u] * scale);
        }
    return pdp;
}

ChannelTensor normalize_channel(const ChannelTensor &full_tensor, bool per_tone_unit_mean)
{
    double total = full_tensor.squared_norm();
    if (total <= 0.0)
        throw std::invalid_argument("normalize_channel: all-zero tensor");

    double count = double(full_tensor.M) * double(full_tensor.N) *
                   double(full_tensor.I) * double(full_tensor.K);
    double factor = std::sqrt(count / total);
    if (!per_tone_unit_mean)
        factor /= std::sqrt(double(full_tensor.K));

    ChannelTensor out = full_tensor;
    for (auto &v : out.data)
        v *= factor;
    return out;
}

ChannelTensor extract_subchannel(const ChannelTensor &full_tensor,
                                 const std::vector<std::size_t> &port_rows)
{
    for (std::size_t r : port_rows)
        if (r >= full_tensor.M)
            throw std::invalid_argument("extract_subchannel: row index out of range");

    ChannelTensor out(port_rows.size(), full_tensor.N, full_tensor.I, full_tensor.K);
    const std::size_t row_len = full_tensor.N * full_tensor.K;
    for (std::size_t i = 0; i < full_tensor.I; i++)
        for (std::size_t m = 0; m < port_rows.size(); m++)
        {
            const cdouble *src =
                full_tensor.data.data() + (i * full_tensor.M + port_rows[m]) * row_len;
            cdouble *dst = out.data.data() + (i * out.M + m) * row_len;
            std::copy(src, src + row_len, dst);
        }
    return out;
}

} // namespace hmdchan
