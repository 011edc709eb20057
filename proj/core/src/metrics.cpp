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

#include "hmdchan/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hmdchan {

GainSeries GainSeries::from_gains(std::vector<double> gains)
{
    GainSeries s;
    s.grand_mean = gains.empty()
        ? 0.0
        : std::accumulate(gains.begin(), gains.end(), 0.0) / double(gains.size());
    s.mean_gain = std::move(gains);
    return s;
}

double mean_gain(const CtfSlice &slice)
{
    if (slice.K == 0)
        throw std::invalid_argument("mean_gain: empty slice");
    return slice.squared_norm() / double(slice.K);
}

std::vector<double> tone_gains(const CtfSlice &slice)
{
    std::vector<double> gains(slice.K, 0.0);
    for (std::size_t m = 0; m < slice.M; m++)
        for (std::size_t n = 0; n < slice.N; n++)
        {
            const cdouble *h = slice.pair(m, n);
            for (std::size_t k = 0; k < slice.K; k++)
                gains[k] += std::norm(h[k]);
        }
    return gains;
}

double gain_ratio_db(double subset_mean_gain, double full_mean_gain)
{
    if (full_mean_gain <= 0.0)
        throw std::invalid_argument("gain_ratio_db: reference gain is zero");
    return 10.0 * std::log10(subset_mean_gain / full_mean_gain);
}

double gain_std_db(const GainSeries &series, EstimatorMode mode)
{
    const std::size_t I = series.mean_gain.size();
    if (I < 2)
        throw std::invalid_argument("gain_std_db: need at least two snapshots");
    if (series.grand_mean <= 0.0)
        throw std::invalid_argument("gain_std_db: non-positive grand mean");

    double acc = 0.0;
    for (double g : series.mean_gain)
    {
        if (g <= 0.0)
            throw std::invalid_argument("gain_std_db: zero gain in series");
        double l = std::log10(g / series.grand_mean);
        acc += l * l;
    }
    if (mode == EstimatorMode::literal)
        return (10.0 / double(I)) * std::sqrt(acc);
    return 10.0 * std::sqrt(acc / double(I));
}

double gain_autocorrelation(const GainSeries &series, std::size_t lag, EstimatorMode mode)
{
    const std::size_t I = series.mean_gain.size();
    if (lag >= I)
        throw std::invalid_argument("gain_autocorrelation: lag out of range");

    const double mu = series.grand_mean;
    double num = 0.0;
    for (std::size_t i = 0; i + lag < I; i++)
        num += (series.mean_gain[i] - mu) * (series.mean_gain[i + lag] - mu);

    double den = 0.0;
    if (mode == EstimatorMode::literal)
    {
        for (std::size_t i = lag; i + lag < I; i++)
        {
            double d = series.mean_gain[i] - mu;
            den += d * d;
        }
    }
    else
    {
        for (double g : series.mean_gain)
        {
            double d = g - mu;
            den += d * d;
        }
    }
    if (den <= 0.0)
        throw std::invalid_argument("gain_autocorrelation: zero-variance series");
    return num / den;
}

double blockage_ratio_db(const GainSeries &los, const GainSeries &olos,
                         std::size_t num_snapshots)
{
    if (num_snapshots == 0 || num_snapshots > los.mean_gain.size() ||
        num_snapshots > olos.mean_gain.size())
        throw std::invalid_argument("blockage_ratio_db: snapshot count out of range");

    double num = std::accumulate(los.mean_gain.begin(),
                                 los.mean_gain.begin() + num_snapshots, 0.0);
    double den = std::accumulate(olos.mean_gain.begin(),
                                 olos.mean_gain.begin() + num_snapshots, 0.0);
    if (den <= 0.0)
        throw std::invalid_argument("blockage_ratio_db: zero OLoS gain");
    return 10.0 * std::log10(num / den);
}

namespace {

void pdp_moments(const PowerDelayProfile &pdp, double &first, double &second)
{
    double total = pdp.total_power();
    if (total <= 0.0)
        throw std::invalid_argument("delay spread: zero-power PDP");
    first = 0.0;
    second = 0.0;
    for (std::size_t u = 0; u < pdp.taps.size(); u++)
    {
        first += pdp.taps[u] * pdp.delays[u];
        second += pdp.taps[u] * pdp.delays[u] * pdp.delays[u];
    }
    first /= total;
    second /= total;
}

} // namespace

double rms_delay_spread(const PowerDelayProfile &pdp)
{
    double first, second;
    pdp_moments(pdp, first, second);
    return std::sqrt(std::max(second - first * first, 0.0));
}

double mean_excess_delay(const PowerDelayProfile &pdp)
{
    double first, second;
    pdp_moments(pdp, first, second);
    return first;
}

double frequency_selective_fading(const CtfSlice &slice, bool per_tone_average)
{
    if (slice.K < 2)
        throw std::invalid_argument("frequency_selective_fading: need K >= 2");
    std::vector<double> gains = tone_gains(slice);
    double mean = std::accumulate(gains.begin(), gains.end(), 0.0) / double(slice.K);
    if (mean <= 0.0)
        throw std::invalid_argument("frequency_selective_fading: zero mean gain");

    double acc = 0.0;
    for (double g : gains)
        acc += (g - mean) * (g - mean);
    acc /= mean * mean;
    return per_tone_average ? acc / double(slice.K) : acc;
}

std::vector<double> eigenmodes(const Eigen::MatrixXcd &channel)
{
    // Eigenvalues of H H^H via the Gram matrix on the smaller dimension.
    Eigen::MatrixXcd gram;
    if (channel.rows() <= channel.cols())
        gram = channel * channel.adjoint();
    else
        gram = channel.adjoint() * channel;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram,
                                                           Eigen::EigenvaluesOnly);
    Eigen::VectorXd vals = solver.eigenvalues();
    std::vector<double> out(vals.size());
    for (Eigen::Index r = 0; r < vals.size(); r++)
        out[r] = std::max(vals[vals.size() - 1 - r], 0.0); // descending
    return out;
}

namespace {

Eigen::MatrixXcd tone_matrix(const ChannelTensor &tensor, std::size_t i, std::size_t k)
{
    Eigen::MatrixXcd h(tensor.M, tensor.N);
    for (std::size_t m = 0; m < tensor.M; m++)
        for (std::size_t n = 0; n < tensor.N; n++)
            h(m, n) = tensor.at(i, m, n, k);
    return h;
}

} // namespace

std::vector<double> tone_eigenmodes(const ChannelTensor &tensor, std::size_t i,
                                    std::size_t k)
{
    return eigenmodes(tone_matrix(tensor, i, k));
}

std::vector<double> mean_eigenmodes(const ChannelTensor &tensor, std::size_t i)
{
    std::vector<double> acc;
    for (std::size_t k = 0; k < tensor.K; k++)
    {
        std::vector<double> vals = tone_eigenmodes(tensor, i, k);
        if (acc.empty())
            acc.assign(vals.size(), 0.0);
        for (std::size_t r = 0; r < vals.size(); r++)
            acc[r] += vals[r];
    }
    for (double &v : acc)
        v /= double(tensor.K);
    return acc;
}

CapacityResult waterfilling_capacity(const std::vector<double> &eigenvalues,
                                     const CapacityConfig &config,
                                     std::size_t num_hmd_ports)
{
    if (config.snr <= 0.0)
        throw std::invalid_argument("waterfilling_capacity: SNR must be positive");
    if (num_hmd_ports == 0)
        throw std::invalid_argument("waterfilling_capacity: need at least one port");

    const double budget = double(num_hmd_ports);
    const double snr_per_port = config.snr / double(num_hmd_ports);

    // Streams sorted by eigenvalue, capped at R_lim.
    std::vector<std::size_t> order(eigenvalues.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return eigenvalues[a] > eigenvalues[b]; });
    std::size_t r_max = std::min({order.size(), config.max_streams, num_hmd_ports});

    std::vector<double> gains; // per-stream effective gain snr rho lambda / M
    gains.reserve(r_max);
    for (std::size_t r = 0; r < r_max; r++)
    {
        double g = snr_per_port * eigenvalues[order[r]];
        if (g > 0.0)
            gains.push_back(g);
    }

    CapacityResult result;
    result.allocation.assign(eigenvalues.size(), 0.0);
    result.capacity = 0.0;
    if (gains.empty())
        return result;

    // Exact water level per active set; peel streams that would go negative.
    std::size_t active = gains.size();
    double level = 0.0;
    while (active > 0)
    {
        double inv_sum = 0.0;
        for (std::size_t r = 0; r < active; r++)
            inv_sum += 1.0 / gains[r];
        level = (budget + inv_sum) / double(active);
        if (level - 1.0 / gains[active - 1] >= 0.0)
            break;
        active--;
    }

    for (std::size_t r = 0; r < active; r++)
    {
        double rho = level - 1.0 / gains[r];
        result.allocation[order[r]] = rho;
        result.capacity += std::log2(1.0 + gains[r] * rho);
    }
    return result;
}

double minimal_service(std::vector<double> capacity_samples, double percentile)
{
    if (capacity_samples.empty())
        throw std::invalid_argument("minimal_service: empty sample set");
    std::sort(capacity_samples.begin(), capacity_samples.end());

    double rank = (percentile / 100.0) * double(capacity_samples.size() - 1);
    std::size_t lo = std::size_t(std::floor(rank));
    std::size_t hi = std::min(lo + 1, capacity_samples.size() - 1);
    double frac = rank - double(lo);
    return capacity_samples[lo] * (1.0 - frac) + capacity_samples[hi] * frac;
}

double gain_correlation(const CtfSlice &slice, CorrelationMode mode)
{
    const std::size_t P = slice.M * slice.N;
    const std::size_t K = slice.K;
    if (K < 2)
        throw std::invalid_argument("gain_correlation: need K >= 2");
    if (P < 2)
        throw std::invalid_argument("gain_correlation: need at least two port pairs");

    // Per-pair tone gain vectors g_p[k] = |H_p[k]|^2.
    Eigen::MatrixXd g(P, K);
    for (std::size_t m = 0; m < slice.M; m++)
        for (std::size_t n = 0; n < slice.N; n++)
        {
            const cdouble *h = slice.pair(m, n);
            for (std::size_t k = 0; k < K; k++)
                g(m * slice.N + n, k) = std::norm(h[k]);
        }

    std::vector<bool> keep(P, true);
    if (mode == CorrelationMode::pearson)
    {
        for (std::size_t p = 0; p < P; p++)
        {
            double mean = g.row(p).mean();
            g.row(p).array() -= mean;
            if (g.row(p).squaredNorm() <= 0.0)
                keep[p] = false; // zero-variance pair, excluded
        }
    }

    Eigen::MatrixXd corr = (g * g.transpose()) / double(K);

    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < P; a++)
    {
        if (!keep[a] || corr(a, a) <= 0.0)
            continue;
        for (std::size_t b = a + 1; b < P; b++)
        {
            if (!keep[b] || corr(b, b) <= 0.0)
                continue;
            acc += corr(a, b) / std::sqrt(corr(a, a) * corr(b, b));
            count++;
        }
    }
    if (count == 0)
        throw std::invalid_argument("gain_correlation: no valid port pairs");
    return acc / double(count);
}

AzimuthSpread azimuth_spread(const std::vector<Mpc> &mpcs)
{
    double total = 0.0;
    cdouble mean(0.0, 0.0);
    for (const Mpc &mpc : mpcs)
    {
        double p = mpc.power();
        total += p;
        mean += std::polar(p, mpc.azimuth_arrival);
    }
    if (total <= 0.0)
        throw std::invalid_argument("azimuth_spread: zero total MPC power");

    double magnitude = std::abs(mean) / total;
    if (magnitude <= 0.0)
    {
        double inf = std::numeric_limits<double>::infinity();
        return AzimuthSpread{inf, 1.0};
    }
    double sigma = std::sqrt(-2.0 * std::log10(magnitude));
    double lambda = std::sqrt(1.0 - std::pow(10.0, -sigma * sigma));
    return AzimuthSpread{sigma, lambda};
}

} // namespace hmdchan
