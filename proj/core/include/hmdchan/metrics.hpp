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
#include "hmdchan/channel_types.hpp"

#include <limits>
#include <vector>

namespace hmdchan {

/// Per-snapshot frequency-averaged gains of one (position, scenario) pair.
/// grand_mean defaults to the arithmetic mean of the entries but can be
/// pinned externally.
struct GainSeries
{
    std::vector<double> mean_gain; // eta_bar[i], linear
    double grand_mean = 0.0;       // eta_bar_bar

    static GainSeries from_gains(std::vector<double> gains);
};

/// Estimator variants where the printed formula and the conventional
/// estimator differ.
enum class EstimatorMode { literal, conventional };

/// Frequency-averaged Frobenius power of a slice: mean over tones of
/// ||H[k]||_F^2.
double mean_gain(const CtfSlice &slice);

/// Per-tone Frobenius power eta[k] = ||H[k]||_F^2.
std::vector<double> tone_gains(const CtfSlice &slice);

/// 10 log10(eta_q / eta_8); <= 0 dB whenever the numerator slice is a
/// row subset of the denominator. Throws std::invalid_argument when the
/// reference gain is zero.
double gain_ratio_db(double subset_mean_gain, double full_mean_gain);

/// Gain spread across snapshots in the log domain. The literal mode keeps
/// the (10/I) prefactor outside the square root; conventional mode is the
/// usual 10 sqrt((1/I) sum log10^2) estimator. Throws on zero gains or
/// fewer than two snapshots.
double gain_std_db(const GainSeries &series, EstimatorMode mode = EstimatorMode::literal);

/// Normalized gain autocorrelation at lag j. Default (conventional) mode
/// uses the full-series denominator so r(0) = 1; literal mode restricts the
/// denominator to snapshots j .. I-j-1. Throws on a constant series.
double gain_autocorrelation(const GainSeries &series, std::size_t lag,
                            EstimatorMode mode = EstimatorMode::conventional);

/// 10 log10 of summed LoS gain over summed OLoS gain across the first
/// num_snapshots entries of each series.
double blockage_ratio_db(const GainSeries &los, const GainSeries &olos,
                         std::size_t num_snapshots);

/// Square root of the second central moment of the normalized PDP.
double rms_delay_spread(const PowerDelayProfile &pdp);

/// First moment of the normalized PDP.
double mean_excess_delay(const PowerDelayProfile &pdp);

/// Frequency-selective fading figure: sum_k (eta[k] - eta_bar)^2 / eta_bar^2.
/// per_tone_average divides the literal sum by K. Zero for flat channels.
double frequency_selective_fading(const CtfSlice &slice, bool per_tone_average = false);

/// Eigenvalues of H H^H in descending order (squared singular values).
std::vector<double> eigenmodes(const Eigen::MatrixXcd &channel);

/// Eigenvalues of the k-th tone matrix of a tensor snapshot.
std::vector<double> tone_eigenmodes(const ChannelTensor &tensor, std::size_t i,
                                    std::size_t k);

/// Eigenvalues averaged across all tones of a tensor snapshot.
std::vector<double> mean_eigenmodes(const ChannelTensor &tensor, std::size_t i);

struct CapacityConfig
{
    double snr = 10.0;          // E_s / N_0, linear
    std::size_t max_streams = std::numeric_limits<std::size_t>::max(); // R_lim
    bool per_tone = false;
};

struct CapacityResult
{
    double capacity;                  // bits/s/Hz
    std::vector<double> allocation;   // rho per eigenmode
};

/// Waterfilling capacity over the top min(R_lim, #eigenvalues) eigenmodes
/// with total power budget M_Q: maximizes
/// sum_r log2(1 + snr rho_r lambda_r / M_Q), sum rho <= M_Q.
/// R_lim = 1 reduces to dominant eigenmode transmission.
CapacityResult waterfilling_capacity(const std::vector<double> &eigenvalues,
                                     const CapacityConfig &config,
                                     std::size_t num_hmd_ports);

/// Empirical percentile with linear interpolation between closest ranks.
/// Throws std::invalid_argument on an empty sample set.
double minimal_service(std::vector<double> capacity_samples, double percentile = 3.0);

enum class CorrelationMode { second_moment, pearson };

/// Mean off-diagonal entry of the normalized per-port-pair |H|^2
/// correlation matrix across tones. second_moment is the literal
/// no-mean-subtraction form; pearson subtracts per-pair means and skips
/// zero-variance pairs.
double gain_correlation(const CtfSlice &slice,
                        CorrelationMode mode = CorrelationMode::second_moment);

struct AzimuthSpread
{
    double sigma_phi; // circular log-spread
    double lambda;    // alternative angular spread definition
};

/// Power-weighted circular spread of MPC arrival azimuths:
/// sigma_phi = sqrt(-2 log10 |sum e^{j phi} p / sum p|). Returns +inf
/// sentinels when the circular mean vanishes. Throws on zero total power.
AzimuthSpread azimuth_spread(const std::vector<Mpc> &mpcs);

} // namespace hmdchan
