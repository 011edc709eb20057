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
#include "hmdchan/propagation.hpp"
#include "hmdchan/sim.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hmdchan;

namespace {

void bm_generate_mpcs(benchmark::State &state)
{
    Scenario scenario;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_mpcs(scenario, 2));
}
BENCHMARK(bm_generate_mpcs);

void bm_synthesize_ctf(benchmark::State &state)
{
    SimSetup setup;
    setup.num_tones = std::size_t(state.range(0));
    auto mpcs = generate_mpcs(setup.scenario, 2);
    auto rx = hmd_ports(setup.hmd_ring());
    auto tx = ap_ports(setup.ap_array());
    SounderModel sounder = setup.sounder();

    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize_ctf(mpcs, rx, tx, sounder, {}));
    state.SetItemsProcessed(state.iterations() * std::int64_t(rx.size()) *
                            std::int64_t(tx.size()) *
                            std::int64_t(setup.num_tones));
}
BENCHMARK(bm_synthesize_ctf)->Arg(32)->Arg(128);

void bm_ctf_to_cir(benchmark::State &state)
{
    const std::size_t K = 512;
    SounderModel sounder = make_sounder(28e9, 768e6, K);
    CtfSlice slice(8, 8, K);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto &v : slice.data)
        v = cdouble(dist(rng), dist(rng));

    for (auto _ : state)
        benchmark::DoNotOptimize(ctf_to_cir(slice, sounder));
}
BENCHMARK(bm_ctf_to_cir);

void bm_waterfilling(benchmark::State &state)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(0.0, 4.0);
    std::vector<double> eigs(16);
    for (auto &e : eigs)
        e = dist(rng);
    CapacityConfig cap;
    cap.snr = 10.0;

    for (auto _ : state)
        benchmark::DoNotOptimize(waterfilling_capacity(eigs, cap, 32));
}
BENCHMARK(bm_waterfilling);

void bm_gain_correlation(benchmark::State &state)
{
    CtfSlice slice(32, 16, 32);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto &v : slice.data)
        v = cdouble(dist(rng), dist(rng));

    for (auto _ : state)
        benchmark::DoNotOptimize(gain_correlation(slice));
}
BENCHMARK(bm_gain_correlation);

void bm_gtd_blockage(benchmark::State &state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(gtd_blockage_attenuation(1.5, 1.5, 0.15, 28e9));
}
BENCHMARK(bm_gtd_blockage);

} // namespace

BENCHMARK_MAIN();
