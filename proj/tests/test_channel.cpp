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
#include "hmdchan/channel_io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace hmdchan;

namespace {

Mpc simple_path(double gain, double delay, double az_arrival, double az_departure)
{
    Mpc mpc;
    mpc.gamma = gain * Eigen::Matrix2cd::Identity();
    mpc.delay = delay;
    mpc.azimuth_arrival = az_arrival;
    mpc.azimuth_departure = az_departure;
    mpc.elevation_arrival = 0.0;
    mpc.elevation_departure = 0.0;
    return mpc;
}

AntennaPort port_at(const Eigen::Vector3d &pos, int pol, double boresight_az)
{
    return AntennaPort{pos, pol, boresight_az, 0.0};
}

CtfSlice random_slice(std::size_t M, std::size_t N, std::size_t K, std::uint64_t seed)
{
    CtfSlice slice(M, N, K);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto &v : slice.data)
        v = cdouble(dist(rng), dist(rng));
    return slice;
}

} // namespace

TEST_CASE("sounder tone grid")
{
    SounderModel s = make_sounder(28e9, 768e6, 2048);
    REQUIRE(s.num_tones() == 2048);
    CHECK(s.tone_frequencies.front() == doctest::Approx(28e9 - 384e6));
    CHECK(s.tone_frequencies[1] - s.tone_frequencies[0] ==
          doctest::Approx(768e6 / 2048.0));
    CHECK(s.uniform_grid());
    CHECK(s.sampling_interval == doctest::Approx(18.3e-6));

    SounderModel warped = s;
    warped.tone_frequencies[100] += 1e5;
    CHECK_FALSE(warped.uniform_grid());
}

TEST_CASE("hmd and ap port enumeration")
{
    HmdRing ring;
    ring.layout.element_spacing = 0.00535;
    auto ports = hmd_ports(ring);
    REQUIRE(ports.size() == 256);

    // forward array block: boresight 0, phase centers near (radius, 0, 0)
    for (std::size_t p = 192; p < 224; p++)
    {
        CHECK(ports[p].boresight_azimuth == doctest::Approx(0.0));
        CHECK(ports[p].position.x() == doctest::Approx(ring.ring_radius));
    }
    // H/V pairs share positions
    CHECK(ports[192].polarization == 0);
    CHECK(ports[193].polarization == 1);
    CHECK((ports[192].position - ports[193].position).norm() == doctest::Approx(0.0));
    // adjacent columns are half-wavelength apart
    CHECK((ports[192].position - ports[194].position).norm() ==
          doctest::Approx(ring.layout.element_spacing));

    ApArray ap;
    ap.element_spacing = 0.00535;
    auto tx = ap_ports(ap);
    CHECK(tx.size() == 128);
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto &p : tx)
        centroid += p.position;
    CHECK(centroid.norm() / double(tx.size()) == doctest::Approx(0.0));
}

TEST_CASE("single-path transfer function")
{
    SounderModel sounder = make_sounder(28e9, 768e6, 16);
    std::vector<AntennaPort> rx{port_at(Eigen::Vector3d::Zero(), 0, pi)};
    std::vector<AntennaPort> tx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};

    const double gain = 0.01;
    const double delay = 20e-9;
    auto slice =
        synthesize_ctf({simple_path(gain, delay, pi, 0.0)}, rx, tx, sounder, {});

    REQUIRE(slice.data.size() == 16);
    for (std::size_t k = 0; k < 16; k++)
    {
        cdouble expected =
            gain * std::polar(1.0, -2.0 * pi * sounder.tone_frequencies[k] * delay);
        CHECK(std::abs(slice.at(0, 0, k) - expected) < 1e-12);
    }

    SUBCASE("cross-polarized pair sees only the off-diagonal entry")
    {
        std::vector<AntennaPort> rxv{port_at(Eigen::Vector3d::Zero(), 1, pi)};
        auto cross =
            synthesize_ctf({simple_path(gain, delay, pi, 0.0)}, rxv, tx, sounder, {});
        CHECK(cross.squared_norm() == doctest::Approx(0.0)); // identity gamma
    }
    SUBCASE("system response multiplies every tone")
    {
        SounderModel shaped = sounder;
        shaped.system_response.assign(16, cdouble(0.0, 2.0));
        auto out =
            synthesize_ctf({simple_path(gain, delay, pi, 0.0)}, rx, tx, shaped, {});
        CHECK(out.squared_norm() == doctest::Approx(4.0 * slice.squared_norm()));
    }
}

TEST_CASE("synthesis is linear in the path set")
{
    SounderModel sounder = make_sounder(28e9, 100e6, 8);
    HmdRing ring;
    ring.layout.rows = 1;
    ring.layout.cols = 2;
    ring.layout.element_spacing = 0.00535;
    ring.num_arrays = 4;
    ring.forward_index = 2;
    auto rx = hmd_ports(ring);
    std::vector<AntennaPort> tx{port_at(Eigen::Vector3d::Zero(), 0, 0.0),
                                port_at(Eigen::Vector3d::Zero(), 1, 0.0)};

    std::vector<Mpc> a{simple_path(0.02, 15e-9, 2.0, 0.3)};
    std::vector<Mpc> b{simple_path(0.01, 40e-9, -1.0, -0.6),
                       simple_path(0.005, 55e-9, 0.4, 1.1)};
    std::vector<Mpc> both = a;
    both.insert(both.end(), b.begin(), b.end());

    auto sa = synthesize_ctf(a, rx, tx, sounder, {});
    auto sb = synthesize_ctf(b, rx, tx, sounder, {});
    auto sab = synthesize_ctf(both, rx, tx, sounder, {});
    for (std::size_t i = 0; i < sab.data.size(); i++)
        CHECK(std::abs(sab.data[i] - (sa.data[i] + sb.data[i])) < 1e-12);
}

TEST_CASE("orientation rotates the arrival field")
{
    SounderModel sounder = make_sounder(28e9, 100e6, 4);
    std::vector<AntennaPort> rx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};
    std::vector<AntennaPort> tx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};

    const double yaw = 0.7;
    Orientation rotated{yaw, 0.0, 0.0};

    // Yawing the head by psi is the same as moving the source by -psi.
    auto a = synthesize_ctf({simple_path(0.01, 10e-9, 1.0, 0.0)}, rx, tx, sounder,
                            rotated);
    auto b = synthesize_ctf({simple_path(0.01, 10e-9, 1.0 - yaw, 0.0)}, rx, tx,
                            sounder, {});
    for (std::size_t i = 0; i < a.data.size(); i++)
        CHECK(std::abs(a.data[i] - b.data[i]) < 1e-12);

    // Sources behind the patch field of view contribute nothing.
    auto behind = synthesize_ctf({simple_path(0.01, 10e-9, pi, 0.0)}, rx, tx,
                                 sounder, {});
    CHECK(behind.squared_norm() == doctest::Approx(0.0));
}

TEST_CASE("doppler advances with the switching schedule")
{
    SounderModel sounder = make_sounder(28e9, 100e6, 2);
    std::vector<AntennaPort> rx{port_at(Eigen::Vector3d::Zero(), 0, 0.0),
                                port_at(Eigen::Vector3d::Zero(), 0, 0.0)};
    std::vector<AntennaPort> tx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};

    Mpc path = simple_path(0.01, 10e-9, 0.0, 0.0);
    path.doppler = 200.0;
    auto slice = synthesize_ctf({path}, rx, tx, sounder, {});

    // ports are colocated, so the only difference is the Doppler phasor at
    // t = (m*N + n) * sampling_interval
    cdouble ratio = slice.at(1, 0, 0) / slice.at(0, 0, 0);
    cdouble expected = std::polar(1.0, 2.0 * pi * 200.0 * sounder.sampling_interval);
    CHECK(std::abs(ratio - expected) < 1e-12);

    path.doppler = 0.0;
    auto still = synthesize_ctf({path}, rx, tx, sounder, {});
    CHECK(std::abs(still.at(1, 0, 0) - still.at(0, 0, 0)) < 1e-15);
}

TEST_CASE("noise injection is deterministic per seed")
{
    SounderModel sounder = make_sounder(28e9, 100e6, 32);
    sounder.noise_power = 1e-6;
    std::vector<AntennaPort> rx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};
    std::vector<AntennaPort> tx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};
    std::vector<Mpc> paths{simple_path(0.01, 10e-9, 0.0, 0.0)};

    auto a = synthesize_ctf(paths, rx, tx, sounder, {});
    auto b = synthesize_ctf(paths, rx, tx, sounder, {});
    CHECK(a.data == b.data);

    sounder.noise_seed = 7;
    auto c = synthesize_ctf(paths, rx, tx, sounder, {});
    CHECK(a.data != c.data);
}

TEST_CASE("impulse response and delay profile")
{
    SounderModel sounder = make_sounder(28e9, 768e6, 128);

    SUBCASE("Parseval holds bin for tone")
    {
        auto slice = random_slice(3, 2, 128, 11);
        auto pdp = ctf_to_cir(slice, sounder);
        CHECK(pdp.total_power() ==
              doctest::Approx(slice.squared_norm()).epsilon(1e-9));
        CHECK(pdp.delays[1] - pdp.delays[0] == doctest::Approx(1.0 / 768e6));
    }
    SUBCASE("a single path lands in its delay bin")
    {
        double resolution = 1.0 / 768e6;
        double delay = 17.0 * resolution;
        std::vector<AntennaPort> rx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};
        std::vector<AntennaPort> tx{port_at(Eigen::Vector3d::Zero(), 0, 0.0)};
        auto slice =
            synthesize_ctf({simple_path(1.0, delay, 0.0, 0.0)}, rx, tx, sounder, {});
        auto pdp = ctf_to_cir(slice, sounder);

        std::size_t peak = 0;
        for (std::size_t u = 1; u < pdp.taps.size(); u++)
            if (pdp.taps[u] > pdp.taps[peak])
                peak = u;
        CHECK(peak == 17);
        CHECK(pdp.taps[peak] / pdp.total_power() > 0.99);
    }
    SUBCASE("non-uniform grids rejected")
    {
        SounderModel warped = sounder;
        warped.tone_frequencies[5] += 1e5;
        auto slice = random_slice(1, 1, 128, 3);
        CHECK_THROWS_AS(ctf_to_cir(slice, warped), std::invalid_argument);
    }
}

TEST_CASE("channel normalization")
{
    ChannelTensor tensor(4, 3, 2, 8);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist(0.0, 2.0);
    for (auto &v : tensor.data)
        v = cdouble(dist(rng), dist(rng));

    SUBCASE("unit mean per entry per tone")
    {
        auto norm = normalize_channel(tensor);
        double count = 4.0 * 3.0 * 2.0 * 8.0;
        CHECK(norm.squared_norm() == doctest::Approx(count).epsilon(1e-12));
    }
    SUBCASE("per-snapshot-entry unit energy variant")
    {
        auto norm = normalize_channel(tensor, false);
        CHECK(norm.squared_norm() == doctest::Approx(4.0 * 3.0 * 2.0).epsilon(1e-12));
    }
    SUBCASE("normalization and extraction commute up to the common factor")
    {
        std::vector<std::size_t> rows{1, 3};
        auto nfull = normalize_channel(tensor);
        auto sub_then = extract_subchannel(nfull, rows);
        auto sub = extract_subchannel(tensor, rows);

        // the ratio of subset to full power is invariant
        CHECK(sub_then.squared_norm() / nfull.squared_norm() ==
              doctest::Approx(sub.squared_norm() / tensor.squared_norm())
                  .epsilon(1e-12));
        double factor = std::sqrt((4.0 * 3.0 * 2.0 * 8.0) / tensor.squared_norm());
        for (std::size_t i = 0; i < sub.data.size(); i++)
            CHECK(std::abs(sub_then.data[i] - factor * sub.data[i]) < 1e-12);
    }
    SUBCASE("all-zero tensors rejected")
    {
        ChannelTensor zero(2, 2, 1, 4);
        CHECK_THROWS_AS(normalize_channel(zero), std::invalid_argument);
    }
}

TEST_CASE("subchannel extraction picks the requested rows")
{
    ChannelTensor tensor(4, 2, 2, 3);
    for (std::size_t i = 0; i < tensor.data.size(); i++)
        tensor.data[i] = cdouble(double(i), -double(i));

    auto sub = extract_subchannel(tensor, {2, 0});
    CHECK(sub.M == 2);
    for (std::size_t i = 0; i < 2; i++)
        for (std::size_t n = 0; n < 2; n++)
            for (std::size_t k = 0; k < 3; k++)
            {
                CHECK(sub.at(i, 0, n, k) == tensor.at(i, 2, n, k));
                CHECK(sub.at(i, 1, n, k) == tensor.at(i, 0, n, k));
            }
    CHECK_THROWS_AS(extract_subchannel(tensor, {4}), std::invalid_argument);
}

TEST_CASE("channel container round trip")
{
    auto dir = std::filesystem::temp_directory_path() / "hmdchan_io_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "slice.hmdc").string();

    auto slice = random_slice(4, 2, 16, 21);
    ContainerMeta meta;
    meta.position = 3;
    meta.scenario = 1;
    meta.snapshot = 12;
    meta.first_tone = 28e9 - 384e6;
    meta.tone_spacing = 768e6 / 2048.0;
    meta.port_map = {192, 193, 194, 195};

    write_container(path, meta, slice);
    Container back = read_container(path);

    CHECK(back.meta.position == 3);
    CHECK(back.meta.scenario == 1);
    CHECK(back.meta.snapshot == 12);
    CHECK(back.meta.first_tone == doctest::Approx(meta.first_tone));
    CHECK(back.meta.tone_spacing == doctest::Approx(meta.tone_spacing));
    CHECK(back.meta.port_map == meta.port_map);
    REQUIRE(back.slice.M == 4);
    REQUIRE(back.slice.N == 2);
    REQUIRE(back.slice.K == 16);
    for (std::size_t i = 0; i < slice.data.size(); i++)
    {
        // payload is stored as float32 pairs
        CHECK(back.slice.data[i].real() ==
              doctest::Approx(slice.data[i].real()).epsilon(1e-6));
        CHECK(back.slice.data[i].imag() ==
              doctest::Approx(slice.data[i].imag()).epsilon(1e-6));
    }

    SUBCASE("missing or corrupt files rejected")
    {
        CHECK_THROWS_AS(read_container((dir / "absent.hmdc").string()),
                        std::runtime_error);
        std::FILE *f = std::fopen((dir / "bad.hmdc").string().c_str(), "wb");
        std::fputs("NOPE", f);
        std::fclose(f);
        CHECK_THROWS_AS(read_container((dir / "bad.hmdc").string()),
                        std::runtime_error);
    }
    std::filesystem::remove_all(dir);
}
