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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace hmdchan;

TEST_CASE("patch element gain")
{
    PatchElementPattern pat{};
    CHECK(patch_element_gain(pat, 0.0) == doctest::Approx(1.0));
    CHECK(patch_element_gain(pat, pi / 4.0) == doctest::Approx(0.5)); // -3 dB at 45 deg
    CHECK(patch_element_gain(pat, -pi / 4.0) == doctest::Approx(0.5));
    CHECK(patch_element_gain(pat, 100.0 * pi / 180.0) == 0.0);
    CHECK(patch_element_gain(pat, pi) == 0.0);
    // wrapping: 350 deg offset is 10 deg off boresight
    CHECK(patch_element_gain(pat, 350.0 * pi / 180.0) ==
          doctest::Approx(std::pow(std::cos(10.0 * pi / 180.0), 2)));
}

TEST_CASE("compound gain")
{
    SUBCASE("single boresight array")
    {
        CHECK(compound_gain_analytical(1.0, 0.0, 1, 1, 1) == doctest::Approx(1.0));
    }
    SUBCASE("Q=4 is flat in azimuth")
    {
        // cos^2(t) + cos^2(t - pi/2) = 1 within each quadrant pair
        for (int i = 0; i < 1000; i++)
        {
            double phi = 2.0 * pi * double(i) / 1000.0;
            CHECK(compound_gain_analytical(1.0, phi, 4, 1, 1) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("two opposing arrays have a null broadside")
    {
        CHECK(compound_gain_analytical(1.0, pi / 2.0, 2, 1, 1) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("array and AP element counts scale the gain")
    {
        CHECK(compound_gain_analytical(1.0, 0.0, 1, 16, 128) == doctest::Approx(2048.0));
    }
    SUBCASE("periodicity in 2pi/Q")
    {
        for (std::size_t q : {1u, 2u, 3u, 5u, 8u})
            for (int i = 0; i < 200; i++)
            {
                double phi = -pi + 2.0 * pi * double(i) / 200.0;
                CHECK(compound_gain_analytical(1.0, phi, q, 1, 1) ==
                      doctest::Approx(compound_gain_analytical(
                                          1.0, phi + 2.0 * pi / double(q), q, 1, 1))
                          .epsilon(1e-10));
            }
    }
    SUBCASE("zero arrays rejected")
    {
        CHECK_THROWS_AS(compound_gain_analytical(1.0, 0.0, 0, 1, 1),
                        std::invalid_argument);
    }
    SUBCASE("uniform-azimuth mean gain is Q/2 of a single array-element pair")
    {
        // dense sweep oracle: E_phi[cos^2 clip] = 1/4 per array
        const int n = 100000;
        for (std::size_t q : {1u, 4u, 8u})
        {
            double acc = 0.0;
            for (int i = 0; i < n; i++)
                acc += compound_gain_analytical(1.0, 2.0 * pi * (i + 0.5) / n, q, 1, 1);
            CHECK(acc / n == doctest::Approx(double(q) / 4.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("port index map")
{
    ArrayLayout layout;
    layout.element_spacing = 0.00535;

    SUBCASE("array VII owns rows 193-224 (1-based)")
    {
        HmdConfiguration config{{6}, Facing::forward, AntennaMask{}};
        auto rows = port_index_map(config, layout);
        REQUIRE(rows.size() == 32);
        CHECK(rows.front() == 192);
        CHECK(rows.back() == 223);
    }
    SUBCASE("array I owns the first block")
    {
        HmdConfiguration config{{0}, Facing::forward, AntennaMask{}};
        auto rows = port_index_map(config, layout);
        CHECK(rows.front() == 0);
        CHECK(rows.back() == 31);
    }
    SUBCASE("1x1 mask on two arrays yields 4 ports")
    {
        HmdConfiguration config{{0, 4}, Facing::forward, AntennaMask{0, 0, 1, 1}};
        auto rows = port_index_map(config, layout);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0] == 0);
        CHECK(rows[1] == 1);
        CHECK(rows[2] == 4 * 32);
        CHECK(rows[3] == 4 * 32 + 1);
    }
    SUBCASE("full 8-array map is a permutation of 0..255")
    {
        HmdConfiguration config{{0, 1, 2, 3, 4, 5, 6, 7}, Facing::forward, AntennaMask{}};
        auto rows = port_index_map(config, layout);
        std::set<std::size_t> unique(rows.begin(), rows.end());
        CHECK(rows.size() == 256);
        CHECK(unique.size() == 256);
        CHECK(*unique.begin() == 0);
        CHECK(*unique.rbegin() == 255);
    }
    SUBCASE("empty configuration rejected")
    {
        HmdConfiguration config{{}, Facing::forward, AntennaMask{}};
        CHECK_THROWS_AS(port_index_map(config, layout), std::invalid_argument);
        HmdConfiguration zero_mask{{0}, Facing::forward, AntennaMask{0, 0, 0, 0}};
        CHECK_THROWS_AS(port_index_map(zero_mask, layout), std::invalid_argument);
    }
}

TEST_CASE("configuration presets and mirroring")
{
    CHECK(preset_configuration(1).active_arrays == std::vector<std::size_t>{6});
    CHECK(preset_configuration(2).active_arrays == std::vector<std::size_t>{5, 7});
    CHECK(preset_configuration(3).active_arrays == std::vector<std::size_t>{5, 6, 7});
    CHECK(preset_configuration(4).active_arrays == std::vector<std::size_t>{0, 2, 4, 6});

    // forward/backward pairs are azimuth mirror images
    auto b1 = preset_configuration(1, Facing::backward);
    CHECK(b1.active_arrays == std::vector<std::size_t>{2}); // III
    auto b2 = preset_configuration(2, Facing::backward);
    CHECK(b2.active_arrays == std::vector<std::size_t>{1, 3}); // II, IV
    auto b4 = preset_configuration(4, Facing::backward);
    CHECK(b4.active_arrays == preset_configuration(4).active_arrays);

    // mirroring twice is the identity
    auto cfg = preset_configuration(3);
    CHECK(mirror_configuration(mirror_configuration(cfg)).active_arrays ==
          cfg.active_arrays);
}

TEST_CASE("hmd ring azimuths")
{
    HmdRing ring;
    ring.layout.element_spacing = 0.00535;
    CHECK(ring.array_azimuth(6) == doctest::Approx(0.0));          // VII forward
    CHECK(std::abs(ring.array_azimuth(2)) == doctest::Approx(pi)); // III backward
    CHECK(ring.array_azimuth(7) == doctest::Approx(pi / 4.0));
}

TEST_CASE("mobility pattern")
{
    MobilityPattern pattern;
    const double deg = pi / 180.0;

    SUBCASE("keyframes")
    {
        Orientation o0 = mobility_orientation(pattern, 0.0);
        CHECK(o0.yaw == doctest::Approx(0.0));
        CHECK(o0.pitch == doctest::Approx(0.0));

        Orientation o3 = mobility_orientation(pattern, 3.0);
        CHECK(o3.yaw == doctest::Approx(30.0 * deg));
        CHECK(o3.pitch == doctest::Approx(0.0));

        Orientation o18 = mobility_orientation(pattern, 18.0);
        CHECK(o18.yaw == doctest::Approx(30.0 * deg));
        CHECK(o18.pitch == doctest::Approx(-30.0 * deg));

        Orientation o33 = mobility_orientation(pattern, 33.0);
        CHECK(o33.yaw == doctest::Approx(60.0 * deg));
        CHECK(o33.pitch == doctest::Approx(-30.0 * deg));
    }
    SUBCASE("timing and snapshot count")
    {
        CHECK(pattern.total_duration() == doctest::Approx(33.0));
        CHECK(pattern.num_snapshots() == 34);
    }
    SUBCASE("out of range rejected")
    {
        CHECK_THROWS_AS(mobility_orientation(pattern, -0.1), std::out_of_range);
        CHECK_THROWS_AS(mobility_orientation(pattern, 33.1), std::out_of_range);
    }
    SUBCASE("continuity and angular rate bound")
    {
        const double dt = 1e-3;
        double prev_yaw = 0.0, prev_pitch = 0.0;
        for (double t = dt; t <= 33.0; t += dt)
        {
            Orientation o = mobility_orientation(pattern, t);
            double rate = std::hypot(o.yaw - prev_yaw, o.pitch - prev_pitch) / dt;
            CHECK(rate <= 10.0 * deg + 1e-9);
            prev_yaw = o.yaw;
            prev_pitch = o.pitch;
        }
    }
    SUBCASE("pivot translation during the pitched yaw")
    {
        Pose start = mobility_pose(pattern, 0.0);
        CHECK(start.translation.norm() == doctest::Approx(0.0));

        Pose pitched = mobility_pose(pattern, 18.0);
        CHECK(pitched.translation.norm() > 0.0);

        // the final yaw swings the center on an arc of radius sin(30) * 0.25
        Pose end = mobility_pose(pattern, 33.0);
        double radius = std::sin(30.0 * deg) * pattern.pivot_offset;
        CHECK(pitched.translation.head<2>().norm() == doctest::Approx(radius));
        CHECK(end.translation.head<2>().norm() == doctest::Approx(radius));
        CHECK((end.translation - pitched.translation).norm() > 0.01);
        // height drop is unchanged by the yaw
        CHECK(end.translation.z() == doctest::Approx(pitched.translation.z()));
    }
    SUBCASE("yaw sign is configurable")
    {
        MobilityPattern rightward = pattern;
        rightward.yaw_sign = -1.0;
        CHECK(mobility_orientation(rightward, 3.0).yaw == doctest::Approx(-30.0 * deg));
    }
}

TEST_CASE("orientation rotation matrix")
{
    Orientation o{30.0 * pi / 180.0, 0.0, 0.0};
    Eigen::Vector3d fwd = o.rotation() * Eigen::Vector3d::UnitX();
    CHECK(fwd.x() == doctest::Approx(std::cos(pi / 6.0)));
    CHECK(fwd.y() == doctest::Approx(std::sin(pi / 6.0)));
    CHECK(fwd.z() == doctest::Approx(0.0));

    // negative pitch points the nose below the horizon
    Orientation down{0.0, -30.0 * pi / 180.0, 0.0};
    CHECK((down.rotation() * Eigen::Vector3d::UnitX()).z() < 0.0);
}
