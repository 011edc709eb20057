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

#include "hmdchan/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmdchan {

namespace {

// Surface order: x=0, x=W, y=0, y=L, z=0 (floor), z=H (ceiling).
struct Surface
{
    int axis;     // 0=x, 1=y, 2=z
    double plane; // coordinate of the plane
};

std::array<Surface, 6> room_surfaces(const Scenario &sc)
{
    return {Surface{0, 0.0}, Surface{0, sc.room_width},
            Surface{1, 0.0}, Surface{1, sc.room_length},
            Surface{2, 0.0}, Surface{2, sc.room_height}};
}

Eigen::Vector3d mirror(const Eigen::Vector3d &p, const Surface &s)
{
    Eigen::Vector3d out = p;
    out[s.axis] = 2.0 * s.plane - p[s.axis];
    return out;
}

/// Intersection of the segment a -> b with the plane of surface s.
Eigen::Vector3d plane_intersection(const Eigen::Vector3d &a, const Eigen::Vector3d &b,
                                   const Surface &s)
{
    double denom = b[s.axis] - a[s.axis];
    double t = (s.plane - a[s.axis]) / denom;
    return a + t * (b - a);
}

double azimuth_of(const Eigen::Vector3d &v) { return std::atan2(v.y(), v.x()); }

double elevation_of(const Eigen::Vector3d &v)
{
    return std::atan2(v.z(), std::hypot(v.x(), v.y()));
}

/// Distance of point c to the 2-D segment a -> b, plus the normalized
/// position of the closest approach along the segment.
double segment_distance_2d(const Eigen::Vector2d &a, const Eigen::Vector2d &b,
                           const Eigen::Vector2d &c, double &t_closest)
{
    Eigen::Vector2d ab = b - a;
    double len2 = ab.squaredNorm();
    double t = (len2 > 0.0) ? (c - a).dot(ab) / len2 : 0.0;
    t_closest = std::clamp(t, 0.0, 1.0);
    return (a + t_closest * ab - c).norm();
}

/// Per-reflection polarization mixing: co-pol 1, cross-pol leakage x,
/// normalized to preserve power.
Eigen::Matrix2d reflection_mixing(double leakage_db)
{
    double x = std::pow(10.0, leakage_db / 20.0);
    Eigen::Matrix2d m;
    m << 1.0, x, x, 1.0;
    return m / std::sqrt(1.0 + x * x);
}

/// Build the MPC for a given ordered bounce sequence (possibly empty).
Mpc build_mpc(const Scenario &sc, const std::array<Surface, 6> &surfaces,
              const std::vector<std::size_t> &bounces)
{
    const Eigen::Vector3d &tx = sc.ap_position;
    const Eigen::Vector3d &rx = sc.hmd_position;

    // Image of the TX after reflecting through the bounce sequence in order.
    Eigen::Vector3d tx_image = tx;
    for (std::size_t s : bounces)
        tx_image = mirror(tx_image, surfaces[s]);

    double path_length = (rx - tx_image).norm();

    // Reflection points, walked backwards from the receiver.
    std::vector<Eigen::Vector3d> points(bounces.size() + 2);
    points.front() = tx;
    points.back() = rx;
    {
        Eigen::Vector3d img = tx_image;
        Eigen::Vector3d target = rx;
        for (std::size_t b = bounces.size(); b-- > 0;)
        {
            const Surface &s = surfaces[bounces[b]];
            Eigen::Vector3d hit = plane_intersection(img, target, s);
            points[b + 1] = hit;
            img = mirror(img, s); // undo the b-th mirror
            target = hit;
        }
    }

    Mpc mpc;
    mpc.reflection_order = int(bounces.size());
    mpc.delay = path_length / speed_of_light;

    Eigen::Vector3d dep = (points[1] - tx).normalized();
    Eigen::Vector3d arr = (points[points.size() - 2] - rx).normalized();
    mpc.azimuth_departure = azimuth_of(dep);
    mpc.elevation_departure = elevation_of(dep);
    mpc.azimuth_arrival = azimuth_of(arr);
    mpc.elevation_arrival = elevation_of(arr);

    double amplitude = sc.wavelength() / (4.0 * pi * path_length);
    Eigen::Matrix2d mixing = Eigen::Matrix2d::Identity();
    for (std::size_t s : bounces)
    {
        amplitude *= std::sqrt(sc.surface_reflectivity[s]);
        mixing = reflection_mixing(sc.cross_pol_leakage_db) * mixing;
    }
    double sign = (bounces.size() % 2 == 0) ? 1.0 : -1.0; // phase inversion per bounce
    mpc.gamma = (sign * amplitude) * mixing.cast<cdouble>();

    // Blockage: first 2-D segment passing within the cylinder radius.
    if (sc.blocker.present)
    {
        double walked = 0.0;
        for (std::size_t seg = 0; seg + 1 < points.size(); seg++)
        {
            Eigen::Vector2d a = points[seg].head<2>();
            Eigen::Vector2d b = points[seg + 1].head<2>();
            double seg_len = (points[seg + 1] - points[seg]).norm();
            double t;
            double dist = segment_distance_2d(a, b, sc.blocker.center, t);
            if (dist < sc.blocker.diameter / 2.0)
            {
                double d_tx = walked + t * seg_len;
                double d_rx = path_length - d_tx;
                if (d_tx > 0.0 && d_rx > 0.0)
                {
                    double att_db = gtd_blockage_attenuation(
                        d_tx, d_rx, sc.blocker.diameter, sc.carrier_frequency);
                    mpc.gamma *= std::pow(10.0, -att_db / 20.0);
                }
                break;
            }
            walked += seg_len;
        }
    }
    return mpc;
}

} // namespace

std::vector<Mpc> generate_mpcs(const Scenario &scenario, std::size_t max_reflection_order)
{
    if (max_reflection_order > 2)
        throw std::invalid_argument("generate_mpcs: max_reflection_order must be 0, 1 or 2");
    if ((scenario.ap_position - scenario.hmd_position).norm() < 1e-9)
        throw std::invalid_argument("generate_mpcs: AP and HMD positions coincide");

    auto surfaces = room_surfaces(scenario);
    std::vector<Mpc> mpcs;
    mpcs.push_back(build_mpc(scenario, surfaces, {}));

    if (max_reflection_order >= 1)
        for (std::size_t s = 0; s < 6; s++)
        {
            if (scenario.surface_reflectivity[s] <= 0.0)
                continue;
            mpcs.push_back(build_mpc(scenario, surfaces, {s}));
        }

    if (max_reflection_order >= 2)
        for (std::size_t s1 = 0; s1 < 6; s1++)
            for (std::size_t s2 = 0; s2 < 6; s2++)
            {
                if (s1 == s2)
                    continue;
                if (scenario.surface_reflectivity[s1] <= 0.0 ||
                    scenario.surface_reflectivity[s2] <= 0.0)
                    continue;
                mpcs.push_back(build_mpc(scenario, surfaces, {s1, s2}));
            }

    return mpcs;
}

std::complex<double> fresnel_integral(double v)
{
    double sign = (v < 0.0) ? -1.0 : 1.0;
    double upper = std::abs(v);
    if (upper == 0.0)
        return {0.0, 0.0};

    // Composite Simpson; the integrand oscillates faster as t grows,
    // so the interval count scales with v^2.
    std::size_t n = std::max<std::size_t>(200, std::size_t(60.0 * upper * upper));
    n = std::min<std::size_t>(n, 2'000'000);
    if (n % 2 != 0)
        n++;

    auto f = [](double t) {
        double phase = -pi * t * t / 2.0;
        return std::complex<double>(std::cos(phase), std::sin(phase));
    };

    double h = upper / double(n);
    std::complex<double> acc = f(0.0) + f(upper);
    for (std::size_t i = 1; i < n; i++)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * f(double(i) * h);
    return sign * acc * (h / 3.0);
}

double gtd_blockage_attenuation(double d_tx, double d_rx, double width, double frequency)
{
    if (d_tx <= 0.0 || d_rx <= 0.0)
        throw std::invalid_argument("gtd_blockage_attenuation: distances must be positive");
    if (width < 0.0)
        throw std::invalid_argument("gtd_blockage_attenuation: width must be non-negative");
    if (width == 0.0)
        return 0.0;

    double lambda = speed_of_light / frequency;
    double v = (width / 2.0) * std::sqrt(2.0 * (d_tx + d_rx) / (lambda * d_tx * d_rx));

    // Half-plane diffraction field past one absorbing edge at parameter v:
    //   E/E0 = (1+j)/2 * int_v^inf exp(-j pi t^2 / 2) dt.
    const std::complex<double> half_plane(0.5, -0.5); // int_0^inf
    std::complex<double> edge_field =
        std::complex<double>(0.5, 0.5) * (half_plane - fresnel_integral(v));

    // The two edges at +-width/2 are symmetric and add coherently.
    double total = 2.0 * std::abs(edge_field);
    double att_db = -20.0 * std::log10(total);
    return std::max(att_db, 0.0);
}

double path_loss(const PathLossModel &model, double d)
{
    if (d <= 0.0)
        throw std::invalid_argument("path_loss: distance must be positive");
    return model.reference_loss +
           10.0 * model.exponent * std::log10(d / model.reference_distance) +
           model.shadow_fading;
}

PleFit fit_ple(const std::vector<std::pair<double, double>> &samples)
{
    if (samples.size() < 2)
        throw std::invalid_argument("fit_ple: need at least two samples");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto &[d, gain] : samples)
    {
        double x = std::log10(d);
        double y = 10.0 * std::log10(gain);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = double(samples.size());
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-15)
        throw std::invalid_argument("fit_ple: all distances equal, singular fit");

    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    return PleFit{slope / -10.0, -intercept};
}

} // namespace hmdchan
