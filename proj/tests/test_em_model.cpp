// SPDX-License-Identifier: Apache-2.0
//
// capa-isac: waveform design and evaluation for continuous-aperture ISAC transmitters
// Copyright (C) 2026 capa-isac contributors
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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "capa/em_model.hpp"
#include "capa/rng.hpp"

using namespace capa;

namespace
{
    const Medium test_medium = Medium::from_frequency(2.4e9);

    Vec3 random_unit(RandomStream& rng)
    {
        Vec3 v;
        do
        {
            v = Vec3(rng.normal(), rng.normal(), rng.normal());
        } while (v.norm() < 1e-6);
        return v.normalized();
    }
} // namespace

TEST_CASE("propagation vector basics")
{
    SECTION("zero elevation points along the normal, any azimuth")
    {
        for (const double az : {0.0, 1.0, -2.5})
        {
            const Vec3 k = propagation_vector({az, 0.0});
            CHECK(k.x() == Catch::Approx(0.0).margin(1e-15));
            CHECK(k.y() == Catch::Approx(0.0).margin(1e-15));
            CHECK(k.z() == Catch::Approx(1.0).margin(1e-15));
        }
    }
    SECTION("azimuth 90, elevation 90 is the y axis")
    {
        const Vec3 k = propagation_vector({std::numbers::pi / 2, std::numbers::pi / 2});
        CHECK(k.isApprox(Vec3(0, 1, 0), 1e-12));
    }
    SECTION("(45, 15) degrees")
    {
        const Vec3 k = propagation_vector(Direction::from_degrees(45.0, 15.0));
        CHECK(k.x() == Catch::Approx(0.1830127).margin(1e-4));
        CHECK(k.y() == Catch::Approx(0.1830127).margin(1e-4));
        CHECK(k.z() == Catch::Approx(0.9659258).margin(1e-4));
    }
    SECTION("unit norm everywhere")
    {
        RandomStream rng(derive_stream_key(31, {0}));
        for (int i = 0; i < 50; ++i)
        {
            const Direction d{(2.0 * rng.next_double() - 1.0) * std::numbers::pi,
                              rng.next_double() * std::numbers::pi / 2};
            CHECK(propagation_vector(d).norm() == Catch::Approx(1.0).margin(1e-14));
        }
    }
}

TEST_CASE("dyadic Green function structure")
{
    SECTION("separation along z leaves the transverse identity")
    {
        const Vec3 r(0, 0, 3.0);
        const Eigen::Matrix3cd g = dyadic_green(r, {0.0, 0.0}, test_medium);
        CHECK(std::abs(g(2, 2)) < 1e-18);
        CHECK(std::abs(g(0, 0) - g(1, 1)) < 1e-18);
        CHECK(std::abs(g(0, 1)) < 1e-18);
        const double expected_mag = test_medium.impedance / (2.0 * test_medium.wavelength * 3.0);
        CHECK(std::abs(g(0, 0)) == Catch::Approx(expected_mag).epsilon(1e-12));
    }
    SECTION("doubling the distance halves every entry magnitude")
    {
        const Vec3 dir = Vec3(0.3, -0.5, 0.9).normalized();
        const Eigen::Matrix3cd g1 = dyadic_green(5.0 * dir, {0.0, 0.0}, test_medium);
        const Eigen::Matrix3cd g2 = dyadic_green(10.0 * dir, {0.0, 0.0}, test_medium);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                if (std::abs(g1(i, j)) < 1e-18)
                    continue;
                CHECK(std::abs(g2(i, j)) == Catch::Approx(0.5 * std::abs(g1(i, j))).epsilon(1e-12));
            }
    }
    SECTION("projector annihilates the radial direction")
    {
        RandomStream rng(derive_stream_key(32, {0}));
        for (int i = 0; i < 20; ++i)
        {
            const Vec3 r(4.0 * rng.next_double() - 2.0, 4.0 * rng.next_double() - 2.0,
                         1.0 + 5.0 * rng.next_double());
            const SurfacePoint s{0.5 * rng.next_double() - 0.25, 0.5 * rng.next_double() - 0.25};
            const Eigen::Matrix3cd g = dyadic_green(r, s, test_medium);
            const Vec3 d = r - Vec3(s.x, s.y, 0.0);
            const Eigen::Vector3cd prod = g * d.cast<cplx>();
            CHECK(prod.norm() < 1e-12 * g.norm());
        }
    }
    SECTION("matrix symmetry and Frobenius norm")
    {
        RandomStream rng(derive_stream_key(33, {0}));
        for (int i = 0; i < 20; ++i)
        {
            const Vec3 r(3.0 * rng.next_double() - 1.5, 3.0 * rng.next_double() - 1.5,
                         0.5 + 4.0 * rng.next_double());
            const SurfacePoint s{0.3 * rng.next_double(), 0.3 * rng.next_double()};
            const Eigen::Matrix3cd g = dyadic_green(r, s, test_medium);
            CHECK((g - g.transpose()).norm() < 1e-14 * g.norm());
            const double dist = (r - Vec3(s.x, s.y, 0.0)).norm();
            const double expected =
                test_medium.impedance / (2.0 * test_medium.wavelength * dist) * std::sqrt(2.0);
            CHECK_THAT(g.norm(), Catch::Matchers::WithinRel(expected, 1e-10));
        }
    }
    SECTION("coincident points are rejected")
    {
        CHECK_THROWS_AS(dyadic_green(Vec3(0.1, 0.2, 0.0), {0.1, 0.2}, test_medium),
                        std::invalid_argument);
    }
}

TEST_CASE("channel samples")
{
    SECTION("radial receive polarization decouples completely")
    {
        User u;
        u.position = Vec3(6.0, -2.0, 9.0);
        u.polarization = u.position.normalized(); // along p for s = origin
        CHECK(std::abs(channel_sample(u, {0.0, 0.0}, test_medium)) < 1e-14);
    }
    SECTION("magnitude at the user-disk center distance")
    {
        // transverse receive polarization maximizes the coupling
        const Vec3 pos = 41.23 * Vec3(20.0, -20.0, 30.0).normalized();
        const Vec3 p = pos.normalized();
        Vec3 t = (Eigen::Matrix3d::Identity() - p * p.transpose()) * Vec3(0, 1, 0);
        User u;
        u.position = pos;
        u.polarization = t.normalized();
        const double expected = test_medium.impedance /
                                (2.0 * test_medium.wavelength * 41.23) * t.norm();
        CHECK_THAT(std::abs(channel_sample(u, {0.0, 0.0}, test_medium)),
                   Catch::Matchers::WithinRel(expected, 1e-12));
    }
    SECTION("mirror symmetry for a broadside user")
    {
        User u;
        u.position = Vec3(0.0, 0.0, 25.0);
        for (const SurfacePoint s : {SurfacePoint{0.21, -0.13}, SurfacePoint{-0.02, 0.29}})
        {
            const cplx a = channel_sample(u, s, test_medium);
            const cplx b = channel_sample(u, {-s.x, -s.y}, test_medium);
            CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
        }
    }
    SECTION("channel agrees with the dyadic form")
    {
        RandomStream rng(derive_stream_key(34, {0}));
        for (int i = 0; i < 10; ++i)
        {
            User u;
            u.position = Vec3(20.0 * rng.next_double(), -20.0 * rng.next_double(),
                              10.0 + 30.0 * rng.next_double());
            u.polarization = random_unit(rng);
            const SurfacePoint s{0.3 * rng.next_double() - 0.15, 0.3 * rng.next_double() - 0.15};
            const cplx direct = channel_sample(u, s, test_medium);
            const cplx via_matrix = u.polarization.cast<cplx>().transpose() *
                                    dyadic_green(u.position, s, test_medium) *
                                    Vec3(0, 1, 0).cast<cplx>();
            CHECK(std::abs(direct - via_matrix) <= 1e-12 * std::abs(via_matrix));
        }
    }
}

TEST_CASE("polarization gain")
{
    CHECK(polarization_gain({1.3, 0.0}) == 1.0);
    CHECK(polarization_gain({std::numbers::pi / 2, std::numbers::pi / 2}) ==
          Catch::Approx(0.0).margin(1e-12));
    // oracle: sqrt(1 - (sin 45 deg * sin 15 deg)^2)
    CHECK(polarization_gain(Direction::from_degrees(45.0, 15.0)) ==
          Catch::Approx(0.9831105486902832).margin(1e-12));

    SECTION("xi^2 + (sin az sin el)^2 = 1 for all directions")
    {
        RandomStream rng(derive_stream_key(35, {0}));
        for (int i = 0; i < 100; ++i)
        {
            const Direction d{(2.0 * rng.next_double() - 1.0) * std::numbers::pi,
                              rng.next_double() * std::numbers::pi / 2};
            const double xi = polarization_gain(d);
            const double c = std::sin(d.azimuth) * std::sin(d.elevation);
            CHECK(std::abs(xi * xi + c * c - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("path loss coefficient")
{
    // positive, and falls off as 1/r^2
    const double g1 = path_loss(10.0, test_medium);
    const double g2 = path_loss(20.0, test_medium);
    CHECK(g1 > 0.0);
    CHECK_THAT(g2, Catch::Matchers::WithinRel(0.25 * g1, 1e-12));
    CHECK_THROWS_AS(path_loss(0.0, test_medium), std::invalid_argument);
}

TEST_CASE("steering function")
{
    const ApertureGeometry aperture{0.6, 0.6};
    SECTION("origin and broadside give unit phase")
    {
        CHECK(steering(Direction::from_degrees(37.0, 52.0), {0.0, 0.0}, test_medium) ==
              cplx(1.0, 0.0));
        for (const double x : {-0.3, 0.11, 0.29})
            CHECK(std::abs(steering({2.0, 0.0}, {x, -x}, test_medium) - cplx(1.0, 0.0)) < 1e-12);
    }
    SECTION("unit magnitude everywhere")
    {
        RandomStream rng(derive_stream_key(36, {0}));
        for (int i = 0; i < 50; ++i)
        {
            const Direction d{(2.0 * rng.next_double() - 1.0) * std::numbers::pi,
                              rng.next_double() * std::numbers::pi / 2};
            const SurfacePoint s{aperture.lx * (rng.next_double() - 0.5),
                                 aperture.ly * (rng.next_double() - 0.5)};
            CHECK(std::abs(steering(d, s, test_medium)) == Catch::Approx(1.0).margin(1e-14));
        }
    }
}

// Far-field consistency of the exact kernel with the steering approximation.
// The residual quadratic (Fresnel) phase is pi |s_t|^2 / (lambda r); at
// r = 1000 max(L) it is below 1e-2 rad over the whole aperture, which is the
// regime this check pins down.
TEST_CASE("far-field phase consistency")
{
    const ApertureGeometry aperture{0.6, 0.6};
    const double r = 1000.0 * std::max(aperture.lx, aperture.ly);
    RandomStream rng(derive_stream_key(37, {0}));
    for (int i = 0; i < 30; ++i)
    {
        const Direction d{(2.0 * rng.next_double() - 1.0) * std::numbers::pi,
                          rng.next_double() * std::numbers::pi / 2};
        SurfacePoint s{aperture.lx * (rng.next_double() - 0.5), aperture.ly * (rng.next_double() - 0.5)};
        if (i < 4) // corners are the worst case
            s = SurfacePoint{(i & 1 ? 0.5 : -0.5) * aperture.lx, (i & 2 ? 0.5 : -0.5) * aperture.ly};

        User probe;
        probe.position = r * propagation_vector(d);
        const cplx exact = channel_sample(probe, s, test_medium);
        const double coupling = 1.0 - std::pow(propagation_vector(d).y(), 2);
        if (coupling < 1e-3)
            continue; // phase undefined when the polarization decouples
        const cplx far = cplx(0.0, -1.0) * test_medium.impedance /
                         (2.0 * test_medium.wavelength * r) *
                         std::polar(1.0, -2.0 * std::numbers::pi * r / test_medium.wavelength) *
                         steering(d, s, test_medium);
        const double dphase = std::arg(exact / far);
        CHECK(std::abs(dphase) < 1e-2);
    }
}
