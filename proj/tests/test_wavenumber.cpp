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

#include "capa/quadrature.hpp"
#include "capa/reference_design.hpp"
#include "capa/rng.hpp"
#include "capa/wavenumber.hpp"

using namespace capa;

namespace
{
    const Medium test_medium = Medium::from_frequency(2.4e9);
    const ApertureGeometry test_aperture{0.6, 0.6};

    Direction random_direction(RandomStream& rng, double max_elevation_deg = 90.0)
    {
        return Direction{(2.0 * rng.next_double() - 1.0) * std::numbers::pi,
                         deg2rad(max_elevation_deg) * rng.next_double()};
    }
} // namespace

TEST_CASE("truncation order from geometry")
{
    SECTION("default geometry: 0.6 m sides at 2.4 GHz")
    {
        const TruncationOrder o = truncation_order(test_aperture, test_medium);
        CHECK(o.mx == 5);
        CHECK(o.my == 5);
        CHECK(o.mode_count() == 121);
    }
    SECTION("side equal to the wavelength")
    {
        const Medium m{0.125, free_space_impedance, speed_of_light / 0.125};
        const TruncationOrder o = truncation_order({0.125, 0.125}, m);
        CHECK(o.mx == 1);
        CHECK(o.mode_count() == 9);
    }
    SECTION("0.64 m^2 aperture")
    {
        const TruncationOrder o = truncation_order({0.8, 0.8}, test_medium);
        CHECK(o.mx == 7);
        CHECK(o.mode_count() == 225);
    }
}

TEST_CASE("mode indexing is row-major in (mx, my)")
{
    const TruncationOrder o{2, 1};
    CHECK(o.index(-2, -1) == 0);
    CHECK(o.index(-2, 1) == 2);
    CHECK(o.index(0, 0) == 7);
    CHECK(o.index(2, 1) == o.mode_count() - 1);
}

TEST_CASE("Fourier basis values")
{
    SECTION("DC mode is the constant 1/sqrt(area)")
    {
        for (const SurfacePoint s : {SurfacePoint{0.1, -0.2}, SurfacePoint{-0.29, 0.04}})
            CHECK(std::abs(fourier_basis_eval(0, 0, s, test_aperture) - cplx(1.0 / 0.6, 0.0)) < 1e-14);
    }
    SECTION("zero phase at the origin for any mode")
    {
        CHECK(std::abs(fourier_basis_eval(4, -3, {0.0, 0.0}, test_aperture) - cplx(1.0 / 0.6, 0.0)) <
              1e-14);
    }
    SECTION("orthonormality under aperture quadrature")
    {
        const QuadratureRule rule = gauss_legendre_rule(40);
        const int pairs[][4] = {{0, 0, 0, 0}, {1, 2, 1, 2}, {5, 5, 5, 5},
                                {0, 0, 1, 0}, {2, -3, -2, 3}, {5, 0, 4, 0}};
        for (const auto& p : pairs)
        {
            const cplx inner = integrate_aperture(
                [&](const SurfacePoint& s)
                {
                    return fourier_basis_eval(p[0], p[1], s, test_aperture) *
                           std::conj(fourier_basis_eval(p[2], p[3], s, test_aperture));
                },
                test_aperture, rule);
            const double expected = (p[0] == p[2] && p[1] == p[3]) ? 1.0 : 0.0;
            CHECK(std::abs(inner - cplx(expected, 0.0)) < 1e-8);
        }
    }
}

TEST_CASE("steering coefficients")
{
    const TruncationOrder order = truncation_order(test_aperture, test_medium);

    SECTION("broadside concentrates on the DC mode")
    {
        const Eigen::VectorXcd a =
            steering_coefficients({0.7, 0.0}, order, test_aperture, test_medium);
        for (int mx = -order.mx; mx <= order.mx; ++mx)
            for (int my = -order.my; my <= order.my; ++my)
            {
                const cplx v = a[order.index(mx, my)];
                if (mx == 0 && my == 0)
                    CHECK(std::abs(v - cplx(0.6, 0.0)) < 1e-12); // sqrt(A_T)
                else
                    CHECK(std::abs(v) < 1e-12);
            }
    }
    SECTION("Bessel bound |a|^2 <= A_T")
    {
        RandomStream rng(derive_stream_key(41, {0}));
        for (int i = 0; i < 30; ++i)
        {
            const Eigen::VectorXcd a = steering_coefficients(random_direction(rng), order,
                                                             test_aperture, test_medium);
            CHECK(a.squaredNorm() <= test_aperture.area() * (1.0 + 1e-12));
        }
    }
    SECTION("closed form matches quadrature entrywise")
    {
        const QuadratureRule rule = gauss_legendre_rule(40);
        RandomStream rng(derive_stream_key(42, {0}));
        std::vector<Direction> dirs{Direction::from_degrees(45.0, 15.0)};
        for (int i = 0; i < 20; ++i)
            dirs.push_back(random_direction(rng));
        for (const Direction& d : dirs)
        {
            const Eigen::VectorXcd a = steering_coefficients(d, order, test_aperture, test_medium);
            for (const auto [mx, my] : {std::pair{0, 0}, {3, -2}, {-5, 5}, {1, 4}})
            {
                const cplx byquad = integrate_aperture(
                    [&](const SurfacePoint& s)
                    { return steering(d, s, test_medium) * fourier_basis_eval(mx, my, s, test_aperture); },
                    test_aperture, rule);
                CHECK(std::abs(byquad - a[order.index(mx, my)]) < 1e-6);
            }
        }
    }
    SECTION("truncation captures at least 80% of steering energy up to 60 degrees")
    {
        for (double el = 0.0; el <= 60.0; el += 7.5)
            for (double az = -180.0; az < 180.0; az += 15.0)
            {
                const Eigen::VectorXcd a = steering_coefficients(
                    Direction::from_degrees(az, el), order, test_aperture, test_medium);
                CHECK(a.squaredNorm() / test_aperture.area() >= 0.8);
            }
    }
}

TEST_CASE("synthesize guards")
{
    const TruncationOrder order{1, 1};
    SECTION("zero vector is rejected")
    {
        FourierCoefficients w{order, Eigen::VectorXcd::Zero(order.mode_count())};
        CHECK_THROWS_AS(synthesize(w, test_aperture), std::invalid_argument);
    }
    SECTION("length mismatch is rejected")
    {
        FourierCoefficients w{order, Eigen::VectorXcd::Ones(4)};
        CHECK_THROWS_AS(synthesize(w, test_aperture), std::invalid_argument);
    }
    SECTION("unit DC mode synthesizes the constant current")
    {
        FourierCoefficients w{order, Eigen::VectorXcd::Zero(order.mode_count())};
        w.w[order.index(0, 0)] = 1.0;
        const WaveformExpansion j = synthesize(w, test_aperture);
        CHECK(std::abs(waveform_eval(j, {0.17, -0.22}, {}, test_medium) - cplx(1.0 / 0.6, 0.0)) <
              1e-14);
    }
}

TEST_CASE("waveform evaluation")
{
    const TruncationOrder order = truncation_order(test_aperture, test_medium);
    std::vector<User> users(2);
    users[0].position = Vec3(22.0, -18.0, 30.0);
    users[1].position = Vec3(15.0, -25.0, 31.0);

    SECTION("single conjugate-channel term")
    {
        WaveformExpansion j;
        j.aperture = test_aperture;
        j.channel = {{cplx(1.0, 0.0), 1}};
        const SurfacePoint s{0.12, 0.05};
        CHECK(std::abs(waveform_eval(j, s, users, test_medium) -
                       std::conj(channel_sample(users[1], s, test_medium))) < 1e-15);
    }
    SECTION("invalid user index is rejected")
    {
        WaveformExpansion j;
        j.aperture = test_aperture;
        j.channel = {{cplx(1.0, 0.0), 5}};
        CHECK_THROWS_AS(waveform_eval(j, {0.0, 0.0}, users, test_medium), std::out_of_range);
    }
    SECTION("linearity and composite evaluation")
    {
        RandomStream rng(derive_stream_key(43, {0}));
        Eigen::VectorXcd w(order.mode_count());
        for (int i = 0; i < w.size(); ++i)
            w[i] = cplx(rng.normal(), rng.normal());

        WaveformExpansion fourier_only = synthesize({order, w}, test_aperture);
        WaveformExpansion channel_only;
        channel_only.aperture = test_aperture;
        channel_only.channel = {{cplx(0.3, -0.8), 0}, {cplx(-1.1, 0.2), 1}};
        WaveformExpansion composite = fourier_only;
        composite.channel = channel_only.channel;

        WaveformExpansion scaled = fourier_only;
        const cplx alpha(0.7, -1.3);
        scaled.fourier->w *= alpha;

        for (int i = 0; i < 100; ++i)
        {
            const SurfacePoint s{test_aperture.lx * (rng.next_double() - 0.5),
                                 test_aperture.ly * (rng.next_double() - 0.5)};
            const cplx vf = waveform_eval(fourier_only, s, users, test_medium);
            const cplx vc = waveform_eval(channel_only, s, users, test_medium);
            const cplx vs = waveform_eval(scaled, s, users, test_medium);
            const cplx vt = waveform_eval(composite, s, users, test_medium);
            CHECK(std::abs(vs - alpha * vf) < 1e-12 * std::abs(vf));
            CHECK(std::abs(vt - (vf + vc)) < 1e-12 * (std::abs(vf) + std::abs(vc)));
        }
    }
}

TEST_CASE("waveform power")
{
    const TruncationOrder order = truncation_order(test_aperture, test_medium);
    const QuadratureRule rule = gauss_legendre_rule(40);
    RandomStream rng(derive_stream_key(44, {0}));

    SECTION("Parseval for pure Fourier waveforms")
    {
        for (int rep = 0; rep < 5; ++rep)
        {
            Eigen::VectorXcd w(order.mode_count());
            for (int i = 0; i < w.size(); ++i)
                w[i] = cplx(rng.normal(), rng.normal());
            const WaveformExpansion j = synthesize({order, w}, test_aperture);
            const double p = waveform_power(j, rule, {}, test_medium);
            CHECK_THAT(p, Catch::Matchers::WithinRel(w.squaredNorm(), 1e-4));
        }
    }
    SECTION("reference design radiates its power budget")
    {
        const ReferenceDesign design = design_reference(
            TargetSet::of({Direction::from_degrees(45.0, 15.0), Direction::from_degrees(-60.0, 45.0),
                           Direction::from_degrees(30.0, 60.0)}),
            5.0, test_aperture, test_medium);
        const WaveformExpansion jd = synthesize(design.coefficients, test_aperture);
        CHECK_THAT(waveform_power(jd, rule, {}, test_medium),
                   Catch::Matchers::WithinRel(5.0, 1e-3));
    }
    SECTION("quadratic scaling")
    {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(order.mode_count());
        w[order.index(2, -1)] = cplx(0.4, 1.0);
        w[order.index(0, 0)] = cplx(-0.3, 0.2);
        WaveformExpansion j = synthesize({order, w}, test_aperture);
        const double p1 = waveform_power(j, rule, {}, test_medium);
        j.fourier->w *= cplx(0.0, 2.0);
        const double p2 = waveform_power(j, rule, {}, test_medium);
        CHECK_THAT(p2, Catch::Matchers::WithinRel(4.0 * p1, 1e-10));
    }
}
