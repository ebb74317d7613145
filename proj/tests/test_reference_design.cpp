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

#include <algorithm>
#include <cmath>

#include "capa/reference_design.hpp"
#include "capa/rng.hpp"

using namespace capa;

namespace
{
    const Medium test_medium = Medium::from_frequency(2.4e9);
    const ApertureGeometry test_aperture{0.6, 0.6};
    const double pt = 5.0;

    const std::vector<Direction> default_targets{Direction::from_degrees(45.0, 15.0),
                                               Direction::from_degrees(-60.0, 45.0),
                                               Direction::from_degrees(30.0, 60.0)};

    FourierCoefficients matched_beam(const Direction& d, double power)
    {
        const TruncationOrder order = truncation_order(test_aperture, test_medium);
        Eigen::VectorXcd a = steering_coefficients(d, order, test_aperture, test_medium);
        a = a.conjugate() * (std::sqrt(power) / a.norm());
        return {order, a};
    }
} // namespace

TEST_CASE("target set collapses duplicates")
{
    const TargetSet set = TargetSet::of({Direction::from_degrees(10, 20),
                                         Direction::from_degrees(10, 20),
                                         Direction::from_degrees(-5, 40)});
    CHECK(set.size() == 2);
    CHECK(set.duplicates_collapsed == 1);
}

TEST_CASE("target gain of matched and orthogonal coefficients")
{
    const Direction d = Direction::from_degrees(45.0, 15.0);
    const TruncationOrder order = truncation_order(test_aperture, test_medium);
    const Eigen::VectorXcd a = steering_coefficients(d, order, test_aperture, test_medium);
    const double xi = polarization_gain(d);

    SECTION("Cauchy-Schwarz equality at the matched beam")
    {
        const FourierCoefficients w = matched_beam(d, pt);
        const double expected = xi * xi * pt * a.squaredNorm();
        CHECK_THAT(target_gain(w, d, test_aperture, test_medium),
                   Catch::Matchers::WithinRel(expected, 1e-12));
    }
    SECTION("orthogonal coefficients radiate nothing toward the target")
    {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(order.mode_count());
        // Gram-Schmidt a random vector against conj(a)
        RandomStream rng(derive_stream_key(51, {0}));
        for (int i = 0; i < w.size(); ++i)
            w[i] = cplx(rng.normal(), rng.normal());
        const Eigen::VectorXcd ac = a.conjugate();
        w -= ac * (a.transpose() * w)(0) / a.squaredNorm();
        const FourierCoefficients coeffs{order, w};
        CHECK(target_gain(coeffs, d, test_aperture, test_medium) < 1e-18 * w.squaredNorm());
    }
    SECTION("global phase leaves the gain unchanged")
    {
        FourierCoefficients w = matched_beam(d, pt);
        const double g0 = target_gain(w, d, test_aperture, test_medium);
        w.w *= std::polar(1.0, 1.234);
        CHECK_THAT(target_gain(w, d, test_aperture, test_medium),
                   Catch::Matchers::WithinRel(g0, 1e-12));
    }
}

TEST_CASE("single-target design matches the analytic optimum")
{
    const Direction d = Direction::from_degrees(45.0, 15.0);
    const ReferenceDesign design =
        design_reference(TargetSet::of({d}), pt, test_aperture, test_medium);
    const TruncationOrder order = truncation_order(test_aperture, test_medium);
    const Eigen::VectorXcd a = steering_coefficients(d, order, test_aperture, test_medium);
    const double xi = polarization_gain(d);
    const double optimum = xi * xi * pt * a.squaredNorm();

    CHECK_THAT(design.min_gain, Catch::Matchers::WithinRel(optimum, 1e-6));
    // collinearity with the matched beam up to a global phase
    const FourierCoefficients matched = matched_beam(d, pt);
    const double overlap = std::abs(cplx(matched.w.adjoint() * design.coefficients.w));
    CHECK_THAT(overlap, Catch::Matchers::WithinRel(pt, 1e-6));
    CHECK_THAT(design.coefficients.power(), Catch::Matchers::WithinRel(pt, 1e-10));
}

TEST_CASE("coincident targets reduce to the single-target result")
{
    const Direction d = Direction::from_degrees(-60.0, 45.0);
    const ReferenceDesign one = design_reference(TargetSet::of({d}), pt, test_aperture, test_medium);
    const ReferenceDesign two =
        design_reference(TargetSet::of({d, d}), pt, test_aperture, test_medium);
    CHECK(two.target_gains.size() == 1);
    CHECK_THAT(two.min_gain, Catch::Matchers::WithinRel(one.min_gain, 1e-12));
}

TEST_CASE("default target set: equalized gains above the superposition floor")
{
    const TargetSet targets = TargetSet::of(default_targets);
    const ReferenceDesign design = design_reference(targets, pt, test_aperture, test_medium);

    REQUIRE(design.target_gains.size() == 3);
    CHECK_THAT(design.coefficients.power(), Catch::Matchers::WithinRel(pt, 1e-10));

    const double gmin = *std::min_element(design.target_gains.begin(), design.target_gains.end());
    const double gmax = *std::max_element(design.target_gains.begin(), design.target_gains.end());
    CHECK(gmin == design.min_gain);
    CHECK((gmax - gmin) / gmax < 0.05); // max-min equalizes the active targets

    const TruncationOrder order = truncation_order(test_aperture, test_medium);
    for (std::size_t l = 0; l < 3; ++l)
    {
        const Eigen::VectorXcd a =
            steering_coefficients(targets.directions[l], order, test_aperture, test_medium);
        const double xi = polarization_gain(targets.directions[l]);
        CHECK(design.target_gains[l] >= 0.25 * xi * xi * pt * a.squaredNorm());
    }
}

TEST_CASE("monotone improvement over the superposition start")
{
    const TargetSet targets = TargetSet::of(default_targets);
    const TruncationOrder order = truncation_order(test_aperture, test_medium);

    // the optimizer's first start: equalized matched superposition
    Eigen::VectorXcd super = Eigen::VectorXcd::Zero(order.mode_count());
    std::vector<Eigen::VectorXcd> steer;
    for (const Direction& d : targets.directions)
    {
        const Eigen::VectorXcd a = steering_coefficients(d, order, test_aperture, test_medium);
        steer.push_back(a);
        super += a.conjugate() / (polarization_gain(d) * a.squaredNorm());
    }
    super *= std::sqrt(pt) / super.norm();
    double beta0 = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < steer.size(); ++l)
    {
        const double xi = polarization_gain(targets.directions[l]);
        beta0 = std::min(beta0, xi * xi * std::norm(cplx(steer[l].transpose() * super)));
    }

    const ReferenceDesign design = design_reference(targets, pt, test_aperture, test_medium);
    CHECK(design.min_gain >= beta0 * (1.0 - 1e-12));
}

TEST_CASE("target permutation leaves the achieved minimum unchanged")
{
    const ReferenceDesign a =
        design_reference(TargetSet::of(default_targets), pt, test_aperture, test_medium);
    std::vector<Direction> perm{default_targets[2], default_targets[0], default_targets[1]};
    const ReferenceDesign b = design_reference(TargetSet::of(perm), pt, test_aperture, test_medium);
    CHECK_THAT(b.min_gain, Catch::Matchers::WithinRel(a.min_gain, 1e-8));
}

TEST_CASE("degenerate inputs are rejected")
{
    CHECK_THROWS_AS(design_reference(TargetSet::of({}), pt, test_aperture, test_medium),
                    std::invalid_argument);
    CHECK_THROWS_AS(design_reference(TargetSet::of(default_targets), -1.0, test_aperture, test_medium),
                    std::invalid_argument);
}
