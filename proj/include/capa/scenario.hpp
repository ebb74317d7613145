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

#ifndef CAPA_SCENARIO_HPP
#define CAPA_SCENARIO_HPP

#include <stdexcept>
#include <vector>

#include "capa/em_model.hpp"
#include "capa/geometry.hpp"
#include "capa/reference_design.hpp"

namespace capa
{
    /// Everything a solve needs: geometry, medium, users (with their desired
    /// symbols), sensing targets, power budget, tradeoff weight and the
    /// quadrature order used for aperture integrals.
    struct Scenario
    {
        ApertureGeometry aperture;
        Medium medium;
        std::vector<User> users;
        TargetSet targets;
        double power = 5.0; // P_t [A^2]
        double rho = 0.5;   // tradeoff weight in [0, 1]
        int quadrature_n = 20;

        void validate() const
        {
            if (!aperture.valid())
                throw std::invalid_argument("scenario: aperture sides must be positive");
            if (!medium.valid())
                throw std::invalid_argument("scenario: medium must have positive wavelength and impedance");
            if (rho < 0.0 || rho > 1.0)
                throw std::invalid_argument("scenario: rho must lie in [0,1]");
            if (power <= 0.0)
                throw std::invalid_argument("scenario: transmit power must be positive");
            if (quadrature_n < 1)
                throw std::invalid_argument("scenario: quadrature order must be >= 1");
            if (rho > 0.0 && users.empty())
                throw std::invalid_argument("scenario: at least one user required when rho > 0");
            if (rho < 1.0 && targets.empty())
                throw std::invalid_argument("scenario: at least one target required when rho < 1 (sensing requires targets)");
            for (const User& u : users)
            {
                if (u.noise_variance <= 0.0)
                    throw std::invalid_argument("scenario: user noise variance must be positive");
                if (std::abs(u.polarization.norm() - 1.0) > 1e-9)
                    throw std::invalid_argument("scenario: user polarization must be a unit vector");
                const bool on_plane = u.position.z() == 0.0 &&
                                      std::abs(u.position.x()) <= 0.5 * aperture.lx &&
                                      std::abs(u.position.y()) <= 0.5 * aperture.ly;
                if (on_plane)
                    throw std::invalid_argument("scenario: user position lies on the aperture surface");
            }
        }
    };

} // namespace capa

#endif
