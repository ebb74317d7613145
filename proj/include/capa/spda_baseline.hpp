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

#ifndef CAPA_SPDA_BASELINE_HPP
#define CAPA_SPDA_BASELINE_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "capa/isac_core.hpp"
#include "capa/reference_design.hpp"
#include "capa/scenario.hpp"

// Half-wavelength-spaced discrete-array baseline. Each element is modeled
// with its physical effective aperture lambda^2 / (4 pi), so channels and
// steering sums carry a sqrt(delta_area) weight; drive powers |x|^2 then
// share the continuous model's power and SNR convention while the array
// captures and radiates through N_a * lambda^2 / (4 pi) of effective
// surface rather than the full aperture area. Both solvers use the
// identical K x K reduction, so the comparison isolates the aperture model.

namespace capa
{
    struct DiscreteArray
    {
        int nx = 0;
        int ny = 0;
        double spacing = 0.0;    // lambda/2 [m]
        double delta_area = 0.0; // element effective aperture lambda^2 / (4 pi) [m^2]
        std::vector<SurfacePoint> positions;

        int size() const { return nx * ny; }
    };

    /// Uniform centered grid with lambda/2 spacing on both axes.
    inline DiscreteArray discretize(const ApertureGeometry& aperture, const Medium& medium)
    {
        if (!aperture.valid() || !medium.valid())
            throw std::invalid_argument("discretize: invalid aperture or medium");
        const double spacing = 0.5 * medium.wavelength;
        if (aperture.lx < spacing || aperture.ly < spacing)
            throw std::invalid_argument("discretize: aperture smaller than the half-wavelength spacing");
        DiscreteArray arr;
        arr.spacing = spacing;
        arr.nx = static_cast<int>(std::floor(aperture.lx / spacing)) + 1;
        arr.ny = static_cast<int>(std::floor(aperture.ly / spacing)) + 1;
        arr.delta_area = medium.wavelength * medium.wavelength / (4.0 * std::numbers::pi);
        arr.positions.reserve(static_cast<std::size_t>(arr.nx) * arr.ny);
        for (int ix = 0; ix < arr.nx; ++ix)
            for (int iy = 0; iy < arr.ny; ++iy)
                arr.positions.push_back({(ix - 0.5 * (arr.nx - 1)) * spacing,
                                         (iy - 0.5 * (arr.ny - 1)) * spacing});
        return arr;
    }

    /// K x N_a channel matrix with entries H_k(s_n) sqrt(delta_area).
    inline Eigen::MatrixXcd spda_channels(const DiscreteArray& array, std::span<const User> users,
                                          const Medium& medium)
    {
        const double w = std::sqrt(array.delta_area);
        Eigen::MatrixXcd h(static_cast<Eigen::Index>(users.size()),
                           static_cast<Eigen::Index>(array.positions.size()));
        for (Eigen::Index k = 0; k < h.rows(); ++k)
            for (Eigen::Index n = 0; n < h.cols(); ++n)
                h(k, n) = w * channel_sample(users[static_cast<std::size_t>(k)],
                                             array.positions[static_cast<std::size_t>(n)], medium);
        return h;
    }

    /// Discrete steering vector with entries a(d, s_n) sqrt(delta_area).
    inline Eigen::VectorXcd spda_steering(const DiscreteArray& array, const Direction& d,
                                          const Medium& medium)
    {
        const double w = std::sqrt(array.delta_area);
        Eigen::VectorXcd a(static_cast<Eigen::Index>(array.positions.size()));
        for (Eigen::Index n = 0; n < a.size(); ++n)
            a[n] = w * steering(d, array.positions[static_cast<std::size_t>(n)], medium);
        return a;
    }

    enum class SpdaReference
    {
        resample, // sample the continuous reference on the grid and renormalize
        native    // run the max-min design over the discrete steering vectors
    };

    /// Discrete reference x_d with |x_d|^2 = power.
    inline Eigen::VectorXcd spda_reference(const DiscreteArray& array, const Scenario& scenario,
                                           const FourierCoefficients& jd, SpdaReference mode)
    {
        if (mode == SpdaReference::resample)
        {
            const double w = std::sqrt(array.delta_area);
            Eigen::VectorXcd x(static_cast<Eigen::Index>(array.positions.size()));
            for (Eigen::Index n = 0; n < x.size(); ++n)
                x[n] = w * fourier_eval(jd, array.positions[static_cast<std::size_t>(n)],
                                        scenario.aperture);
            const double norm = x.norm();
            if (norm == 0.0)
                throw std::invalid_argument("spda_reference: reference vanishes on the element grid");
            return x * (std::sqrt(scenario.power) / norm);
        }

        std::vector<Eigen::VectorXcd> steer;
        std::vector<double> scale;
        for (const Direction& d : scenario.targets.directions)
        {
            steer.push_back(spda_steering(array, d, scenario.medium));
            const double xi = polarization_gain(d);
            scale.push_back(xi * xi);
        }
        return maximize_min_gain(steer, scale, scenario.power).w;
    }

    struct DiscreteWaveform
    {
        Eigen::VectorXcd x;
        DiscreteArray array;
    };

    struct SpdaSolution
    {
        DiscreteWaveform waveform;
        double mu = 0.0;
        Eigen::VectorXcd z;
        double mui_energy = 0.0;      // |H x - c|^2
        double mismatch_energy = 0.0; // |x - x_d|^2
        double objective = 0.0;
        int bisection_iterations = 0;
    };

    // Same stationarity-plus-bisection solve in finite dimension:
    //   (mu I + rho H H^H) z = rho (H H^H) c + (1 - rho) H x_d,
    //   x = (rho H^H (c - z) + (1 - rho) x_d) / mu,
    // with mu fixed by |x|^2 = P_t through the shared power identity.
    inline SpdaSolution spda_solve(const Scenario& scenario, const FourierCoefficients* jd,
                                   SpdaReference mode = SpdaReference::resample, double tol = 1e-10)
    {
        scenario.validate();
        if (scenario.rho < 1.0 && jd == nullptr)
            throw std::invalid_argument("spda_solve: a reference design is required when rho < 1");

        SpdaSolution sol;
        sol.waveform.array = discretize(scenario.aperture, scenario.medium);
        const DiscreteArray& array = sol.waveform.array;
        const Eigen::MatrixXcd h = spda_channels(array, scenario.users, scenario.medium);

        Eigen::VectorXcd x_d = Eigen::VectorXcd::Zero(array.size());
        if (jd != nullptr)
            x_d = spda_reference(array, scenario, *jd, mode);

        CorrelationData data;
        data.Q = h * h.adjoint();
        data.Q = 0.5 * (data.Q + data.Q.adjoint()).eval();
        data.u = h * x_d;
        data.c.resize(static_cast<Eigen::Index>(scenario.users.size()));
        for (Eigen::Index k = 0; k < data.c.size(); ++k)
            data.c[k] = scenario.users[static_cast<std::size_t>(k)].symbol;

        const BisectionResult bis = solve_multiplier(data, scenario.rho, scenario.power, tol);
        sol.mu = bis.mu;
        sol.bisection_iterations = bis.iterations;
        sol.z = z_of_mu(sol.mu, data, scenario.rho);
        sol.waveform.x =
            (scenario.rho * (h.adjoint() * (data.c - sol.z)) + (1.0 - scenario.rho) * x_d) / sol.mu;
        sol.mui_energy = (h * sol.waveform.x - data.c).squaredNorm();
        sol.mismatch_energy = jd != nullptr ? (sol.waveform.x - x_d).squaredNorm() : 0.0;
        sol.objective = scenario.rho * sol.mui_energy + (1.0 - scenario.rho) * sol.mismatch_energy;
        return sol;
    }

    inline SpdaSolution spda_solve(const Scenario& scenario, const FourierCoefficients& jd,
                                   SpdaReference mode = SpdaReference::resample, double tol = 1e-10)
    {
        return spda_solve(scenario, &jd, mode, tol);
    }

} // namespace capa

#endif
