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

#ifndef CAPA_EM_MODEL_HPP
#define CAPA_EM_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "capa/geometry.hpp"

namespace capa
{
    using Vec3 = Eigen::Vector3d;

    /// Transmit current polarization; the source current is uni-polarized
    /// along the y axis throughout.
    inline const Vec3 current_polarization{0.0, 1.0, 0.0};

    /// Single-antenna communication user.
    struct User
    {
        Vec3 position = Vec3::Zero();             // r_k [m]
        Vec3 polarization = Vec3(0.0, 1.0, 0.0);  // receive polarization, unit norm
        double noise_variance = 1.0;              // sigma_k^2 [W]
        cplx symbol = cplx(1.0, 0.0);             // desired constellation symbol c_k
    };

    /// Unit propagation vector [cos(az)sin(el), sin(az)sin(el), cos(el)].
    inline Vec3 propagation_vector(const Direction& d)
    {
        const double se = std::sin(d.elevation);
        return {std::cos(d.azimuth) * se, std::sin(d.azimuth) * se, std::cos(d.elevation)};
    }

    // Free-space dyadic Green's function between a surface point s and an
    // observation point r:
    //   G(r, s) = -j eta exp(-j 2 pi |r-s| / lambda) / (2 lambda |r-s|)
    //             * (I - p p^T),   p = (r - s)/|r - s|.
    // The projector removes the radial field component; the kernel is
    // singular at r = s and must only be evaluated off the aperture.
    inline Eigen::Matrix3cd dyadic_green(const Vec3& r, const SurfacePoint& s, const Medium& medium)
    {
        const Vec3 d = r - Vec3(s.x, s.y, 0.0);
        const double dist = d.norm();
        if (dist <= 0.0)
            throw std::invalid_argument("dyadic_green: observation point coincides with the source point");
        const Vec3 p = d / dist;
        const Eigen::Matrix3d projector = Eigen::Matrix3d::Identity() - p * p.transpose();
        const double phase = -2.0 * std::numbers::pi * dist / medium.wavelength;
        const cplx prefactor = cplx(0.0, -1.0) * medium.impedance *
                               std::polar(1.0, phase) / (2.0 * medium.wavelength * dist);
        return prefactor * projector;
    }

    /// Scalar channel H_k(s) = u_k^T G(r_k, s) u_y, evaluated with the exact
    /// near-field kernel. Expanded to scalar arithmetic; this sits on the hot
    /// path of every correlation integral.
    inline cplx channel_sample(const User& user, const SurfacePoint& s, const Medium& medium)
    {
        const double dx = user.position.x() - s.x;
        const double dy = user.position.y() - s.y;
        const double dz = user.position.z();
        const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (dist <= 0.0)
            throw std::invalid_argument("channel_sample: user position coincides with the surface point");
        const double inv = 1.0 / dist;
        const double px = dx * inv, py = dy * inv, pz = dz * inv;
        // u_k^T (I - p p^T) u_y = u_k.y - (u_k . p) p.y
        const double kp = user.polarization.x() * px + user.polarization.y() * py +
                          user.polarization.z() * pz;
        const double coupling = user.polarization.y() - kp * py;
        const double phase = -2.0 * std::numbers::pi * dist / medium.wavelength;
        const double mag = medium.impedance / (2.0 * medium.wavelength * dist);
        // -j e^{j phase} = e^{j (phase - pi/2)}
        return std::polar(mag * coupling, phase - 0.5 * std::numbers::pi);
    }

    /// Directional beam gain coefficient
    /// xi(az, el) = |(I - rr^T) u_y| = sqrt(1 - (sin(az) sin(el))^2).
    inline double polarization_gain(const Direction& d)
    {
        const double c = std::sin(d.azimuth) * std::sin(d.elevation);
        return std::sqrt(std::max(0.0, 1.0 - c * c));
    }

    /// Great-circle angle between two propagation directions, in degrees.
    inline double direction_angle_deg(const Direction& a, const Direction& b)
    {
        const double c = propagation_vector(a).dot(propagation_vector(b));
        return rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
    }

    // Distance-dependent path-loss coefficient eta^2 / (4 lambda^2 r^2) that
    // multiplies the directional beam gain to give far-field power density.
    // Power density cannot be negative and |-j eta|^2 = eta^2, so the
    // coefficient is positive. Reported as metadata alongside beampatterns,
    // never folded into the gain itself.
    inline double path_loss(double distance, const Medium& medium)
    {
        if (distance <= 0.0)
            throw std::invalid_argument("path_loss: distance must be positive");
        return medium.impedance * medium.impedance /
               (4.0 * medium.wavelength * medium.wavelength * distance * distance);
    }

    /// Far-field steering function a(az, el, s) = exp(j 2 pi k^T s / lambda);
    /// unit magnitude for every direction and surface point.
    inline cplx steering(const Direction& d, const SurfacePoint& s, const Medium& medium)
    {
        const double se = std::sin(d.elevation);
        const double kx = std::cos(d.azimuth) * se;
        const double ky = std::sin(d.azimuth) * se;
        const double phase = 2.0 * std::numbers::pi * (kx * s.x + ky * s.y) / medium.wavelength;
        return std::polar(1.0, phase);
    }

} // namespace capa

#endif
