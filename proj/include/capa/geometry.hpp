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

#ifndef CAPA_GEOMETRY_HPP
#define CAPA_GEOMETRY_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace capa
{
    using cplx = std::complex<double>;

    inline constexpr double speed_of_light = 299792458.0;          // [m/s]
    inline constexpr double free_space_impedance = 120.0 * std::numbers::pi; // [ohm]

    /// Rectangular radiating surface in the z = 0 plane, centered at the origin.
    struct ApertureGeometry
    {
        double lx = 0.0; // side length along x [m]
        double ly = 0.0; // side length along y [m]

        double area() const { return lx * ly; }
        bool valid() const { return lx > 0.0 && ly > 0.0; }
    };

    /// Narrowband propagation medium (free space unless configured otherwise).
    struct Medium
    {
        double wavelength = 0.0; // [m]
        double impedance = free_space_impedance; // [ohm]
        double frequency = 0.0; // [Hz]

        static Medium from_frequency(double f_hz, double impedance = free_space_impedance)
        {
            if (f_hz <= 0.0)
                throw std::invalid_argument("Medium: carrier frequency must be positive");
            if (impedance <= 0.0)
                throw std::invalid_argument("Medium: impedance must be positive");
            return Medium{speed_of_light / f_hz, impedance, f_hz};
        }

        bool valid() const { return wavelength > 0.0 && impedance > 0.0; }
    };

    // Propagation direction with azimuth `azimuth` and elevation `elevation`,
    // parameterizing the unit vector [cos(az)sin(el), sin(az)sin(el), cos(el)].
    // Despite the conventional name, `elevation` is measured from the array
    // normal (+z), i.e. it is a polar angle: elevation = 0 is broadside and
    // elevation = pi/2 lies in the array plane.
    struct Direction
    {
        double azimuth = 0.0;   // [rad], in [-pi, pi]
        double elevation = 0.0; // [rad], in [0, pi/2]

        static Direction from_degrees(double azimuth_deg, double elevation_deg)
        {
            constexpr double d2r = std::numbers::pi / 180.0;
            return Direction{azimuth_deg * d2r, elevation_deg * d2r};
        }
    };

    /// Point on the aperture surface (z = 0 implicit).
    struct SurfacePoint
    {
        double x = 0.0; // [m]
        double y = 0.0; // [m]
    };

    inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
    inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace capa

#endif
