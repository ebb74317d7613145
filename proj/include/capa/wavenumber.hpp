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

#ifndef CAPA_WAVENUMBER_HPP
#define CAPA_WAVENUMBER_HPP

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "capa/em_model.hpp"
#include "capa/geometry.hpp"
#include "capa/quadrature.hpp"

namespace capa
{
    // Truncated Fourier (wavenumber-domain) representation of currents on the
    // aperture. Modes beyond ceil(L/lambda) per axis radiate negligibly, so
    // the truncation order follows directly from geometry and wavelength.
    struct TruncationOrder
    {
        int mx = 0;
        int my = 0;

        int mode_count() const { return (2 * mx + 1) * (2 * my + 1); }

        /// Row-major mode index: m_x varies slowest, m_y fastest.
        int index(int m_x, int m_y) const
        {
            return (m_x + mx) * (2 * my + 1) + (m_y + my);
        }

        bool operator==(const TruncationOrder&) const = default;
    };

    inline TruncationOrder truncation_order(const ApertureGeometry& aperture, const Medium& medium)
    {
        if (!aperture.valid() || !medium.valid())
            throw std::invalid_argument("truncation_order: invalid aperture or medium");
        return TruncationOrder{static_cast<int>(std::ceil(aperture.lx / medium.wavelength)),
                               static_cast<int>(std::ceil(aperture.ly / medium.wavelength))};
    }

    /// Fourier coefficients w, ordered row-major by (m_x, m_y).
    struct FourierCoefficients
    {
        TruncationOrder order;
        Eigen::VectorXcd w;

        double power() const { return w.squaredNorm(); }
    };

    /// psi_m(s) = exp(j 2 pi (m_x s_x / L_x + m_y s_y / L_y)) / sqrt(A_T).
    inline cplx fourier_basis_eval(int m_x, int m_y, const SurfacePoint& s, const ApertureGeometry& aperture)
    {
        const double phase = 2.0 * std::numbers::pi *
                             (m_x * s.x / aperture.lx + m_y * s.y / aperture.ly);
        return std::polar(1.0 / std::sqrt(aperture.area()), phase);
    }

    inline double sinc(double x)
    {
        if (std::abs(x) < 1e-8)
            return 1.0 - x * x / 6.0;
        return std::sin(x) / x;
    }

    // Steering coefficients a~_m = integral of a(d, s) psi_m(s) over the
    // aperture, in closed form: the integrand factorizes per axis and each
    // factor is L * sinc(u L / 2) with u the residual spatial frequency. The
    // values are real; they are returned as a complex vector because callers
    // combine them with complex coefficients.
    inline Eigen::VectorXcd steering_coefficients(const Direction& d, const TruncationOrder& order,
                                                  const ApertureGeometry& aperture, const Medium& medium)
    {
        const double se = std::sin(d.elevation);
        const double kx = std::cos(d.azimuth) * se / medium.wavelength;
        const double ky = std::sin(d.azimuth) * se / medium.wavelength;
        const double inv_sqrt_area = 1.0 / std::sqrt(aperture.area());

        std::vector<double> fx(2 * order.mx + 1), fy(2 * order.my + 1);
        for (int m = -order.mx; m <= order.mx; ++m)
        {
            const double u = 2.0 * std::numbers::pi * (kx + m / aperture.lx);
            fx[m + order.mx] = aperture.lx * sinc(0.5 * u * aperture.lx);
        }
        for (int m = -order.my; m <= order.my; ++m)
        {
            const double u = 2.0 * std::numbers::pi * (ky + m / aperture.ly);
            fy[m + order.my] = aperture.ly * sinc(0.5 * u * aperture.ly);
        }

        Eigen::VectorXcd a(order.mode_count());
        int i = 0;
        for (int mx = -order.mx; mx <= order.mx; ++mx)
            for (int my = -order.my; my <= order.my; ++my)
                a[i++] = inv_sqrt_area * fx[mx + order.mx] * fy[my + order.my];
        return a;
    }

    /// One conjugate-channel term beta_k H_k^*(s) of a waveform expansion.
    struct ChannelTerm
    {
        cplx coefficient;
        int user = 0;
    };

    // Transmit current density represented as an optional Fourier part plus
    // conjugate-channel terms,
    //   j(s) = sum_m w_m psi_m(s) + sum_k beta_k H_k^*(s).
    // Channel terms are kept symbolic (coefficient + user index); evaluation
    // needs the owning scenario's users and medium.
    struct WaveformExpansion
    {
        ApertureGeometry aperture;
        std::optional<FourierCoefficients> fourier;
        std::vector<ChannelTerm> channel;

        bool empty() const { return !fourier.has_value() && channel.empty(); }
    };

    /// Wraps coefficients as a pure Fourier waveform. Rejects length
    /// mismatches and the all-zero vector.
    inline WaveformExpansion synthesize(const FourierCoefficients& coeffs, const ApertureGeometry& aperture)
    {
        if (coeffs.w.size() != coeffs.order.mode_count())
            throw std::invalid_argument("synthesize: coefficient length does not match the truncation order");
        if (coeffs.w.norm() == 0.0)
            throw std::invalid_argument("synthesize: all-zero coefficient vector");
        return WaveformExpansion{aperture, coeffs, {}};
    }

    inline cplx fourier_eval(const FourierCoefficients& coeffs, const SurfacePoint& s,
                             const ApertureGeometry& aperture)
    {
        // factorized phases: exp(j 2 pi m x / L) built per axis by recurrence
        const TruncationOrder& o = coeffs.order;
        const cplx ex = std::polar(1.0, 2.0 * std::numbers::pi * s.x / aperture.lx);
        const cplx ey = std::polar(1.0, 2.0 * std::numbers::pi * s.y / aperture.ly);
        std::vector<cplx> px(2 * o.mx + 1), py(2 * o.my + 1);
        px[o.mx] = 1.0;
        for (int m = 1; m <= o.mx; ++m)
        {
            px[o.mx + m] = px[o.mx + m - 1] * ex;
            px[o.mx - m] = std::conj(px[o.mx + m]);
        }
        py[o.my] = 1.0;
        for (int m = 1; m <= o.my; ++m)
        {
            py[o.my + m] = py[o.my + m - 1] * ey;
            py[o.my - m] = std::conj(py[o.my + m]);
        }
        cplx acc{};
        int i = 0;
        for (int mx = 0; mx < 2 * o.mx + 1; ++mx)
        {
            cplx row{};
            for (int my = 0; my < 2 * o.my + 1; ++my)
                row += coeffs.w[i++] * py[my];
            acc += px[mx] * row;
        }
        return acc / std::sqrt(aperture.area());
    }

    /// Pointwise evaluation of the expansion; channel term indices refer to
    /// `users`.
    inline cplx waveform_eval(const WaveformExpansion& j, const SurfacePoint& s,
                              std::span<const User> users, const Medium& medium)
    {
        cplx value{};
        if (j.fourier)
            value += fourier_eval(*j.fourier, s, j.aperture);
        for (const ChannelTerm& t : j.channel)
        {
            if (t.user < 0 || t.user >= static_cast<int>(users.size()))
                throw std::out_of_range("waveform_eval: channel term references an invalid user index");
            value += t.coefficient * std::conj(channel_sample(users[t.user], s, medium));
        }
        return value;
    }

    /// Radiated power integral |j(s)|^2 over the aperture by quadrature.
    inline double waveform_power(const WaveformExpansion& j, const QuadratureRule& rule,
                                 std::span<const User> users, const Medium& medium)
    {
        const cplx p = integrate_aperture(
            [&](const SurfacePoint& s)
            {
                const cplx v = waveform_eval(j, s, users, medium);
                return cplx(std::norm(v), 0.0);
            },
            j.aperture, rule);
        return p.real();
    }

} // namespace capa

#endif
