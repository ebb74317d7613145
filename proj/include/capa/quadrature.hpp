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

#ifndef CAPA_QUADRATURE_HPP
#define CAPA_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "capa/geometry.hpp"

namespace capa
{
    /// Gauss-Legendre rule on [-1, 1]. Nodes are strictly increasing and
    /// symmetric about zero; weights are positive and sum to 2. A rule of
    /// order N integrates polynomials up to degree 2N-1 exactly.
    struct QuadratureRule
    {
        int order = 0;
        std::vector<double> nodes;
        std::vector<double> weights;
    };

    // Nodes are the roots of the order-N Legendre polynomial, located by
    // Newton iteration from the standard asymptotic initial guess
    // cos(pi*(k - 1/4)/(N + 1/2)) and polished to ~1e-15. Weights follow from
    // the derivative value at each root. The negative half is mirrored from
    // the positive half so the symmetry invariants hold exactly.
    inline QuadratureRule gauss_legendre_rule(int order)
    {
        if (order < 1)
            throw std::invalid_argument("gauss_legendre_rule: order must be >= 1");

        QuadratureRule rule;
        rule.order = order;
        rule.nodes.assign(order, 0.0);
        rule.weights.assign(order, 0.0);

        const int n = order;
        for (int k = 1; k <= (n + 1) / 2; ++k)
        {
            double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter)
            {
                // Legendre recurrence for P_n(x) and P_{n-1}(x)
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j)
                {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15)
                    break;
            }
            // one clean-up evaluation of the derivative at the converged root
            {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j)
                {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
            }
            const bool middle = (2 * k == n + 1);
            if (middle)
                x = 0.0; // odd-order center root is exactly zero
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);

            rule.nodes[n - k] = x;
            rule.weights[n - k] = w;
            rule.nodes[k - 1] = middle ? x : -x;
            rule.weights[k - 1] = w;
        }
        return rule;
    }

    /// (b-a)/2 * sum_n w_n f((b-a)/2 * x_n + (a+b)/2). The integrand may
    /// return double or std::complex<double>.
    template <class F>
    cplx integrate_interval(F&& f, double a, double b, const QuadratureRule& rule)
    {
        if (!(a < b))
            throw std::invalid_argument("integrate_interval: requires a < b");
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        cplx acc{};
        for (int i = 0; i < rule.order; ++i)
            acc += rule.weights[i] * cplx(f(half * rule.nodes[i] + mid));
        return half * acc;
    }

    /// Aperture quadrature node with its total tensor weight (Jacobian folded in).
    struct WeightedPoint
    {
        SurfacePoint s;
        double weight = 0.0;
    };

    /// Tensor-product node/weight table over the rectangular aperture,
    /// ordered x-major (outer loop over x nodes).
    inline std::vector<WeightedPoint> aperture_quadrature_points(const ApertureGeometry& aperture,
                                                                 const QuadratureRule& rule)
    {
        if (!aperture.valid())
            throw std::invalid_argument("aperture_quadrature_points: aperture sides must be positive");
        const double jac = 0.25 * aperture.lx * aperture.ly;
        std::vector<WeightedPoint> pts;
        pts.reserve(static_cast<std::size_t>(rule.order) * rule.order);
        for (int ix = 0; ix < rule.order; ++ix)
        {
            const double sx = 0.5 * aperture.lx * rule.nodes[ix];
            for (int iy = 0; iy < rule.order; ++iy)
            {
                const double sy = 0.5 * aperture.ly * rule.nodes[iy];
                pts.push_back({SurfacePoint{sx, sy}, jac * rule.weights[ix] * rule.weights[iy]});
            }
        }
        return pts;
    }

    /// Tensor-product Gauss-Legendre integral of f(s) over the aperture.
    template <class F>
    cplx integrate_aperture(F&& f, const ApertureGeometry& aperture, const QuadratureRule& rule)
    {
        if (!aperture.valid())
            throw std::invalid_argument("integrate_aperture: aperture sides must be positive");
        const double hx = 0.5 * aperture.lx;
        const double hy = 0.5 * aperture.ly;
        cplx acc{};
        for (int ix = 0; ix < rule.order; ++ix)
        {
            const double sx = hx * rule.nodes[ix];
            cplx row{};
            for (int iy = 0; iy < rule.order; ++iy)
                row += rule.weights[iy] * cplx(f(SurfacePoint{sx, hy * rule.nodes[iy]}));
            acc += rule.weights[ix] * row;
        }
        return hx * hy * acc;
    }

} // namespace capa

#endif
