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

#ifndef CAPA_REFERENCE_DESIGN_HPP
#define CAPA_REFERENCE_DESIGN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "capa/geometry.hpp"
#include "capa/wavenumber.hpp"

namespace capa
{
    /// Set of sensing target directions. Duplicates are collapsed on
    /// construction; `duplicates_collapsed` reports how many were dropped so
    /// callers can warn.
    struct TargetSet
    {
        std::vector<Direction> directions;
        int duplicates_collapsed = 0;

        static TargetSet of(std::vector<Direction> dirs)
        {
            TargetSet set;
            for (const Direction& d : dirs)
            {
                const bool dup = std::any_of(set.directions.begin(), set.directions.end(),
                                             [&](const Direction& e)
                                             {
                                                 return std::abs(e.azimuth - d.azimuth) < 1e-12 &&
                                                        std::abs(e.elevation - d.elevation) < 1e-12;
                                             });
                if (dup)
                    ++set.duplicates_collapsed;
                else
                    set.directions.push_back(d);
            }
            return set;
        }

        std::size_t size() const { return directions.size(); }
        bool empty() const { return directions.empty(); }
    };

    struct MaxMinOptions
    {
        double armijo = 1e-4;         // sufficient-increase constant
        double tau_floor_ratio = 1e-4; // anneal until tau < ratio * tau0
        double beta_tol = 1e-8;       // relative min-gain stall across a tau stage
        int max_iterations = 5000;    // per start
    };

    struct OptimizerTrace
    {
        int iterations = 0;
        double final_tau = 0.0;
        bool converged = true;
        int winning_start = 0;
    };

    struct MaxMinResult
    {
        Eigen::VectorXcd w;
        double min_gain = 0.0;
        std::vector<double> gains;
        OptimizerTrace trace;
    };

    namespace detail
    {
        inline std::vector<double> gains_of(const Eigen::VectorXcd& w,
                                            const std::vector<Eigen::VectorXcd>& steer,
                                            const std::vector<double>& scale)
        {
            std::vector<double> g(steer.size());
            for (std::size_t l = 0; l < steer.size(); ++l)
            {
                const cplx inner = steer[l].transpose() * w;
                g[l] = scale[l] * std::norm(inner);
            }
            return g;
        }

        /// Soft-min objective F_tau = -tau log sum_l exp(-g_l / tau),
        /// evaluated with the usual max-shift for stability.
        inline double softmin(const std::vector<double>& g, double tau)
        {
            const double m = *std::min_element(g.begin(), g.end());
            double acc = 0.0;
            for (const double v : g)
                acc += std::exp(-(v - m) / tau);
            return m - tau * std::log(acc);
        }
    } // namespace detail

    // Maximizes min_l scale_l |steer_l^T w|^2 subject to |w|^2 = power.
    //
    // The max-min objective is smoothed with a soft-min of temperature tau,
    // maximized by projected gradient ascent with Armijo backtracking, and
    // tau is annealed geometrically (tau <- tau/2) from the mean initial gain
    // down to tau_floor_ratio times that. Multi-start: the equalized matched
    // superposition plus one matched beam per target; the best min-gain
    // iterate seen anywhere (including every start point) is returned, which
    // gives the monotone-improvement guarantee relative to the superposition
    // start. Ties keep the lowest start index.
    inline MaxMinResult maximize_min_gain(const std::vector<Eigen::VectorXcd>& steer,
                                          const std::vector<double>& scale, double power,
                                          const MaxMinOptions& opt = {})
    {
        if (steer.empty())
            throw std::invalid_argument("maximize_min_gain: at least one target required");
        if (steer.size() != scale.size())
            throw std::invalid_argument("maximize_min_gain: steering/scale size mismatch");
        if (power <= 0.0)
            throw std::invalid_argument("maximize_min_gain: power must be positive");

        const auto dim = steer.front().size();
        const std::size_t nt = steer.size();
        const double sqrt_power = std::sqrt(power);

        const auto project = [&](Eigen::VectorXcd v)
        {
            const double n = v.norm();
            if (n == 0.0)
                throw std::invalid_argument("maximize_min_gain: degenerate start (zero vector)");
            v *= sqrt_power / n;
            return v;
        };

        // multi-start list: equalized superposition first, then matched beams
        std::vector<Eigen::VectorXcd> starts;
        {
            Eigen::VectorXcd super = Eigen::VectorXcd::Zero(dim);
            for (std::size_t l = 0; l < nt; ++l)
            {
                const double nl = steer[l].norm();
                if (nl == 0.0 || scale[l] <= 0.0)
                    throw std::invalid_argument("maximize_min_gain: target with zero steering norm or gain scale");
                super += steer[l].conjugate() / (std::sqrt(scale[l]) * nl * nl);
            }
            starts.push_back(project(super));
            for (std::size_t l = 0; l < nt; ++l)
                starts.push_back(project(steer[l].conjugate()));
        }

        MaxMinResult best;
        best.min_gain = -1.0;
        int total_iterations = 0;

        for (std::size_t si = 0; si < starts.size(); ++si)
        {
            Eigen::VectorXcd w = starts[si];
            std::vector<double> g = detail::gains_of(w, steer, scale);
            double beta = *std::min_element(g.begin(), g.end());

            if (beta > best.min_gain)
            {
                best.w = w;
                best.min_gain = beta;
                best.gains = g;
                best.trace.winning_start = static_cast<int>(si);
            }

            double tau0 = 0.0;
            for (const double v : g)
                tau0 += v;
            tau0 = std::max(tau0 / static_cast<double>(nt), 1e-300);

            double tau = tau0;
            double stage_prev_beta = beta;
            int iterations = 0;
            int stage = 0;
            bool converged = false;

            while (tau >= opt.tau_floor_ratio * tau0 && iterations < opt.max_iterations)
            {
                // ascend F_tau at fixed tau until the line search stalls
                while (iterations < opt.max_iterations)
                {
                    // soft-min weights (shifted exponentials)
                    const double m = *std::min_element(g.begin(), g.end());
                    double denom = 0.0;
                    std::vector<double> p(nt);
                    for (std::size_t l = 0; l < nt; ++l)
                    {
                        p[l] = std::exp(-(g[l] - m) / tau);
                        denom += p[l];
                    }
                    Eigen::VectorXcd grad = Eigen::VectorXcd::Zero(dim);
                    for (std::size_t l = 0; l < nt; ++l)
                    {
                        const cplx inner = steer[l].transpose() * w;
                        grad += (p[l] / denom * scale[l] * inner) * steer[l].conjugate();
                    }
                    const double gnorm2 = grad.squaredNorm();
                    const double f0 = detail::softmin(g, tau);
                    if (gnorm2 <= 1e-30)
                        break;

                    double step = 1.0;
                    bool accepted = false;
                    Eigen::VectorXcd w_next;
                    std::vector<double> g_next;
                    while (step > 1e-14)
                    {
                        w_next = project(w + step * grad);
                        g_next = detail::gains_of(w_next, steer, scale);
                        if (detail::softmin(g_next, tau) >= f0 + opt.armijo * step * gnorm2)
                        {
                            accepted = true;
                            break;
                        }
                        step *= 0.5;
                    }
                    ++iterations;
                    if (!accepted)
                        break;
                    w = std::move(w_next);
                    g = std::move(g_next);

                    const double bnow = *std::min_element(g.begin(), g.end());
                    if (bnow > beta)
                        beta = bnow;
                    if (bnow > best.min_gain)
                    {
                        best.w = w;
                        best.min_gain = bnow;
                        best.gains = g;
                        best.trace.winning_start = static_cast<int>(si);
                    }
                    const double f1 = detail::softmin(g, tau);
                    if (f1 - f0 <= 1e-12 * (std::abs(f0) + 1e-30))
                        break;
                }

                ++stage;
                const double rel = (beta - stage_prev_beta) / std::max(stage_prev_beta, 1e-300);
                if (stage >= 3 && rel < opt.beta_tol)
                {
                    converged = true;
                    break;
                }
                stage_prev_beta = beta;
                tau *= 0.5;
            }

            total_iterations += iterations;
            if (static_cast<int>(si) == best.trace.winning_start)
            {
                best.trace.final_tau = tau;
                best.trace.converged = converged || iterations < opt.max_iterations;
            }
        }

        best.trace.iterations = total_iterations;
        // exact projection onto the power sphere
        best.w *= sqrt_power / best.w.norm();
        best.gains = detail::gains_of(best.w, steer, scale);
        best.min_gain = *std::min_element(best.gains.begin(), best.gains.end());
        return best;
    }

    /// Beam gain of coefficients w toward direction d:
    /// xi^2(d) |a~(d)^T w|^2.
    inline double target_gain(const FourierCoefficients& coeffs, const Direction& d,
                              const ApertureGeometry& aperture, const Medium& medium)
    {
        if (coeffs.w.size() != coeffs.order.mode_count())
            throw std::invalid_argument("target_gain: coefficient length does not match the truncation order");
        const Eigen::VectorXcd a = steering_coefficients(d, coeffs.order, aperture, medium);
        const cplx inner = a.transpose() * coeffs.w;
        const double xi = polarization_gain(d);
        return xi * xi * std::norm(inner);
    }

    /// Reference sensing waveform: coefficients on the power sphere together
    /// with the achieved minimum gain and the per-target gains.
    struct ReferenceDesign
    {
        FourierCoefficients coefficients;
        double min_gain = 0.0;
        std::vector<double> target_gains;
        OptimizerTrace trace;
    };

    inline ReferenceDesign design_reference(const TargetSet& targets, double power,
                                            const ApertureGeometry& aperture, const Medium& medium,
                                            const MaxMinOptions& opt = {})
    {
        if (targets.empty())
            throw std::invalid_argument("design_reference: target set is empty");
        if (power <= 0.0)
            throw std::invalid_argument("design_reference: power must be positive");

        const TruncationOrder order = truncation_order(aperture, medium);
        std::vector<Eigen::VectorXcd> steer;
        std::vector<double> scale;
        steer.reserve(targets.size());
        scale.reserve(targets.size());
        for (const Direction& d : targets.directions)
        {
            steer.push_back(steering_coefficients(d, order, aperture, medium));
            const double xi = polarization_gain(d);
            scale.push_back(xi * xi);
        }

        MaxMinResult res = maximize_min_gain(steer, scale, power, opt);
        ReferenceDesign design;
        design.coefficients = FourierCoefficients{order, std::move(res.w)};
        design.min_gain = res.min_gain;
        design.target_gains = std::move(res.gains);
        design.trace = res.trace;
        return design;
    }

} // namespace capa

#endif
