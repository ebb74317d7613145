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

#ifndef CAPA_ISAC_CORE_HPP
#define CAPA_ISAC_CORE_HPP

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "capa/quadrature.hpp"
#include "capa/scenario.hpp"
#include "capa/wavenumber.hpp"

// Weighted MUI / beampattern-mismatch waveform solver.
//
// The stationarity condition of the constrained functional program is a
// Fredholm integral equation of the second kind whose kernel is built from
// the user channels. Because the kernel is degenerate (a finite sum of
// channel products), the equation reduces exactly to a K x K linear system
//     (mu I + rho Q) z = rho Q c + (1 - rho) u,
// where Q collects the channel correlations and u couples the channels with
// the reference sensing waveform. The multiplier mu is fixed by matching the
// transmit power, via bisection on a closed-form power identity; the optimal
// waveform is then assembled from z, the symbols and the reference.

namespace capa
{
    /// Raised when a solve cannot complete (e.g. the power identity never
    /// brackets the budget). CLI maps this to a dedicated exit code.
    class solver_error : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    /// Channel correlations Q (Hermitian PSD), reference couplings u, and the
    /// desired symbol vector c.
    struct CorrelationData
    {
        Eigen::MatrixXcd Q;
        Eigen::VectorXcd u;
        Eigen::VectorXcd c;
    };

    namespace detail
    {
        /// K x (N*N) table of channel samples, row k holding H_k at every
        /// aperture quadrature node scaled by sqrt(weight). With this scaling
        /// the Gram matrix of the rows is the quadrature approximation of Q.
        inline Eigen::MatrixXcd weighted_channel_table(const Scenario& scenario,
                                                       const std::vector<WeightedPoint>& pts)
        {
            const auto K = static_cast<Eigen::Index>(scenario.users.size());
            Eigen::MatrixXcd table(K, static_cast<Eigen::Index>(pts.size()));
            for (Eigen::Index k = 0; k < K; ++k)
                for (std::size_t n = 0; n < pts.size(); ++n)
                    table(k, static_cast<Eigen::Index>(n)) =
                        std::sqrt(pts[n].weight) *
                        channel_sample(scenario.users[static_cast<std::size_t>(k)], pts[n].s,
                                       scenario.medium);
            return table;
        }
    } // namespace detail

    /// Q(i,k) = integral of H_i(s) H_k^*(s) over the aperture, by tensor
    /// quadrature, Hermitian-symmetrized afterwards.
    inline Eigen::MatrixXcd channel_gram(const Scenario& scenario)
    {
        const QuadratureRule rule = gauss_legendre_rule(scenario.quadrature_n);
        const auto pts = aperture_quadrature_points(scenario.aperture, rule);
        const Eigen::MatrixXcd table = detail::weighted_channel_table(scenario, pts);
        Eigen::MatrixXcd q = table * table.adjoint();
        q = 0.5 * (q + q.adjoint()).eval();
        return q;
    }

    /// u_i = integral of H_i(s) j_d(s) over the aperture.
    inline Eigen::VectorXcd reference_coupling(const Scenario& scenario, const WaveformExpansion& jd)
    {
        const QuadratureRule rule = gauss_legendre_rule(scenario.quadrature_n);
        const auto pts = aperture_quadrature_points(scenario.aperture, rule);
        const auto K = static_cast<Eigen::Index>(scenario.users.size());
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(K);
        for (std::size_t n = 0; n < pts.size(); ++n)
        {
            const cplx jv = pts[n].weight * waveform_eval(jd, pts[n].s, scenario.users, scenario.medium);
            if (jv == cplx{})
                continue;
            for (Eigen::Index k = 0; k < K; ++k)
                u[k] += jv * channel_sample(scenario.users[static_cast<std::size_t>(k)], pts[n].s,
                                            scenario.medium);
        }
        return u;
    }

    /// Builds Q, u and c for a scenario; `jd` may be null when rho = 1 (the
    /// reference then never enters the solve and u is zero).
    inline CorrelationData correlation_data(const Scenario& scenario, const WaveformExpansion* jd)
    {
        const auto K = static_cast<Eigen::Index>(scenario.users.size());
        CorrelationData data;
        data.Q = channel_gram(scenario);
        data.u = jd != nullptr ? reference_coupling(scenario, *jd) : Eigen::VectorXcd::Zero(K);
        data.c.resize(K);
        for (Eigen::Index k = 0; k < K; ++k)
            data.c[k] = scenario.users[static_cast<std::size_t>(k)].symbol;
        return data;
    }

    /// Solves (mu I + rho Q) z = rho Q c + (1 - rho) u. Valid whenever
    /// mu I + rho Q is positive definite, which covers mu > 0 and, when the
    /// budget exceeds the zero-forcing power at rho = 1, a left-of-zero
    /// interval bounded by -rho lambda_min(Q).
    inline Eigen::VectorXcd z_of_mu(double mu, const CorrelationData& data, double rho)
    {
        const auto K = data.Q.rows();
        if (K == 0)
            return Eigen::VectorXcd();
        const Eigen::MatrixXcd lhs = mu * Eigen::MatrixXcd::Identity(K, K) + rho * data.Q;
        const Eigen::VectorXcd rhs = rho * (data.Q * data.c) + (1.0 - rho) * data.u;
        Eigen::LLT<Eigen::MatrixXcd> llt(lhs);
        if (llt.info() != Eigen::Success)
            throw solver_error("z_of_mu: mu I + rho Q is not positive definite at mu = " + std::to_string(mu));
        return llt.solve(rhs);
    }

    /// Constant term of the power identity,
    /// c~ = rho^2 c^H Q c + (1-rho)^2 P_t + 2 rho (1-rho) Re{c^H u}.
    inline double power_constant(const CorrelationData& data, double rho, double power)
    {
        double value = (1.0 - rho) * (1.0 - rho) * power;
        if (data.Q.rows() > 0)
        {
            value += rho * rho * std::real(cplx(data.c.adjoint() * data.Q * data.c));
            value += 2.0 * rho * (1.0 - rho) * std::real(cplx(data.c.adjoint() * data.u));
        }
        return value;
    }

    /// Transmit power of the stationary waveform at multiplier mu, evaluated
    /// in closed form:
    /// [rho^2 z^H Q z - 2 rho^2 Re{c^H Q z} - 2 rho(1-rho) Re{z^H u} + c~] / mu^2.
    inline double power_identity(double mu, const Eigen::VectorXcd& z, const CorrelationData& data,
                                 double rho, double power)
    {
        double num = power_constant(data, rho, power);
        if (data.Q.rows() > 0)
        {
            const Eigen::VectorXcd qz = data.Q * z;
            num += rho * rho * std::real(cplx(z.adjoint() * qz));
            num -= 2.0 * rho * rho * std::real(cplx(data.c.adjoint() * qz));
            num -= 2.0 * rho * (1.0 - rho) * std::real(cplx(z.adjoint() * data.u));
        }
        return num / (mu * mu);
    }

    inline double power_identity(double mu, const CorrelationData& data, double rho, double power)
    {
        return power_identity(mu, z_of_mu(mu, data, rho), data, rho, power);
    }

    struct BisectionResult
    {
        double mu = 0.0;
        int iterations = 0;
    };

    // Finds mu with |power(mu) - P_t| <= tol * P_t by bracketing and
    // bisection. The achieved power is strictly decreasing in mu wherever
    // mu I + rho Q is positive definite, which makes the bracket valid; a
    // probe over ten interior points re-checks that monotonicity on every
    // solve. For rho < 1 the power diverges as mu -> 0+, so the root is
    // positive and the lower bracket halves toward zero. At rho = 1 the
    // achievable power on mu > 0 is capped by the zero-forcing power
    // c^H Q^-1 c; when the budget exceeds it the bracket continues below
    // zero, approaching the definiteness floor -rho lambda_min(Q)
    // geometrically.
    inline BisectionResult solve_multiplier(const CorrelationData& data, double rho, double power,
                                            double tol = 1e-10)
    {
        if (rho < 0.0 || rho > 1.0)
            throw std::invalid_argument("solve_multiplier: rho must lie in [0,1]");
        if (power <= 0.0 || tol <= 0.0)
            throw std::invalid_argument("solve_multiplier: power and tolerance must be positive");

        double floor = 0.0;
        if (rho >= 1.0 && data.Q.rows() > 0)
        {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(data.Q);
            if (es.info() != Eigen::Success)
                throw solver_error("solve_multiplier: eigen-decomposition of Q failed");
            floor = -rho * std::max(es.eigenvalues().minCoeff(), 0.0) * (1.0 - 1e-12);
        }

        const auto achieved = [&](double mu) { return power_identity(mu, data, rho, power); };

        double hi = 1.0;
        double p_hi = achieved(hi);
        int expansions = 0;
        while (p_hi > power)
        {
            hi *= 2.0;
            p_hi = achieved(hi);
            if (++expansions > 200)
                throw solver_error("solve_multiplier: bracket failure, power stays above the budget "
                                   "(last power " + std::to_string(p_hi) + " at mu " + std::to_string(hi) + ")");
        }

        double lo = std::min(1.0, hi);
        double p_lo = achieved(lo);
        expansions = 0;
        while (p_lo < power)
        {
            lo = floor + 0.5 * (lo - floor);
            p_lo = achieved(lo);
            if (++expansions > 200)
                throw solver_error("solve_multiplier: bracket failure, achievable power maxes out below the "
                                   "budget (reached " + std::to_string(p_lo) + " at mu " + std::to_string(lo) +
                                   "); the scenario is degenerate");
        }

        // monotonicity probe across the bracket
        if (hi > lo)
        {
            double prev = achieved(lo);
            for (int i = 1; i <= 10; ++i)
            {
                const double mu = lo > 0.0
                                      ? lo * std::pow(hi / lo, i / 11.0)
                                      : lo + (hi - lo) * i / 11.0;
                const double cur = achieved(mu);
                if (cur > prev * (1.0 + 1e-9) + 1e-12)
                    throw solver_error("solve_multiplier: power identity is not decreasing across the bracket");
                prev = cur;
            }
        }

        BisectionResult result;
        double mu = lo;
        double p_mu = p_lo;
        for (int i = 0; i < 300; ++i)
        {
            if (std::abs(p_mu - power) <= tol * power)
                break;
            ++result.iterations;
            mu = 0.5 * (lo + hi);
            p_mu = achieved(mu);
            if (p_mu > power)
                lo = mu;
            else
                hi = mu;
            if (hi - lo <= 1e-16 * std::max(1.0, std::abs(hi)))
                break;
        }
        if (std::abs(p_mu - power) > tol * power)
        {
            std::ostringstream os;
            os << "solve_multiplier: bisection stalled at mu = " << mu << " with power mismatch "
               << std::abs(p_mu - power) / power;
            throw solver_error(os.str());
        }
        result.mu = mu;
        return result;
    }

    /// Assembles the stationary waveform: conjugate-channel coefficients
    /// beta_k = rho (c_k - z_k) / mu plus the reference scaled by (1-rho)/mu.
    inline WaveformExpansion assemble_waveform(double mu, const Eigen::VectorXcd& z,
                                               const Scenario& scenario, const FourierCoefficients* jd)
    {
        if (mu == 0.0)
            throw std::invalid_argument("assemble_waveform: mu must be nonzero");
        WaveformExpansion j;
        j.aperture = scenario.aperture;
        if (scenario.rho < 1.0)
        {
            if (jd == nullptr)
                throw std::invalid_argument("assemble_waveform: a reference waveform is required when rho < 1");
            FourierCoefficients scaled = *jd;
            scaled.w *= (1.0 - scenario.rho) / mu;
            j.fourier = std::move(scaled);
        }
        if (scenario.rho > 0.0)
        {
            j.channel.reserve(scenario.users.size());
            for (Eigen::Index k = 0; k < z.size(); ++k)
                j.channel.push_back(
                    {scenario.rho * (scenario.users[static_cast<std::size_t>(k)].symbol - z[k]) / mu,
                     static_cast<int>(k)});
        }
        return j;
    }

    struct ObjectiveValue
    {
        double mui = 0.0;       // f_c = sum_k |z_k - c_k|^2
        double mismatch = 0.0;  // f_s = int |j - j_d|^2
        double objective = 0.0; // rho f_c + (1 - rho) f_s
        double reduced = 0.0;   // objective minus the constant terms
    };

    /// Objective from the solved quantities only; no integrals. The mismatch
    /// energy uses the closed form of the reference/waveform inner product,
    /// int j_d^* j = (-rho u^H z + rho u^H c + (1-rho) P_t) / mu.
    inline ObjectiveValue evaluate_objective(double mu, const Eigen::VectorXcd& z,
                                             const CorrelationData& data, double rho, double power)
    {
        ObjectiveValue v;
        double re_inner = 0.0;
        double zc = 0.0, z2 = 0.0, c2 = 0.0;
        if (data.Q.rows() > 0)
        {
            v.mui = (z - data.c).squaredNorm();
            re_inner = std::real((-rho * cplx(data.u.adjoint() * z) + rho * cplx(data.u.adjoint() * data.c) +
                                  (1.0 - rho) * power) /
                                 mu);
            zc = std::real(cplx(z.adjoint() * data.c));
            z2 = z.squaredNorm();
            c2 = data.c.squaredNorm();
        }
        else
        {
            re_inner = (1.0 - rho) * power / mu;
        }
        v.mismatch = 2.0 * power - 2.0 * re_inner;
        v.objective = rho * v.mui + (1.0 - rho) * v.mismatch;
        v.reduced = rho * z2 - 2.0 * rho * zc - 2.0 * (1.0 - rho) * re_inner;

        // the dropped constants must reconcile the two forms exactly
        const double reassembled = v.reduced + rho * c2 + 2.0 * (1.0 - rho) * power;
        if (std::abs(v.objective - reassembled) > 1e-9 * std::max(1.0, std::abs(v.objective)))
            throw std::logic_error("evaluate_objective: reduced-form consistency check failed");
        return v;
    }

    // Pointwise stationarity residual,
    //   max_s |mu j(s) + rho sum_k H_k^*(s) z_k - rho sum_k c_k H_k^*(s) - (1-rho) j_d(s)|
    // normalized by max_s |j(s)|, with z recomputed from the waveform by
    // quadrature so the check also guards the correlation bookkeeping.
    inline double fredholm_residual(const WaveformExpansion& j, double mu, const Scenario& scenario,
                                    const WaveformExpansion* jd, std::span<const SurfacePoint> samples)
    {
        if (samples.empty())
            throw std::invalid_argument("fredholm_residual: no sample points");
        const QuadratureRule rule = gauss_legendre_rule(scenario.quadrature_n);
        const auto K = scenario.users.size();
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(K));
        for (std::size_t k = 0; k < K; ++k)
            z[static_cast<Eigen::Index>(k)] = integrate_aperture(
                [&](const SurfacePoint& s)
                {
                    return channel_sample(scenario.users[k], s, scenario.medium) *
                           waveform_eval(j, s, scenario.users, scenario.medium);
                },
                scenario.aperture, rule);

        double max_res = 0.0;
        double max_j = 0.0;
        for (const SurfacePoint& s : samples)
        {
            const cplx jv = waveform_eval(j, s, scenario.users, scenario.medium);
            cplx res = mu * jv;
            for (std::size_t k = 0; k < K; ++k)
            {
                const cplx h = std::conj(channel_sample(scenario.users[k], s, scenario.medium));
                res += scenario.rho * h * z[static_cast<Eigen::Index>(k)];
                res -= scenario.rho * scenario.users[k].symbol * h;
            }
            if (jd != nullptr)
                res -= (1.0 - scenario.rho) * waveform_eval(*jd, s, scenario.users, scenario.medium);
            max_res = std::max(max_res, std::abs(res));
            max_j = std::max(max_j, std::abs(jv));
        }
        if (max_j == 0.0)
            throw std::invalid_argument("fredholm_residual: waveform vanishes at every sample point");
        return max_res / max_j;
    }

    struct IsacSolution
    {
        double mu = 0.0;
        Eigen::VectorXcd z;
        WaveformExpansion waveform;
        double mui_energy = 0.0;
        double mismatch_energy = 0.0;
        double objective = 0.0;
        int bisection_iterations = 0;
    };

    /// Full solve: correlations, multiplier bisection, waveform assembly and
    /// closed-form objective. `jd` may be null only when rho = 1. When the
    /// scenario has no users (rho = 0), the solve degenerates to the scaled
    /// reference.
    inline IsacSolution solve_isac(const Scenario& scenario, const FourierCoefficients* jd,
                                   double tol = 1e-10)
    {
        scenario.validate();
        if (scenario.rho < 1.0 && jd == nullptr)
            throw std::invalid_argument("solve_isac: a reference design is required when rho < 1");

        std::optional<WaveformExpansion> jd_expansion;
        if (jd != nullptr)
            jd_expansion = synthesize(*jd, scenario.aperture);

        const CorrelationData data =
            correlation_data(scenario, jd_expansion ? &*jd_expansion : nullptr);
        const BisectionResult bis = solve_multiplier(data, scenario.rho, scenario.power, tol);
        IsacSolution sol;
        sol.mu = bis.mu;
        sol.bisection_iterations = bis.iterations;
        sol.z = z_of_mu(sol.mu, data, scenario.rho);
        sol.waveform = assemble_waveform(sol.mu, sol.z, scenario, jd);
        const ObjectiveValue obj = evaluate_objective(sol.mu, sol.z, data, scenario.rho, scenario.power);
        sol.mui_energy = obj.mui;
        sol.mismatch_energy = jd != nullptr ? obj.mismatch : 0.0;
        sol.objective = scenario.rho * sol.mui_energy + (1.0 - scenario.rho) * sol.mismatch_energy;
        return sol;
    }

    inline IsacSolution solve_isac(const Scenario& scenario, const FourierCoefficients& jd,
                                   double tol = 1e-10)
    {
        return solve_isac(scenario, &jd, tol);
    }

} // namespace capa

#endif
