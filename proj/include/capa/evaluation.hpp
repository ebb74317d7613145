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

#ifndef CAPA_EVALUATION_HPP
#define CAPA_EVALUATION_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "capa/isac_core.hpp"
#include "capa/rng.hpp"
#include "capa/spda_baseline.hpp"

namespace capa
{
    // ---------------------------------------------------------------- gains

    /// Far-field beam gain xi^2(d) |int a(d,s) j(s) ds|^2 of an arbitrary
    /// current density given as a callable s -> complex.
    template <class F>
    double beam_gain_of(F&& j, const Direction& d, const ApertureGeometry& aperture,
                        const Medium& medium, const QuadratureRule& rule)
    {
        const cplx inner = integrate_aperture(
            [&](const SurfacePoint& s) { return steering(d, s, medium) * cplx(j(s)); }, aperture, rule);
        const double xi = polarization_gain(d);
        return xi * xi * std::norm(inner);
    }

    /// Beam gain of a waveform expansion. The Fourier part uses the analytic
    /// steering-coefficient inner product; conjugate-channel terms are
    /// integrated by quadrature.
    inline double beam_gain(const WaveformExpansion& j, const Direction& d, const Scenario& scenario,
                            const QuadratureRule& rule)
    {
        cplx inner{};
        if (j.fourier)
        {
            const Eigen::VectorXcd a =
                steering_coefficients(d, j.fourier->order, j.aperture, scenario.medium);
            inner += cplx(a.transpose() * j.fourier->w);
        }
        if (!j.channel.empty())
        {
            inner += integrate_aperture(
                [&](const SurfacePoint& s)
                {
                    cplx g{};
                    for (const ChannelTerm& t : j.channel)
                        g += t.coefficient *
                             std::conj(channel_sample(scenario.users[static_cast<std::size_t>(t.user)],
                                                      s, scenario.medium));
                    return steering(d, s, scenario.medium) * g;
                },
                j.aperture, rule);
        }
        const double xi = polarization_gain(d);
        return xi * xi * std::norm(inner);
    }

    /// Beam gain of a discrete waveform,
    /// xi^2(d) |sum_n a(d, s_n) x_n sqrt(delta_area)|^2.
    inline double beam_gain(const DiscreteWaveform& w, const Direction& d, const Medium& medium)
    {
        const double da = std::sqrt(w.array.delta_area);
        cplx inner{};
        for (Eigen::Index n = 0; n < w.x.size(); ++n)
            inner += steering(d, w.array.positions[static_cast<std::size_t>(n)], medium) * w.x[n] * da;
        const double xi = polarization_gain(d);
        return xi * xi * std::norm(inner);
    }

    // ---------------------------------------------------------- beampattern

    /// Far-field gain sampled on a rectangular (azimuth x elevation) grid,
    /// angles in degrees.
    struct BeampatternGrid
    {
        std::vector<double> azimuth_deg;
        std::vector<double> elevation_deg;
        Eigen::MatrixXd gain; // gain(i_az, i_el)
    };

    namespace detail
    {
        inline std::vector<double> angle_axis(double lo, double hi, double step)
        {
            if (step <= 0.0)
                throw std::invalid_argument("beampattern: step must be positive");
            if (hi < lo)
                throw std::invalid_argument("beampattern: empty angular range");
            std::vector<double> axis;
            for (int i = 0;; ++i)
            {
                const double v = lo + i * step;
                if (v > hi + 1e-9)
                    break;
                axis.push_back(std::min(v, hi));
            }
            return axis;
        }
    } // namespace detail

    // Dense beampattern of a waveform expansion. Channel terms are collapsed
    // onto the aperture quadrature grid once; per direction the steering
    // phases factorize over the tensor grid, so each direction costs
    // O(N^2 + M_F) instead of a fresh double integral.
    inline BeampatternGrid beampattern(const WaveformExpansion& j, const Scenario& scenario,
                                       const QuadratureRule& rule, double az_lo_deg = -90.0,
                                       double az_hi_deg = 90.0, double el_lo_deg = 0.0,
                                       double el_hi_deg = 90.0, double step_deg = 1.0)
    {
        BeampatternGrid grid;
        grid.azimuth_deg = detail::angle_axis(az_lo_deg, az_hi_deg, step_deg);
        grid.elevation_deg = detail::angle_axis(el_lo_deg, el_hi_deg, step_deg);
        grid.gain.resize(static_cast<Eigen::Index>(grid.azimuth_deg.size()),
                         static_cast<Eigen::Index>(grid.elevation_deg.size()));

        const int n = rule.order;
        const bool has_channel = !j.channel.empty();
        Eigen::MatrixXcd g(n, n); // weighted channel sum at node (ix, iy)
        if (has_channel)
        {
            const double jac = 0.25 * j.aperture.lx * j.aperture.ly;
            for (int ix = 0; ix < n; ++ix)
                for (int iy = 0; iy < n; ++iy)
                {
                    const SurfacePoint s{0.5 * j.aperture.lx * rule.nodes[ix],
                                         0.5 * j.aperture.ly * rule.nodes[iy]};
                    cplx acc{};
                    for (const ChannelTerm& t : j.channel)
                        acc += t.coefficient *
                               std::conj(channel_sample(scenario.users[static_cast<std::size_t>(t.user)],
                                                        s, scenario.medium));
                    g(ix, iy) = jac * rule.weights[ix] * rule.weights[iy] * acc;
                }
        }

        Eigen::VectorXcd ax(n), ay(n);
        for (std::size_t ia = 0; ia < grid.azimuth_deg.size(); ++ia)
            for (std::size_t ie = 0; ie < grid.elevation_deg.size(); ++ie)
            {
                const Direction d = Direction::from_degrees(grid.azimuth_deg[ia], grid.elevation_deg[ie]);
                cplx inner{};
                if (j.fourier)
                {
                    const Eigen::VectorXcd a =
                        steering_coefficients(d, j.fourier->order, j.aperture, scenario.medium);
                    inner += cplx(a.transpose() * j.fourier->w);
                }
                if (has_channel)
                {
                    const double se = std::sin(d.elevation);
                    const double kx = 2.0 * std::numbers::pi * std::cos(d.azimuth) * se /
                                      scenario.medium.wavelength;
                    const double ky = 2.0 * std::numbers::pi * std::sin(d.azimuth) * se /
                                      scenario.medium.wavelength;
                    for (int i = 0; i < n; ++i)
                    {
                        ax[i] = std::polar(1.0, kx * 0.5 * j.aperture.lx * rule.nodes[i]);
                        ay[i] = std::polar(1.0, ky * 0.5 * j.aperture.ly * rule.nodes[i]);
                    }
                    inner += cplx(ax.transpose() * (g * ay));
                }
                const double xi = polarization_gain(d);
                grid.gain(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ie)) =
                    xi * xi * std::norm(inner);
            }
        return grid;
    }

    /// Dense beampattern of a discrete waveform.
    inline BeampatternGrid beampattern(const DiscreteWaveform& w, const Medium& medium,
                                       double az_lo_deg = -90.0, double az_hi_deg = 90.0,
                                       double el_lo_deg = 0.0, double el_hi_deg = 90.0,
                                       double step_deg = 1.0)
    {
        BeampatternGrid grid;
        grid.azimuth_deg = detail::angle_axis(az_lo_deg, az_hi_deg, step_deg);
        grid.elevation_deg = detail::angle_axis(el_lo_deg, el_hi_deg, step_deg);
        grid.gain.resize(static_cast<Eigen::Index>(grid.azimuth_deg.size()),
                         static_cast<Eigen::Index>(grid.elevation_deg.size()));
        for (std::size_t ia = 0; ia < grid.azimuth_deg.size(); ++ia)
            for (std::size_t ie = 0; ie < grid.elevation_deg.size(); ++ie)
            {
                const Direction d = Direction::from_degrees(grid.azimuth_deg[ia], grid.elevation_deg[ie]);
                grid.gain(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ie)) =
                    beam_gain(w, d, medium);
            }
        return grid;
    }

    // ----------------------------------------------------------------- ISMR

    // Integrated sidelobe-to-mainlobe ratio in dB. The mainlobe region is the
    // union of +-halfwidth squares centered at the targets; everything else
    // on the grid is sidelobe. Plain sums over grid points, no solid-angle
    // weighting. A zero sidelobe sum is floored at -100 dB.
    inline double ismr_db(const BeampatternGrid& grid, const TargetSet& targets,
                          double halfwidth_deg = 10.0)
    {
        if (targets.empty())
            throw std::invalid_argument("ismr: target set is empty");
        double main = 0.0, side = 0.0;
        bool main_seen = false;
        for (std::size_t ia = 0; ia < grid.azimuth_deg.size(); ++ia)
            for (std::size_t ie = 0; ie < grid.elevation_deg.size(); ++ie)
            {
                const double az = grid.azimuth_deg[ia];
                const double el = grid.elevation_deg[ie];
                const bool in_main = std::any_of(
                    targets.directions.begin(), targets.directions.end(),
                    [&](const Direction& d)
                    {
                        return std::abs(az - rad2deg(d.azimuth)) <= halfwidth_deg + 1e-12 &&
                               std::abs(el - rad2deg(d.elevation)) <= halfwidth_deg + 1e-12;
                    });
                const double v = grid.gain(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ie));
                (in_main ? main : side) += v;
                main_seen = main_seen || in_main;
            }
        if (!main_seen)
            throw std::invalid_argument("ismr: no grid point falls inside a mainlobe region");
        if (main <= 0.0)
            throw std::invalid_argument("ismr: mainlobe energy is zero");
        return std::max(-100.0, 10.0 * std::log10(side / main));
    }

    // ------------------------------------------------- direct energy checks

    /// MUI energy sum_k |int H_k j - c_k|^2 computed by quadrature; the
    /// independent cross-check of the closed-form f_c.
    inline double mui_energy_direct(const WaveformExpansion& j, const Scenario& scenario,
                                    const QuadratureRule& rule)
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < scenario.users.size(); ++k)
        {
            const cplx zk = integrate_aperture(
                [&](const SurfacePoint& s)
                {
                    return channel_sample(scenario.users[k], s, scenario.medium) *
                           waveform_eval(j, s, scenario.users, scenario.medium);
                },
                scenario.aperture, rule);
            acc += std::norm(zk - scenario.users[k].symbol);
        }
        return acc;
    }

    /// Mismatch energy int |j - j_d|^2 by quadrature; cross-check of the
    /// closed-form f_s.
    inline double mismatch_energy_direct(const WaveformExpansion& j, const WaveformExpansion& jd,
                                         const Scenario& scenario, const QuadratureRule& rule)
    {
        const cplx v = integrate_aperture(
            [&](const SurfacePoint& s)
            {
                const cplx diff = waveform_eval(j, s, scenario.users, scenario.medium) -
                                  waveform_eval(jd, s, scenario.users, scenario.medium);
                return cplx(std::norm(diff), 0.0);
            },
            scenario.aperture, rule);
        return v.real();
    }

    // --------------------------------------------------------- local maxima

    /// Indices of local maxima of a 1-D cut, counted among samples at or
    /// above rel_threshold times the cut maximum. Plateaus count once; an
    /// edge counts only if the cut falls away from it.
    inline std::vector<int> local_maxima_1d(std::span<const double> values, double rel_threshold)
    {
        std::vector<int> maxima;
        const std::size_t n = values.size();
        if (n == 0)
            return maxima;
        const double peak = *std::max_element(values.begin(), values.end());
        const double floor = rel_threshold * peak;
        std::size_t i = 0;
        while (i < n)
        {
            std::size_t jx = i;
            while (jx + 1 < n && values[jx + 1] == values[i])
                ++jx;
            const bool left_ok = (i == 0) || values[i - 1] < values[i];
            const bool right_ok = (jx == n - 1) || values[jx + 1] < values[i];
            if (left_ok && right_ok && values[i] >= floor)
                maxima.push_back(static_cast<int>((i + jx) / 2));
            i = jx + 1;
        }
        return maxima;
    }

    struct GridMaximum
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;
        double gain = 0.0;
    };

    /// Interior 2-D local maxima (8-neighborhood, strict) at or above
    /// rel_threshold times the grid maximum.
    inline std::vector<GridMaximum> local_maxima_2d(const BeampatternGrid& grid, double rel_threshold)
    {
        std::vector<GridMaximum> maxima;
        const auto rows = grid.gain.rows();
        const auto cols = grid.gain.cols();
        const double floor = rel_threshold * grid.gain.maxCoeff();
        for (Eigen::Index i = 1; i + 1 < rows; ++i)
            for (Eigen::Index jx = 1; jx + 1 < cols; ++jx)
            {
                const double v = grid.gain(i, jx);
                if (v < floor)
                    continue;
                bool is_max = true;
                for (int di = -1; di <= 1 && is_max; ++di)
                    for (int dj = -1; dj <= 1 && is_max; ++dj)
                        if ((di != 0 || dj != 0) && grid.gain(i + di, jx + dj) >= v)
                            is_max = false;
                if (is_max)
                    maxima.push_back({grid.azimuth_deg[static_cast<std::size_t>(i)],
                                      grid.elevation_deg[static_cast<std::size_t>(jx)], v});
            }
        return maxima;
    }

    // -------------------------------------------------------- constellation

    /// Square constellation with unit average symbol energy and Gray bit
    /// labels (per-axis binary-reflected codes, so lattice neighbors differ
    /// in exactly one bit).
    struct Constellation
    {
        std::string name;
        std::vector<cplx> points;
        std::vector<std::uint32_t> labels;
        int bits_per_symbol = 0;

        static Constellation make(std::string_view name)
        {
            int bits_per_axis = 0;
            double norm = 1.0;
            if (name == "QPSK")
            {
                bits_per_axis = 1;
                norm = std::sqrt(2.0);
            }
            else if (name == "16QAM")
            {
                bits_per_axis = 2;
                norm = std::sqrt(10.0);
            }
            else if (name == "64QAM")
            {
                bits_per_axis = 3;
                norm = std::sqrt(42.0);
            }
            else
            {
                throw std::invalid_argument("Constellation: unknown name '" + std::string(name) +
                                            "' (expected QPSK, 16QAM or 64QAM)");
            }
            const int levels = 1 << bits_per_axis;
            Constellation c;
            c.name = std::string(name);
            c.bits_per_symbol = 2 * bits_per_axis;
            for (int i = 0; i < levels; ++i)
                for (int q = 0; q < levels; ++q)
                {
                    const double re = (2.0 * i - (levels - 1)) / norm;
                    const double im = (2.0 * q - (levels - 1)) / norm;
                    const std::uint32_t gi = static_cast<std::uint32_t>(i ^ (i >> 1));
                    const std::uint32_t gq = static_cast<std::uint32_t>(q ^ (q >> 1));
                    c.points.emplace_back(re, im);
                    c.labels.push_back((gi << bits_per_axis) | gq);
                }
            return c;
        }

        std::size_t size() const { return points.size(); }

        /// Index of the nearest constellation point to y at the given symbol
        /// scale.
        std::size_t detect(cplx y, double scale) const
        {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < points.size(); ++i)
            {
                const double d = std::norm(y - scale * points[i]);
                if (d < best_d)
                {
                    best_d = d;
                    best = i;
                }
            }
            return best;
        }
    };

    inline int bit_errors(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

    // ------------------------------------------------------- BER simulation

    /// Disk of user placements parallel to the aperture plane.
    struct UserDisk
    {
        Vec3 center{20.0, -20.0, 30.0};
        double radius = 10.0;
        int count = 4;
    };

    /// Users placed uniformly over the disk (radius-sqrt sampling), default
    /// polarization, symbols left at their defaults.
    inline std::vector<User> draw_users(const UserDisk& disk, RandomStream& stream)
    {
        if (disk.count < 1)
            throw std::invalid_argument("draw_users: user count must be >= 1");
        if (disk.radius < 0.0)
            throw std::invalid_argument("draw_users: disk radius must be nonnegative");
        std::vector<User> users(static_cast<std::size_t>(disk.count));
        for (User& u : users)
        {
            const double r = disk.radius * std::sqrt(stream.next_double());
            const double a = 2.0 * std::numbers::pi * stream.next_double();
            u.position = disk.center + Vec3(r * std::cos(a), r * std::sin(a), 0.0);
        }
        return users;
    }

    struct BerRow
    {
        double snr_db = 0.0;
        int trials = 0;
        long long symbols = 0;
        long long bits = 0;
        long long bit_errors = 0;
        double ber = 0.0;
        double ber_db = 0.0;
    };

    struct BerReport
    {
        std::string constellation;
        double rho = 0.0;
        std::vector<BerRow> rows;
    };

    enum class ArrayModel
    {
        capa,
        spda
    };

    struct BerOptions
    {
        ArrayModel array = ArrayModel::capa;
        SpdaReference spda_ref = SpdaReference::resample;
    };

    // Link-level Monte Carlo. Per trial: draw user positions in the disk and
    // build the channel correlations once (they do not depend on the
    // symbols); per symbol slot: draw symbols, bisect the multiplier, obtain
    // the noiseless received vector z; per SNR: add circular Gaussian noise
    // with sigma^2 = P_t / SNR, detect by minimum distance and count
    // Gray-label bit errors. Streams are keyed by (seed, purpose, trial[,
    // slot]) so aggregates are independent of execution order, and noise
    // draws are shared across solver configurations for paired comparisons.
    inline BerReport simulate_ber(const Scenario& base, const UserDisk& disk,
                                  const FourierCoefficients* jd, const Constellation& constellation,
                                  const std::vector<double>& snr_db, int trials, int symbols_per_trial,
                                  std::uint64_t seed, double symbol_energy = 1.0,
                                  const BerOptions& options = {})
    {
        if (trials < 1)
            throw std::invalid_argument("simulate_ber: trials must be >= 1");
        if (symbols_per_trial < 1)
            throw std::invalid_argument("simulate_ber: symbols per trial must be >= 1");
        if (snr_db.empty())
            throw std::invalid_argument("simulate_ber: SNR list is empty");
        if (symbol_energy <= 0.0)
            throw std::invalid_argument("simulate_ber: symbol energy must be positive");
        if (base.rho < 1.0 && jd == nullptr)
            throw std::invalid_argument("simulate_ber: a reference design is required when rho < 1");

        const double scale = std::sqrt(symbol_energy);
        const std::size_t n_snr = snr_db.size();
        std::vector<long long> errors(n_snr, 0);

        std::optional<WaveformExpansion> jd_expansion;
        if (jd != nullptr)
            jd_expansion = synthesize(*jd, base.aperture);

        // discrete-array pieces are user-independent; built once
        std::optional<DiscreteArray> array;
        Eigen::VectorXcd x_d;
        if (options.array == ArrayModel::spda)
        {
            array = discretize(base.aperture, base.medium);
            x_d = Eigen::VectorXcd::Zero(array->size());
            if (jd != nullptr)
                x_d = spda_reference(*array, base, *jd, options.spda_ref);
        }

        for (int trial = 0; trial < trials; ++trial)
        {
            Scenario scenario = base;
            RandomStream user_stream(derive_stream_key(seed, {stream_tag::users,
                                                              static_cast<std::uint64_t>(trial)}));
            scenario.users = draw_users(disk, user_stream);
            for (User& u : scenario.users)
                u.symbol = scale * constellation.points.front();
            scenario.validate();

            CorrelationData data;
            try
            {
                if (options.array == ArrayModel::capa)
                {
                    data = correlation_data(scenario, jd_expansion ? &*jd_expansion : nullptr);
                }
                else
                {
                    const Eigen::MatrixXcd h = spda_channels(*array, scenario.users, scenario.medium);
                    data.Q = h * h.adjoint();
                    data.Q = 0.5 * (data.Q + data.Q.adjoint()).eval();
                    data.u = h * x_d;
                    data.c.resize(h.rows());
                }
            }
            catch (const solver_error& e)
            {
                throw solver_error("simulate_ber: trial " + std::to_string(trial) + " (seed " +
                                   std::to_string(seed) + ") failed: " + e.what());
            }

            RandomStream symbol_stream(derive_stream_key(seed, {stream_tag::symbols,
                                                                static_cast<std::uint64_t>(trial)}));
            const auto K = static_cast<std::size_t>(disk.count);
            std::vector<std::size_t> tx(K);

            for (int slot = 0; slot < symbols_per_trial; ++slot)
            {
                for (std::size_t k = 0; k < K; ++k)
                {
                    tx[k] = symbol_stream.next_below(static_cast<std::uint32_t>(constellation.size()));
                    data.c[static_cast<Eigen::Index>(k)] = scale * constellation.points[tx[k]];
                }

                Eigen::VectorXcd z;
                try
                {
                    const BisectionResult bis =
                        solve_multiplier(data, scenario.rho, scenario.power, 1e-10);
                    z = z_of_mu(bis.mu, data, scenario.rho);
                }
                catch (const solver_error& e)
                {
                    throw solver_error("simulate_ber: trial " + std::to_string(trial) + " slot " +
                                       std::to_string(slot) + " (seed " + std::to_string(seed) +
                                       ") failed: " + e.what());
                }

                RandomStream noise_stream(derive_stream_key(
                    seed, {stream_tag::noise, static_cast<std::uint64_t>(trial),
                           static_cast<std::uint64_t>(slot)}));
                for (std::size_t i = 0; i < n_snr; ++i)
                {
                    const double sigma2 = scenario.power / std::pow(10.0, snr_db[i] / 10.0);
                    for (std::size_t k = 0; k < K; ++k)
                    {
                        const cplx y = z[static_cast<Eigen::Index>(k)] + noise_stream.circular_normal(sigma2);
                        const std::size_t rx = constellation.detect(y, scale);
                        errors[i] += bit_errors(constellation.labels[tx[k]], constellation.labels[rx]);
                    }
                }
            }
        }

        BerReport report;
        report.constellation = constellation.name;
        report.rho = base.rho;
        const long long symbols =
            static_cast<long long>(trials) * symbols_per_trial * disk.count;
        const long long bits = symbols * constellation.bits_per_symbol;
        for (std::size_t i = 0; i < n_snr; ++i)
        {
            BerRow row;
            row.snr_db = snr_db[i];
            row.trials = trials;
            row.symbols = symbols;
            row.bits = bits;
            row.bit_errors = errors[i];
            row.ber = static_cast<double>(errors[i]) / static_cast<double>(bits);
            row.ber_db = row.ber > 0.0 ? 10.0 * std::log10(row.ber)
                                       : -std::numeric_limits<double>::infinity();
            report.rows.push_back(row);
        }
        return report;
    }

} // namespace capa

#endif
