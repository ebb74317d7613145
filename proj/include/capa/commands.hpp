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

#ifndef CAPA_COMMANDS_HPP
#define CAPA_COMMANDS_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "capa/config.hpp"
#include "capa/evaluation.hpp"
#include "capa/io.hpp"
#include "capa/version.hpp"

// Batch command layer behind the CLI. Every command loads a configuration,
// applies the command-line overrides, writes its data files (each carrying
// the effective config hash in a header row) plus a run manifest, and is
// byte-reproducible given the same configuration and seed (timestamps live
// only in the manifest).

namespace capa
{
    struct CommandOptions
    {
        std::optional<std::filesystem::path> config_path;
        std::filesystem::path out_dir = ".";
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<int> quadrature_n;
        std::optional<double> symbol_energy;
        std::string array = "capa"; // capa | spda | both
        SpdaReference spda_ref = SpdaReference::resample;
        std::string sweep_var;       // rho | frequency_hz | aperture_m2
        std::vector<double> values;  // sweep values, or the ismr rho list
        double step_deg = 1.0;       // beampattern grid step
    };

    namespace detail
    {
        inline ScenarioConfig effective_config(const CommandOptions& opt)
        {
            ScenarioConfig cfg =
                opt.config_path ? load_scenario(*opt.config_path) : ScenarioConfig{};
            if (opt.seed)
                cfg.seed = *opt.seed;
            if (opt.trials)
                cfg.trials = *opt.trials;
            if (opt.quadrature_n)
                cfg.quadrature_n = *opt.quadrature_n;
            if (opt.symbol_energy)
                cfg.symbol_energy = *opt.symbol_energy;
            if (cfg.trials < 1 || cfg.quadrature_n < 1 || cfg.symbol_energy <= 0.0)
                throw config_error("config: overrides must keep trials/quadrature_n/symbol_energy positive");
            return cfg;
        }

        inline std::string header_comment(const ScenarioConfig& cfg)
        {
            return "config_hash=" + hex64(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed) +
                   " version=" + version;
        }

        inline std::vector<std::string> array_list(const std::string& array)
        {
            if (array == "capa" || array == "spda")
                return {array};
            if (array == "both")
                return {"capa", "spda"};
            throw config_error("config: --array must be capa, spda or both");
        }

        inline std::optional<FourierCoefficients> maybe_reference(const ScenarioConfig& cfg,
                                                                  const Scenario& base)
        {
            if (base.targets.empty())
                return std::nullopt;
            return design_reference(base.targets, cfg.pt, base.aperture, base.medium).coefficients;
        }

        inline void write_json(const std::filesystem::path& path, const nlohmann::json& j)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot open " + path.string());
            out << j.dump(2) << "\n";
        }

        inline RunManifest begin_manifest(const std::string& command, const ScenarioConfig& cfg)
        {
            RunManifest m;
            m.command = command;
            m.config_hash = hex64(config_hash(cfg));
            m.seed = cfg.seed;
            m.code_version = version;
            m.started_at = iso8601_utc_now();
            return m;
        }

        inline void finish_manifest(RunManifest& m, const std::filesystem::path& out_dir)
        {
            m.finished_at = iso8601_utc_now();
            nlohmann::json j;
            j["command"] = m.command;
            j["config_hash"] = m.config_hash;
            j["seed"] = m.seed;
            j["code_version"] = m.code_version;
            j["started_at"] = m.started_at;
            j["finished_at"] = m.finished_at;
            j["outputs"] = nlohmann::json::array();
            for (const std::filesystem::path& p : m.outputs)
                j["outputs"].push_back({{"path", p.filename().string()},
                                        {"fnv64", hex64(fnv1a64(read_file(p)))}});
            write_json(out_dir / "run_manifest.json", j);
        }

        inline void write_coefficients_csv(const std::filesystem::path& path,
                                           const ScenarioConfig& cfg, const FourierCoefficients& w)
        {
            CsvWriter csv(path, header_comment(cfg), {"m_x", "m_y", "re", "im"});
            for (int mx = -w.order.mx; mx <= w.order.mx; ++mx)
                for (int my = -w.order.my; my <= w.order.my; ++my)
                {
                    const cplx v = w.w[w.order.index(mx, my)];
                    csv.row({fmt_int(mx), fmt_int(my), fmt_num(v.real()), fmt_num(v.imag())});
                }
        }

        inline nlohmann::json z_json(const Eigen::VectorXcd& z)
        {
            nlohmann::json out = nlohmann::json::array();
            for (Eigen::Index k = 0; k < z.size(); ++k)
                out.push_back({z[k].real(), z[k].imag()});
            return out;
        }

        struct SolveOutcome
        {
            double mu = 0.0;
            Eigen::VectorXcd z;
            double f_c = 0.0;
            double f_s = 0.0;
            double objective = 0.0;
            int iterations = 0;
        };

        inline SolveOutcome run_one_solve(const std::string& array, const Scenario& scenario,
                                          const FourierCoefficients* jd, SpdaReference spda_ref)
        {
            SolveOutcome o;
            if (array == "capa")
            {
                const IsacSolution sol = solve_isac(scenario, jd);
                o = {sol.mu, sol.z, sol.mui_energy, sol.mismatch_energy, sol.objective,
                     sol.bisection_iterations};
            }
            else
            {
                const SpdaSolution sol = spda_solve(scenario, jd, spda_ref);
                o = {sol.mu, sol.z, sol.mui_energy, sol.mismatch_energy, sol.objective,
                     sol.bisection_iterations};
            }
            return o;
        }
    } // namespace detail

    /// `reference`: wavenumber-domain max-min reference design; emits the
    /// coefficient CSV and a per-target gain summary.
    inline RunManifest run_reference(const CommandOptions& opt)
    {
        const ScenarioConfig cfg = detail::effective_config(opt);
        const Scenario base = base_scenario(cfg);
        if (base.targets.empty())
            throw config_error("reference: the target set is empty");
        std::filesystem::create_directories(opt.out_dir);
        RunManifest manifest = detail::begin_manifest("reference", cfg);

        const ReferenceDesign design =
            design_reference(base.targets, cfg.pt, base.aperture, base.medium);

        const auto coeff_path = opt.out_dir / "reference_coefficients.csv";
        detail::write_coefficients_csv(coeff_path, cfg, design.coefficients);
        manifest.outputs.push_back(coeff_path);

        nlohmann::json j;
        j["config_hash"] = hex64(config_hash(cfg));
        j["seed"] = cfg.seed;
        j["min_gain"] = design.min_gain;
        j["duplicates_collapsed"] = base.targets.duplicates_collapsed;
        j["iterations"] = design.trace.iterations;
        j["converged"] = design.trace.converged;
        j["winning_start"] = design.trace.winning_start;
        j["target_gains"] = nlohmann::json::array();
        for (std::size_t l = 0; l < base.targets.size(); ++l)
            j["target_gains"].push_back({{"azimuth_deg", rad2deg(base.targets.directions[l].azimuth)},
                                         {"elevation_deg", rad2deg(base.targets.directions[l].elevation)},
                                         {"gain", design.target_gains[l]}});
        const auto gains_path = opt.out_dir / "reference_gains.json";
        detail::write_json(gains_path, j);
        manifest.outputs.push_back(gains_path);

        detail::finish_manifest(manifest, opt.out_dir);
        return manifest;
    }

    /// `solve`: one full solve at the configured rho; JSON summary plus the
    /// waveform coefficient CSVs.
    inline RunManifest run_solve(const CommandOptions& opt)
    {
        const ScenarioConfig cfg = detail::effective_config(opt);
        const std::string array = detail::array_list(opt.array).front();
        if (opt.array == "both")
            throw config_error("solve: --array must be capa or spda");
        Scenario scenario = base_scenario(cfg);
        scenario.users = users_for_trial(cfg, 0);
        scenario.validate();
        std::filesystem::create_directories(opt.out_dir);
        RunManifest manifest = detail::begin_manifest("solve", cfg);

        const std::optional<FourierCoefficients> jd = detail::maybe_reference(cfg, scenario);
        if (scenario.rho < 1.0 && !jd)
            throw config_error("solve: rho < 1 requires a target set");

        detail::SolveOutcome o;
        if (array == "capa")
        {
            const IsacSolution sol = solve_isac(scenario, jd ? &*jd : nullptr);
            o = {sol.mu, sol.z, sol.mui_energy, sol.mismatch_energy, sol.objective,
                 sol.bisection_iterations};
            if (sol.waveform.fourier)
            {
                const auto p = opt.out_dir / "waveform_fourier.csv";
                detail::write_coefficients_csv(p, cfg, *sol.waveform.fourier);
                manifest.outputs.push_back(p);
            }
            const auto p = opt.out_dir / "waveform_channel.csv";
            CsvWriter csv(p, detail::header_comment(cfg), {"user", "beta_re", "beta_im"});
            for (const ChannelTerm& t : sol.waveform.channel)
                csv.row({fmt_int(t.user), fmt_num(t.coefficient.real()),
                         fmt_num(t.coefficient.imag())});
            csv.close();
            manifest.outputs.push_back(p);
        }
        else
        {
            const SpdaSolution sol = spda_solve(scenario, jd ? &*jd : nullptr, opt.spda_ref);
            o = {sol.mu, sol.z, sol.mui_energy, sol.mismatch_energy, sol.objective,
                 sol.bisection_iterations};
            const auto p = opt.out_dir / "spda_elements.csv";
            CsvWriter csv(p, detail::header_comment(cfg), {"element", "pos_x_m", "pos_y_m", "re", "im"});
            for (Eigen::Index n = 0; n < sol.waveform.x.size(); ++n)
                csv.row({fmt_int(n), fmt_num(sol.waveform.array.positions[static_cast<std::size_t>(n)].x),
                         fmt_num(sol.waveform.array.positions[static_cast<std::size_t>(n)].y),
                         fmt_num(sol.waveform.x[n].real()), fmt_num(sol.waveform.x[n].imag())});
            csv.close();
            manifest.outputs.push_back(p);
        }

        nlohmann::json j;
        j["array_type"] = array;
        j["mu_star"] = o.mu;
        j["z"] = detail::z_json(o.z);
        j["f_c"] = o.f_c;
        j["f_s"] = o.f_s;
        j["objective"] = o.objective;
        j["bisection_iters"] = o.iterations;
        j["config_hash"] = hex64(config_hash(cfg));
        j["seed"] = cfg.seed;
        const auto sol_path = opt.out_dir / "solution.json";
        detail::write_json(sol_path, j);
        manifest.outputs.push_back(sol_path);

        detail::finish_manifest(manifest, opt.out_dir);
        return manifest;
    }

    /// `sweep`: trial-averaged (f_c, f_s, objective) rows over a rho,
    /// frequency or aperture-area list, per array type.
    inline RunManifest run_sweep(const CommandOptions& opt)
    {
        const ScenarioConfig cfg = detail::effective_config(opt);
        if (opt.values.empty())
            throw config_error("sweep: the sweep list is empty (pass --values)");
        if (opt.sweep_var != "rho" && opt.sweep_var != "frequency_hz" && opt.sweep_var != "aperture_m2")
            throw config_error("sweep: --sweep must be rho, frequency_hz or aperture_m2");
        const std::vector<std::string> arrays = detail::array_list(opt.array);
        std::filesystem::create_directories(opt.out_dir);
        RunManifest manifest = detail::begin_manifest("sweep", cfg);

        const auto path = opt.out_dir / "sweep.csv";
        CsvWriter csv(path, detail::header_comment(cfg),
                      {"sweep_var", "value", "array_type", "f_c", "f_s", "objective"});

        for (const double value : opt.values)
        {
            ScenarioConfig point = cfg;
            if (opt.sweep_var == "rho")
            {
                if (value < 0.0 || value > 1.0)
                    throw config_error("sweep: rho must lie in [0,1]");
                point.rho = value;
            }
            else if (opt.sweep_var == "frequency_hz")
            {
                if (value <= 0.0)
                    throw config_error("sweep: frequency_hz must be positive");
                point.frequency_hz = value;
            }
            else
            {
                if (value <= 0.0)
                    throw config_error("sweep: aperture_m2 must be positive");
                point.lx_m = point.ly_m = std::sqrt(value);
            }

            const Scenario base = base_scenario(point);
            const std::optional<FourierCoefficients> jd = detail::maybe_reference(point, base);
            if (base.rho < 1.0 && !jd)
                throw config_error("sweep: rho < 1 requires a target set");

            for (const std::string& array : arrays)
            {
                double f_c = 0.0, f_s = 0.0, obj = 0.0;
                for (int t = 0; t < point.trials; ++t)
                {
                    Scenario scenario = base;
                    scenario.users = users_for_trial(point, t);
                    scenario.validate();
                    const detail::SolveOutcome o =
                        detail::run_one_solve(array, scenario, jd ? &*jd : nullptr, opt.spda_ref);
                    f_c += o.f_c;
                    f_s += o.f_s;
                    obj += o.objective;
                }
                const double n = point.trials;
                csv.row({opt.sweep_var, fmt_num(value), array, fmt_num(f_c / n), fmt_num(f_s / n),
                         fmt_num(obj / n)});
            }
        }
        csv.close();
        manifest.outputs.push_back(path);
        detail::finish_manifest(manifest, opt.out_dir);
        return manifest;
    }

    /// `beampattern`: dense far-field gain grid of the solved waveform plus
    /// target markers for plotting.
    inline RunManifest run_beampattern(const CommandOptions& opt)
    {
        const ScenarioConfig cfg = detail::effective_config(opt);
        if (opt.array == "both")
            throw config_error("beampattern: --array must be capa or spda");
        Scenario scenario = base_scenario(cfg);
        scenario.users = users_for_trial(cfg, 0);
        scenario.validate();
        std::filesystem::create_directories(opt.out_dir);
        RunManifest manifest = detail::begin_manifest("beampattern", cfg);

        const std::optional<FourierCoefficients> jd = detail::maybe_reference(cfg, scenario);
        if (scenario.rho < 1.0 && !jd)
            throw config_error("beampattern: rho < 1 requires a target set");

        BeampatternGrid grid;
        if (opt.array == "capa")
        {
            const IsacSolution sol = solve_isac(scenario, jd ? &*jd : nullptr);
            grid = beampattern(sol.waveform, scenario, gauss_legendre_rule(scenario.quadrature_n),
                               -90.0, 90.0, 0.0, 90.0, opt.step_deg);
        }
        else
        {
            const SpdaSolution sol = spda_solve(scenario, jd ? &*jd : nullptr, opt.spda_ref);
            grid = beampattern(sol.waveform, scenario.medium, -90.0, 90.0, 0.0, 90.0, opt.step_deg);
        }

        // the distance-dependent path loss is metadata, never folded into the
        // gains: power density at range r equals (prefactor / r^2) * gain
        const double loss_prefactor = path_loss(1.0, scenario.medium);
        const auto grid_path = opt.out_dir / "beampattern.csv";
        CsvWriter csv(grid_path,
                      detail::header_comment(cfg) +
                          " path_loss_prefactor_over_r2=" + fmt_num(loss_prefactor),
                      {"theta_deg", "phi_deg", "gain"});
        for (std::size_t ia = 0; ia < grid.azimuth_deg.size(); ++ia)
            for (std::size_t ie = 0; ie < grid.elevation_deg.size(); ++ie)
                csv.row({fmt_num(grid.azimuth_deg[ia]), fmt_num(grid.elevation_deg[ie]),
                         fmt_num(grid.gain(static_cast<Eigen::Index>(ia),
                                           static_cast<Eigen::Index>(ie)))});
        csv.close();
        manifest.outputs.push_back(grid_path);

        const auto targets_path = opt.out_dir / "beampattern_targets.csv";
        CsvWriter tcsv(targets_path, detail::header_comment(cfg), {"theta_deg", "phi_deg"});
        for (const Direction& d : scenario.targets.directions)
            tcsv.row({fmt_num(rad2deg(d.azimuth)), fmt_num(rad2deg(d.elevation))});
        tcsv.close();
        manifest.outputs.push_back(targets_path);

        detail::finish_manifest(manifest, opt.out_dir);
        return manifest;
    }

    /// `ismr`: integrated sidelobe-to-mainlobe ratio rows over a rho list,
    /// per array type.
    inline RunManifest run_ismr(const CommandOptions& opt)
    {
        const ScenarioConfig cfg = detail::effective_config(opt);
        const std::vector<std::string> arrays = detail::array_list(opt.array);
        std::vector<double> rhos = opt.values;
        if (rhos.empty())
            rhos = {cfg.rho};
        std::filesystem::create_directories(opt.out_dir);
        RunManifest manifest = detail::begin_manifest("ismr", cfg);

        const Scenario base0 = base_scenario(cfg);
        if (base0.targets.empty())
            throw config_error("ismr: the target set is empty");
        const std::optional<FourierCoefficients> jd = detail::maybe_reference(cfg, base0);

        const auto path = opt.out_dir / "ismr.csv";
        CsvWriter csv(path, detail::header_comment(cfg), {"rho", "array_type", "ismr_db"});
        for (const double rho : rhos)
        {
            if (rho < 0.0 || rho > 1.0)
                throw config_error("ismr: rho must lie in [0,1]");
            Scenario scenario = base0;
            scenario.rho = rho;
            scenario.users = users_for_trial(cfg, 0);
            scenario.validate();
            for (const std::string& array : arrays)
            {
                BeampatternGrid grid;
                if (array == "capa")
                {
                    const IsacSolution sol = solve_isac(scenario, jd ? &*jd : nullptr);
                    grid = beampattern(sol.waveform, scenario,
                                       gauss_legendre_rule(scenario.quadrature_n), -90.0, 90.0, 0.0,
                                       90.0, opt.step_deg);
                }
                else
                {
                    const SpdaSolution sol = spda_solve(scenario, jd ? &*jd : nullptr, opt.spda_ref);
                    grid = beampattern(sol.waveform, scenario.medium, -90.0, 90.0, 0.0, 90.0,
                                       opt.step_deg);
                }
                csv.row({fmt_num(rho), array, fmt_num(ismr_db(grid, scenario.targets))});
            }
        }
        csv.close();
        manifest.outputs.push_back(path);
        detail::finish_manifest(manifest, opt.out_dir);
        return manifest;
    }

    /// `ber`: Monte Carlo link-level simulation over the configured SNR list.
    inline RunManifest run_ber(const CommandOptions& opt)
    {
        const ScenarioConfig cfg = detail::effective_config(opt);
        if (opt.array == "both")
            throw config_error("ber: --array must be capa or spda");
        if (cfg.users_explicit)
            throw config_error("ber: requires the random user placement spec (count/disk), not an explicit list");
        Scenario base = base_scenario(cfg);
        std::filesystem::create_directories(opt.out_dir);
        RunManifest manifest = detail::begin_manifest("ber", cfg);

        const std::optional<FourierCoefficients> jd = detail::maybe_reference(cfg, base);
        if (base.rho < 1.0 && !jd)
            throw config_error("ber: rho < 1 requires a target set");

        BerOptions ber_opt;
        ber_opt.array = opt.array == "capa" ? ArrayModel::capa : ArrayModel::spda;
        ber_opt.spda_ref = opt.spda_ref;
        const BerReport report =
            simulate_ber(base, cfg.disk, jd ? &*jd : nullptr, Constellation::make(cfg.constellation),
                         cfg.snr_db, cfg.trials, cfg.symbols_per_trial, cfg.seed, cfg.symbol_energy,
                         ber_opt);

        const auto path = opt.out_dir / "ber.csv";
        CsvWriter csv(path, detail::header_comment(cfg),
                      {"snr_db", "rho", "constellation", "trials", "bits", "bit_errors", "ber",
                       "ber_db"});
        for (const BerRow& row : report.rows)
            csv.row({fmt_num(row.snr_db), fmt_num(cfg.rho), report.constellation,
                     fmt_int(row.trials), fmt_int(row.bits), fmt_int(row.bit_errors),
                     fmt_num(row.ber), fmt_num(row.ber_db)});
        csv.close();
        manifest.outputs.push_back(path);
        detail::finish_manifest(manifest, opt.out_dir);
        return manifest;
    }

} // namespace capa

#endif
