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

#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "capa/capa.hpp"

namespace
{
    void add_common_options(CLI::App* sub, capa::CommandOptions& opt, std::string& spda_ref)
    {
        sub->add_option("--config", opt.config_path, "Scenario configuration file (JSON)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "Output directory (created if missing)");
        sub->add_option("--seed", opt.seed, "Master seed override");
        sub->add_option("--trials", opt.trials, "Monte Carlo trial count override");
        sub->add_option("--quadrature-n", opt.quadrature_n, "Gauss-Legendre order override");
        sub->add_option("--symbol-energy", opt.symbol_energy, "Mean symbol energy override");
        sub->add_option("--array", opt.array, "Transmitter model: capa, spda or both")
            ->check(CLI::IsMember({"capa", "spda", "both"}));
        sub->add_option("--spda-ref", spda_ref, "SPDA reference mode: resample or native")
            ->check(CLI::IsMember({"resample", "native"}));
    }
} // namespace

namespace
{
int run_cli(int argc, char** argv)
{
    CLI::App app{"capa-isac: continuous-aperture ISAC waveform design and evaluation"};
    app.require_subcommand(1);

    capa::CommandOptions opt;
    std::string spda_ref = "resample";

    CLI::App* reference = app.add_subcommand("reference", "Design the max-min reference sensing waveform");
    add_common_options(reference, opt, spda_ref);

    CLI::App* solve = app.add_subcommand("solve", "Solve the weighted MUI/mismatch program once");
    add_common_options(solve, opt, spda_ref);

    CLI::App* sweep = app.add_subcommand("sweep", "Trial-averaged tradeoff sweep");
    add_common_options(sweep, opt, spda_ref);
    sweep->add_option("--sweep", opt.sweep_var, "Sweep variable: rho, frequency_hz or aperture_m2")
        ->required();
    sweep->add_option("--values", opt.values, "Sweep values (comma separated)")
        ->required()
        ->delimiter(',');

    CLI::App* beampattern = app.add_subcommand("beampattern", "Far-field beampattern grid");
    add_common_options(beampattern, opt, spda_ref);
    beampattern->add_option("--step", opt.step_deg, "Grid step in degrees");

    CLI::App* ismr = app.add_subcommand("ismr", "Integrated sidelobe-to-mainlobe ratio");
    add_common_options(ismr, opt, spda_ref);
    ismr->add_option("--values", opt.values, "rho values (comma separated; default: config rho)")
        ->delimiter(',');
    ismr->add_option("--step", opt.step_deg, "Grid step in degrees");

    CLI::App* ber = app.add_subcommand("ber", "Monte Carlo bit error rate simulation");
    add_common_options(ber, opt, spda_ref);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    opt.spda_ref = spda_ref == "native" ? capa::SpdaReference::native : capa::SpdaReference::resample;

    try
    {
        capa::RunManifest manifest;
        if (reference->parsed())
            manifest = capa::run_reference(opt);
        else if (solve->parsed())
            manifest = capa::run_solve(opt);
        else if (sweep->parsed())
            manifest = capa::run_sweep(opt);
        else if (beampattern->parsed())
            manifest = capa::run_beampattern(opt);
        else if (ismr->parsed())
            manifest = capa::run_ismr(opt);
        else
            manifest = capa::run_ber(opt);

        std::cout << manifest.command << ": wrote " << manifest.outputs.size()
                  << " file(s) to " << opt.out_dir.string() << " (config " << manifest.config_hash
                  << ", seed " << manifest.seed << ")\n";
        return 0;
    }
    catch (const capa::config_error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const capa::solver_error& e)
    {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
} // namespace

int main(int argc, char** argv)
{
    try
    {
        return run_cli(argc, argv);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
