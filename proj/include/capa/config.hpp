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

#ifndef CAPA_CONFIG_HPP
#define CAPA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "capa/evaluation.hpp"
#include "capa/io.hpp"
#include "capa/scenario.hpp"

namespace capa
{
    class config_error : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    struct UserSpec
    {
        Vec3 position = Vec3::Zero();
        Vec3 polarization = Vec3(0.0, 1.0, 0.0);
        std::optional<cplx> symbol;
    };

    // Batch scenario configuration. Field names and units follow the JSON
    // schema: angles in degrees, lengths in meters; internally everything is
    // converted to radians. Defaults reproduce the reference setup: 2.4 GHz,
    // 0.6 m x 0.6 m aperture, P_t = 5 A^2, rho = 0.5, N = 20, three targets,
    // four users drawn in a 10 m disk centered at (20, -20, 30) m, QPSK at
    // 10 dB transmit SNR.
    struct ScenarioConfig
    {
        double frequency_hz = 2.4e9;
        double lx_m = 0.6;
        double ly_m = 0.6;
        double pt = 5.0;
        double rho = 0.5;
        int quadrature_n = 20;
        std::vector<Direction> targets{Direction::from_degrees(45.0, 15.0),
                                       Direction::from_degrees(-60.0, 45.0),
                                       Direction::from_degrees(30.0, 60.0)};
        bool users_explicit = false;
        std::vector<UserSpec> explicit_users;
        UserDisk disk; // used when users_explicit is false
        std::vector<double> snr_db{10.0};
        std::string constellation = "QPSK";
        int trials = 1000;
        int symbols_per_trial = 1;
        std::uint64_t seed = 1;
        double symbol_energy = 1.0;
    };

    namespace detail
    {
        inline void reject_unknown_keys(const nlohmann::json& obj, const char* where,
                                        std::initializer_list<std::string_view> known)
        {
            for (const auto& [key, value] : obj.items())
            {
                bool ok = false;
                for (const std::string_view k : known)
                    ok = ok || key == k;
                if (!ok)
                    throw config_error(std::string("config: unknown field '") + key + "' in " + where);
            }
        }

        inline Vec3 vec3_of(const nlohmann::json& j, const char* field)
        {
            if (!j.is_array() || j.size() != 3 || !j[0].is_number())
                throw config_error(std::string("config: ") + field + " must be an array of 3 numbers");
            return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
        }
    } // namespace detail

    /// Parses and validates a configuration; every invariant violation names
    /// its field. Empty input yields the full default scenario.
    inline ScenarioConfig parse_scenario(const std::string& text, const std::string& origin)
    {
        nlohmann::json root;
        {
            std::string trimmed = text;
            trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
            if (trimmed.empty())
                root = nlohmann::json::object();
            else
            {
                try
                {
                    root = nlohmann::json::parse(text);
                }
                catch (const nlohmann::json::parse_error& e)
                {
                    throw config_error("config: parse error in " + origin + ": " + e.what());
                }
            }
        }
        if (!root.is_object())
            throw config_error("config: top level of " + origin + " must be a JSON object");

        detail::reject_unknown_keys(root, "the top level",
                                    {"frequency_hz", "aperture", "power", "rho", "quadrature_n",
                                     "targets", "users", "snr_db", "constellation", "trials",
                                     "symbols_per_trial", "seed", "symbol_energy"});

        ScenarioConfig cfg;
        if (root.contains("frequency_hz"))
            cfg.frequency_hz = root["frequency_hz"].get<double>();
        if (cfg.frequency_hz <= 0.0)
            throw config_error("config: frequency_hz must be positive");

        if (root.contains("aperture"))
        {
            const auto& ap = root["aperture"];
            detail::reject_unknown_keys(ap, "aperture", {"lx_m", "ly_m"});
            if (ap.contains("lx_m"))
                cfg.lx_m = ap["lx_m"].get<double>();
            if (ap.contains("ly_m"))
                cfg.ly_m = ap["ly_m"].get<double>();
        }
        if (cfg.lx_m <= 0.0 || cfg.ly_m <= 0.0)
            throw config_error("config: aperture side lengths must be positive");

        if (root.contains("power"))
        {
            const auto& p = root["power"];
            detail::reject_unknown_keys(p, "power", {"pt"});
            if (p.contains("pt"))
                cfg.pt = p["pt"].get<double>();
        }
        if (cfg.pt <= 0.0)
            throw config_error("config: power.pt must be positive");

        if (root.contains("rho"))
            cfg.rho = root["rho"].get<double>();
        if (cfg.rho < 0.0 || cfg.rho > 1.0)
            throw config_error("config: rho must lie in [0,1]");

        if (root.contains("quadrature_n"))
            cfg.quadrature_n = root["quadrature_n"].get<int>();
        if (cfg.quadrature_n < 1)
            throw config_error("config: quadrature_n must be >= 1");

        if (root.contains("targets"))
        {
            cfg.targets.clear();
            for (const auto& t : root["targets"])
            {
                detail::reject_unknown_keys(t, "targets[]", {"azimuth_deg", "elevation_deg"});
                if (!t.contains("azimuth_deg") || !t.contains("elevation_deg"))
                    throw config_error("config: each target needs azimuth_deg and elevation_deg");
                cfg.targets.push_back(Direction::from_degrees(t["azimuth_deg"].get<double>(),
                                                              t["elevation_deg"].get<double>()));
            }
        }
        for (const Direction& d : cfg.targets)
        {
            if (d.azimuth < -std::numbers::pi || d.azimuth > std::numbers::pi)
                throw config_error("config: target azimuth_deg must lie in [-180, 180]");
            if (d.elevation < 0.0 || d.elevation > 0.5 * std::numbers::pi)
                throw config_error("config: target elevation_deg must lie in [0, 90]");
        }
        if (cfg.rho < 1.0 && cfg.targets.empty())
            throw config_error("config: targets must be non-empty when rho < 1 (sensing requires targets)");

        if (root.contains("users"))
        {
            const auto& u = root["users"];
            if (u.is_array())
            {
                cfg.users_explicit = true;
                for (const auto& e : u)
                {
                    detail::reject_unknown_keys(e, "users[]", {"position_m", "polarization", "symbol"});
                    if (!e.contains("position_m"))
                        throw config_error("config: each explicit user needs position_m");
                    UserSpec spec;
                    spec.position = detail::vec3_of(e["position_m"], "users[].position_m");
                    if (e.contains("polarization"))
                        spec.polarization = detail::vec3_of(e["polarization"], "users[].polarization");
                    if (spec.polarization.norm() == 0.0)
                        throw config_error("config: users[].polarization must be nonzero");
                    spec.polarization.normalize();
                    if (e.contains("symbol"))
                    {
                        const auto& sym = e["symbol"];
                        if (!sym.is_array() || sym.size() != 2)
                            throw config_error("config: users[].symbol must be [re, im]");
                        spec.symbol = cplx(sym[0].get<double>(), sym[1].get<double>());
                    }
                    cfg.explicit_users.push_back(spec);
                }
                if (cfg.explicit_users.empty())
                    throw config_error("config: explicit user list must be non-empty");
            }
            else if (u.is_object())
            {
                detail::reject_unknown_keys(u, "users", {"count", "disk_center_m", "disk_radius_m"});
                if (u.contains("count"))
                    cfg.disk.count = u["count"].get<int>();
                if (u.contains("disk_center_m"))
                    cfg.disk.center = detail::vec3_of(u["disk_center_m"], "users.disk_center_m");
                if (u.contains("disk_radius_m"))
                    cfg.disk.radius = u["disk_radius_m"].get<double>();
                if (cfg.disk.count < 1)
                    throw config_error("config: users.count must be >= 1");
                if (cfg.disk.radius < 0.0)
                    throw config_error("config: users.disk_radius_m must be nonnegative");
            }
            else
            {
                throw config_error("config: users must be a list or a random-placement object");
            }
        }

        if (root.contains("snr_db"))
        {
            cfg.snr_db.clear();
            for (const auto& v : root["snr_db"])
                cfg.snr_db.push_back(v.get<double>());
            if (cfg.snr_db.empty())
                throw config_error("config: snr_db must be non-empty");
        }

        if (root.contains("constellation"))
            cfg.constellation = root["constellation"].get<std::string>();
        Constellation::make(cfg.constellation); // validates the name

        if (root.contains("trials"))
            cfg.trials = root["trials"].get<int>();
        if (cfg.trials < 1)
            throw config_error("config: trials must be >= 1");

        if (root.contains("symbols_per_trial"))
            cfg.symbols_per_trial = root["symbols_per_trial"].get<int>();
        if (cfg.symbols_per_trial < 1)
            throw config_error("config: symbols_per_trial must be >= 1");

        if (root.contains("seed"))
            cfg.seed = root["seed"].get<std::uint64_t>();

        if (root.contains("symbol_energy"))
            cfg.symbol_energy = root["symbol_energy"].get<double>();
        if (cfg.symbol_energy <= 0.0)
            throw config_error("config: symbol_energy must be positive");

        return cfg;
    }

    inline ScenarioConfig load_scenario(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw config_error("config: cannot open " + path.string());
        const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        return parse_scenario(text, path.string());
    }

    /// Canonical JSON form of the effective configuration; key order is
    /// lexicographic, so the serialization (and its hash) is stable.
    inline nlohmann::json to_json(const ScenarioConfig& cfg)
    {
        nlohmann::json j;
        j["frequency_hz"] = cfg.frequency_hz;
        j["aperture"] = {{"lx_m", cfg.lx_m}, {"ly_m", cfg.ly_m}};
        j["power"] = {{"pt", cfg.pt}};
        j["rho"] = cfg.rho;
        j["quadrature_n"] = cfg.quadrature_n;
        j["targets"] = nlohmann::json::array();
        for (const Direction& d : cfg.targets)
            j["targets"].push_back(
                {{"azimuth_deg", rad2deg(d.azimuth)}, {"elevation_deg", rad2deg(d.elevation)}});
        if (cfg.users_explicit)
        {
            j["users"] = nlohmann::json::array();
            for (const UserSpec& u : cfg.explicit_users)
            {
                nlohmann::json e;
                e["position_m"] = {u.position.x(), u.position.y(), u.position.z()};
                e["polarization"] = {u.polarization.x(), u.polarization.y(), u.polarization.z()};
                if (u.symbol)
                    e["symbol"] = {u.symbol->real(), u.symbol->imag()};
                j["users"].push_back(e);
            }
        }
        else
        {
            j["users"] = {{"count", cfg.disk.count},
                          {"disk_center_m", {cfg.disk.center.x(), cfg.disk.center.y(), cfg.disk.center.z()}},
                          {"disk_radius_m", cfg.disk.radius}};
        }
        j["snr_db"] = cfg.snr_db;
        j["constellation"] = cfg.constellation;
        j["trials"] = cfg.trials;
        j["symbols_per_trial"] = cfg.symbols_per_trial;
        j["seed"] = cfg.seed;
        j["symbol_energy"] = cfg.symbol_energy;
        return j;
    }

    inline std::uint64_t config_hash(const ScenarioConfig& cfg) { return fnv1a64(to_json(cfg).dump()); }

    /// Scenario skeleton (no users) from a configuration.
    inline Scenario base_scenario(const ScenarioConfig& cfg)
    {
        Scenario s;
        s.aperture = {cfg.lx_m, cfg.ly_m};
        s.medium = Medium::from_frequency(cfg.frequency_hz);
        s.targets = TargetSet::of(cfg.targets);
        s.power = cfg.pt;
        s.rho = cfg.rho;
        s.quadrature_n = cfg.quadrature_n;
        return s;
    }

    // Users for trial `trial`: explicit users as configured (missing symbols
    // drawn), or positions drawn in the disk plus drawn symbols. Streams are
    // keyed by (seed, purpose, trial) so a trial's draw never depends on the
    // sweep point or command that requests it.
    inline std::vector<User> users_for_trial(const ScenarioConfig& cfg, int trial)
    {
        const Constellation constellation = Constellation::make(cfg.constellation);
        const double scale = std::sqrt(cfg.symbol_energy);
        std::vector<User> users;
        RandomStream symbols(derive_stream_key(cfg.seed, {stream_tag::symbols,
                                                          static_cast<std::uint64_t>(trial)}));
        if (cfg.users_explicit)
        {
            for (const UserSpec& spec : cfg.explicit_users)
            {
                User u;
                u.position = spec.position;
                u.polarization = spec.polarization;
                u.symbol = spec.symbol ? *spec.symbol
                                       : scale * constellation.points[symbols.next_below(
                                                     static_cast<std::uint32_t>(constellation.size()))];
                users.push_back(u);
            }
            return users;
        }
        RandomStream positions(derive_stream_key(cfg.seed, {stream_tag::users,
                                                            static_cast<std::uint64_t>(trial)}));
        users = draw_users(cfg.disk, positions);
        for (User& u : users)
            u.symbol = scale * constellation.points[symbols.next_below(
                                   static_cast<std::uint32_t>(constellation.size()))];
        return users;
    }

} // namespace capa

#endif
