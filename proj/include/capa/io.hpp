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

#ifndef CAPA_IO_HPP
#define CAPA_IO_HPP

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace capa
{
    inline std::uint64_t fnv1a64(std::string_view bytes)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (const char c : bytes)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    inline std::string hex64(std::uint64_t v)
    {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }

    /// Decimal with 12 significant digits; the regression-diff format used in
    /// every CSV.
    inline std::string fmt_num(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

    inline std::string fmt_int(long long v) { return std::to_string(v); }

    inline std::string iso8601_utc_now()
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    /// CSV writer: a `# key=value` comment header carrying the config hash,
    /// one column-name row, then data rows.
    class CsvWriter
    {
      public:
        CsvWriter(const std::filesystem::path& path, const std::string& header_comment,
                  std::initializer_list<std::string_view> columns)
            : out_(path)
        {
            if (!out_)
                throw std::runtime_error("CsvWriter: cannot open " + path.string());
            out_ << "# " << header_comment << "\n";
            bool first = true;
            for (const std::string_view c : columns)
            {
                if (!first)
                    out_ << ",";
                out_ << c;
                first = false;
            }
            out_ << "\n";
        }

        void row(const std::vector<std::string>& cells)
        {
            bool first = true;
            for (const std::string& c : cells)
            {
                if (!first)
                    out_ << ",";
                out_ << c;
                first = false;
            }
            out_ << "\n";
        }

        void close() { out_.close(); }

      private:
        std::ofstream out_;
    };

    inline std::string read_file(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("read_file: cannot open " + path.string());
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    /// Per-run metadata: config hash, code version, seed, timestamps and the
    /// hashed list of every file the command produced.
    struct RunManifest
    {
        std::string command;
        std::string config_hash;
        std::uint64_t seed = 0;
        std::string code_version;
        std::string started_at;
        std::string finished_at;
        std::vector<std::filesystem::path> outputs;
    };

} // namespace capa

#endif
