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

#ifndef CAPA_RNG_HPP
#define CAPA_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include "capa/geometry.hpp"

namespace capa
{
    // Philox 4x32-10 counter-based generator (Salmon et al., "Parallel random
    // numbers: as easy as 1, 2, 3"). Counter mode makes every stream a pure
    // function of (key, counter), so trial/user/slot substreams can be opened
    // in any order and in parallel while producing identical values.
    struct Philox4x32
    {
        static constexpr std::uint32_t mult0 = 0xD2511F53u;
        static constexpr std::uint32_t mult1 = 0xCD9E8D57u;
        static constexpr std::uint32_t weyl0 = 0x9E3779B9u;
        static constexpr std::uint32_t weyl1 = 0xBB67AE85u;

        static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key)
        {
            for (int round = 0; round < 10; ++round)
            {
                const std::uint64_t p0 = static_cast<std::uint64_t>(mult0) * ctr[0];
                const std::uint64_t p1 = static_cast<std::uint64_t>(mult1) * ctr[2];
                ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                       static_cast<std::uint32_t>(p1),
                       static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                       static_cast<std::uint32_t>(p0)};
                key[0] += weyl0;
                key[1] += weyl1;
            }
            return ctr;
        }
    };

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    /// Folds a master seed and an arbitrary tag tuple into a 64-bit stream key.
    inline std::uint64_t derive_stream_key(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
    {
        std::uint64_t k = splitmix64(master);
        for (const std::uint64_t t : tags)
            k = splitmix64(k ^ t);
        return k;
    }

    /// Stateful convenience wrapper around the Philox block function. The
    /// 128-bit counter is split into a 64-bit running counter (low words) and
    /// a 64-bit stream id (high words).
    class RandomStream
    {
      public:
        explicit RandomStream(std::uint64_t key, std::uint64_t stream = 0)
            : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
              stream_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
        {
        }

        std::uint32_t next_u32()
        {
            if (avail_ == 0)
            {
                block_ = Philox4x32::block({static_cast<std::uint32_t>(counter_),
                                            static_cast<std::uint32_t>(counter_ >> 32),
                                            stream_[0], stream_[1]},
                                           key_);
                ++counter_;
                avail_ = 4;
            }
            return block_[4 - avail_--];
        }

        std::uint64_t next_u64()
        {
            const std::uint64_t lo = next_u32();
            const std::uint64_t hi = next_u32();
            return lo | (hi << 32);
        }

        /// Uniform in [0, 1) with 53 random bits.
        double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

        /// Uniform in (0, 1); safe as a logarithm argument.
        double next_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

        /// Uniform integer in [0, n).
        std::uint32_t next_below(std::uint32_t n)
        {
            return static_cast<std::uint32_t>(next_double() * n);
        }

        /// Standard normal via Box-Muller (second variate cached).
        double normal()
        {
            if (has_cached_)
            {
                has_cached_ = false;
                return cached_;
            }
            const double r = std::sqrt(-2.0 * std::log(next_open()));
            const double a = 2.0 * std::numbers::pi * next_double();
            cached_ = r * std::sin(a);
            has_cached_ = true;
            return r * std::cos(a);
        }

        /// Circularly-symmetric complex Gaussian with the given total variance.
        cplx circular_normal(double variance)
        {
            const double scale = std::sqrt(0.5 * variance);
            const double re = normal();
            const double im = normal();
            return {scale * re, scale * im};
        }

      private:
        std::array<std::uint32_t, 2> key_;
        std::array<std::uint32_t, 2> stream_;
        std::uint64_t counter_ = 0;
        std::array<std::uint32_t, 4> block_{};
        int avail_ = 0;
        double cached_ = 0.0;
        bool has_cached_ = false;
    };

    // Stream purpose tags used by the simulation harness.
    namespace stream_tag
    {
        inline constexpr std::uint64_t users = 0x75736572u;   // "user"
        inline constexpr std::uint64_t symbols = 0x73796d62u; // "symb"
        inline constexpr std::uint64_t noise = 0x6e6f6973u;   // "nois"
        inline constexpr std::uint64_t scenario = 0x7363656eu; // "scen"
    } // namespace stream_tag

} // namespace capa

#endif
