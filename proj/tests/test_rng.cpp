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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "capa/rng.hpp"

using namespace capa;

TEST_CASE("philox 4x32-10 known-answer vectors")
{
    // Reference vectors from the Random123 known-answer tests.
    const auto zero = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    const auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and distinct")
{
    RandomStream a(derive_stream_key(42, {1, 2}));
    RandomStream b(derive_stream_key(42, {1, 2}));
    RandomStream c(derive_stream_key(42, {1, 3}));
    bool any_diff = false;
    for (int i = 0; i < 64; ++i)
    {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(any_diff);
}

TEST_CASE("uniform doubles live in [0,1) and are unbiased")
{
    RandomStream s(derive_stream_key(7, {0}));
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double v = s.next_double();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    // mean 1/2, sd of the mean = 1/sqrt(12 n); allow 5 sigma
    CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("open-interval variates avoid the endpoints")
{
    RandomStream s(derive_stream_key(9, {4}));
    for (int i = 0; i < 1000; ++i)
    {
        const double v = s.next_open();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("normal moments")
{
    RandomStream s(derive_stream_key(1234, {0}));
    const int n = 50000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double v = s.normal();
        m1 += v;
        m2 += v * v;
    }
    m1 /= n;
    m2 /= n;
    CHECK(std::abs(m1) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("circular normal has the requested total variance")
{
    RandomStream s(derive_stream_key(88, {1}));
    const int n = 40000;
    const double var = 0.37;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += std::norm(s.circular_normal(var));
    CHECK(acc / n == Catch::Approx(var).epsilon(0.05));
}

TEST_CASE("next_below covers the range uniformly")
{
    RandomStream s(derive_stream_key(5, {5}));
    std::vector<int> hist(16, 0);
    const int n = 16000;
    for (int i = 0; i < n; ++i)
    {
        const auto v = s.next_below(16);
        REQUIRE(v < 16u);
        ++hist[v];
    }
    for (const int h : hist)
        CHECK(std::abs(h - n / 16) < 5 * std::sqrt(n / 16.0));
}
