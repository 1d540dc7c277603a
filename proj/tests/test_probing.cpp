// SPDX-License-Identifier: Apache-2.0
//
// rislocal: RIS sector probing and angle regression toolkit
// Copyright (C) 2026 The rislocal authors
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

#include <catch_amalgamated.hpp>

#include "rislocal/errors.hpp"
#include "rislocal/probing.hpp"

#include <algorithm>
#include <random>

using namespace rislocal;

namespace
{
    std::size_t argmax(const FeatureVector &f)
    {
        return static_cast<std::size_t>(std::max_element(f.powers_dbm.begin(), f.powers_dbm.end()) - f.powers_dbm.begin());
    }
}

TEST_CASE("build_sector_codebook")
{
    const RisConfig cfg;

    SECTION("four equal sectors over 0-90")
    {
        const auto cb = build_sector_codebook(cfg, 4);
        REQUIRE(cb.size() == 4);
        REQUIRE(cb.profiles.size() == 4);
        const double lo[] = {0.0, 22.5, 45.0, 67.5}, hi[] = {22.5, 45.0, 67.5, 90.0},
                     mid[] = {11.25, 33.75, 56.25, 78.75};
        for (std::size_t i = 0; i < 4; ++i)
        {
            CHECK(cb.sectors[i].lower_deg == lo[i]);
            CHECK(cb.sectors[i].upper_deg == hi[i]);
            CHECK(cb.sectors[i].center_deg == mid[i]);
            CHECK(cb.profiles[i].steer_theta_deg() == mid[i]);
            const auto trace = radiation_pattern(cfg, cb.profiles[i], 0.0, 90.0, 0.25);
            CHECK(std::abs(peak_angle(trace) - mid[i]) <= 0.25);
        }
        CHECK(cb.sector_of(0.0) == 0);
        CHECK(cb.sector_of(22.4999) == 0);
        CHECK(cb.sector_of(22.5) == 1);
        CHECK(cb.sector_of(67.5) == 3);
        CHECK(cb.sector_of(90.0) == 3);
        CHECK_THROWS_AS(cb.sector_of(90.1), DomainError);
    }

    SECTION("single sector")
    {
        const auto cb = build_sector_codebook(cfg, 1);
        REQUIRE(cb.size() == 1);
        CHECK(cb.sectors[0].lower_deg == 0.0);
        CHECK(cb.sectors[0].upper_deg == 90.0);
        CHECK(cb.sectors[0].center_deg == 45.0);
    }

    SECTION("errors and JSON form")
    {
        CHECK_THROWS_AS(build_sector_codebook(cfg, 0), DomainError);
        const auto cb = build_sector_codebook(cfg, 4);
        const auto j = codebook_to_json(cb);
        CHECK(j.at("steer_deg").get<std::vector<double>>() == std::vector<double>{11.25, 33.75, 56.25, 78.75});
        const auto back = codebook_from_json(cfg, j);
        CHECK(back.steer_angles_deg() == cb.steer_angles_deg());
    }
}

TEST_CASE("probe_features")
{
    const RisConfig cfg;
    const auto cb = build_sector_codebook(cfg, 4);

    SECTION("noiseless probe at a beam centre selects that beam")
    {
        const auto f = probe_features(cfg, cb, 56.25, 0.0);
        REQUIRE(f.size() == 4);
        CHECK(argmax(f) == 2);
    }

    SECTION("noiseless probe equals the beam patterns read at the user angle")
    {
        std::vector<PatternTrace> traces;
        for (const auto &p : cb.profiles)
            traces.push_back(radiation_pattern(cfg, p, 0.0, 90.0, 0.5));
        for (std::size_t a = 0; a < traces[0].angles_deg.size(); ++a)
        {
            const auto f = probe_features(cfg, cb, traces[0].angles_deg[a], 0.0);
            for (std::size_t s = 0; s < 4; ++s)
                CHECK(f.powers_dbm[s] == traces[s].power_dbm[a]);
        }
    }

    SECTION("main-lobe users pick their own sector")
    {
        for (std::size_t i = 0; i < 4; ++i)
            for (double off = -3.0; off <= 3.0; off += 0.25)
                CHECK(argmax(probe_features(cfg, cb, cb.sectors[i].center_deg + off, 0.0)) == i);
    }

    SECTION("determinism and seeded noise")
    {
        CHECK(probe_features(cfg, cb, 40.0, 0.0) == probe_features(cfg, cb, 40.0, 0.0));
        const auto a = probe_features(cfg, cb, 40.0, 1.0, 99);
        const auto b = probe_features(cfg, cb, 40.0, 1.0, 99);
        const auto c = probe_features(cfg, cb, 40.0, 1.0, 100);
        const auto clean = probe_features(cfg, cb, 40.0, 0.0);
        CHECK(a == b);
        CHECK(a != c);
        CHECK(a != clean);
    }

    SECTION("noise is zero-mean with the requested spread")
    {
        const auto clean = probe_features(cfg, cb, 30.0, 0.0);
        double sum = 0.0, sum2 = 0.0;
        const int n = 2000;
        for (int s = 0; s < n; ++s)
        {
            const auto f = probe_features(cfg, cb, 30.0, 2.0, static_cast<std::uint64_t>(s));
            const double e = f.powers_dbm[1] - clean.powers_dbm[1];
            sum += e;
            sum2 += e * e;
        }
        CHECK(std::abs(sum / n) < 0.2);
        CHECK(std::sqrt(sum2 / n) == Catch::Approx(2.0).epsilon(0.08));
    }

    SECTION("errors")
    {
        CHECK_THROWS_AS(probe_features(cfg, cb, 40.0, -0.5), DomainError);
        CHECK_THROWS_AS(probe_features(cfg, cb, 91.0, 0.0), DomainError);
        CHECK_THROWS_AS(probe_features(cfg, cb, -1.0, 0.0), DomainError);
    }
}
