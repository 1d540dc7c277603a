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

#include "oracles.hpp"
#include "rislocal/errors.hpp"
#include "rislocal/physics.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace rislocal;
using Catch::Approx;

namespace
{
    // Signed difference a - b reduced to (-pi, pi].
    double phase_diff(double a, double b)
    {
        double d = std::remainder(a - b, 2.0 * pi);
        return d;
    }

    const double six_db = 20.0 * std::log10(2.0);
}

TEST_CASE("wavelength")
{
    CHECK(wavelength(27e9) == Approx(0.01110342437037037).epsilon(1e-15));
    CHECK(wavelength(299792458.0) == 1.0);
    CHECK(wavelength(13.5e9) == Approx(2.0 * wavelength(27e9)).epsilon(1e-15));
    CHECK_THROWS_AS(wavelength(0.0), ConfigError);
    CHECK_THROWS_AS(wavelength(-1.0), ConfigError);
}

TEST_CASE("RisConfig defaults and JSON")
{
    const RisConfig cfg;
    CHECK(cfg.m_rows == 20);
    CHECK(cfg.n_cols == 20);
    CHECK(cfg.d_x == 4.6e-3);
    CHECK(cfg.d_y == 4.6e-3);
    CHECK(cfg.freq_hz == 27e9);
    CHECK(cfg.p_t_dbm == 10.0);
    CHECK(cfg.g_t_dbi == 15.0);
    CHECK(cfg.g_r_dbi == 15.0);
    CHECK(cfg.gamma_amp == 0.7);
    CHECK(cfg.d1_m == 2.3);
    CHECK(cfg.d2_m == 2.3);
    CHECK(cfg.theta_t_deg == 0.0);
    CHECK(cfg.phi_t_deg == 0.0);
    CHECK(cfg.phi_r_deg == 180.0);
    CHECK(cfg.propagation_mode == PropagationMode::PlaneWave);

    CHECK(config_from_json(nlohmann::json::object()) == cfg);
    CHECK(config_from_json(config_to_json(cfg)) == cfg);

    const auto partial = config_from_json({{"d2_m", 4.6}, {"propagation_mode", "SphericalWave"}});
    CHECK(partial.d2_m == 4.6);
    CHECK(partial.d1_m == 2.3);
    CHECK(partial.propagation_mode == PropagationMode::SphericalWave);

    try
    {
        config_from_json({{"d3_m", 1.0}});
        FAIL("unknown key accepted");
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()).find("d3_m") != std::string::npos);
    }
    CHECK_THROWS_AS(config_from_json({{"gamma_amp", 1.5}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"m_rows", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"m_rows", 2.5}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"freq_hz", -1.0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"freq_hz", "27e9"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"propagation_mode", "Ray"}}), ConfigError);
}

TEST_CASE("steering_phase_profile")
{
    const RisConfig cfg;

    SECTION("broadside is all zeros")
    {
        const auto p = steering_phase_profile(cfg, 0.0, 180.0);
        for (double v : p.phases())
            CHECK(v == 0.0);
    }

    SECTION("entries are wrapped and dimensions follow the config")
    {
        RisConfig small = cfg;
        small.m_rows = 3;
        small.n_cols = 7;
        const auto p = steering_phase_profile(small, 37.0, 123.0);
        CHECK(p.rows() == 3);
        CHECK(p.cols() == 7);
        for (double v : p.phases())
        {
            CHECK(v >= 0.0);
            CHECK(v < 2.0 * pi);
        }
    }

    SECTION("constant phase gradient along the active axis")
    {
        const double k = 2.0 * pi / wavelength(cfg.freq_hz);
        const auto p = steering_phase_profile(cfg, 30.0, 180.0);
        // phi_s = 180 deg steers in the x (row) direction: d(phase)/dm = +k d_x sin(30), no column gradient.
        for (std::size_t m = 1; m < cfg.m_rows; ++m)
            for (std::size_t n = 1; n < cfg.n_cols; ++n)
            {
                CHECK(std::abs(phase_diff(p.at(m, n) - p.at(m - 1, n), k * cfg.d_x * 0.5)) < 1e-9);
                CHECK(std::abs(phase_diff(p.at(m, n), p.at(m, n - 1))) < 1e-9);
            }

        const auto q = steering_phase_profile(cfg, 30.0, 90.0);
        for (std::size_t n = 1; n < cfg.n_cols; ++n)
            CHECK(std::abs(phase_diff(q.at(4, n) - q.at(4, n - 1), -k * cfg.d_y * 0.5)) < 1e-9);
    }

    SECTION("pattern peak lands on the steer angle")
    {
        const auto p = steering_phase_profile(cfg, 56.25, 180.0);
        const auto trace = radiation_pattern(cfg, p, 0.0, 90.0, 0.25);
        CHECK(std::abs(peak_angle(trace) - 56.25) <= 0.25);
    }

    SECTION("domain errors")
    {
        CHECK_THROWS_AS(steering_phase_profile(cfg, -0.1, 180.0), DomainError);
        CHECK_THROWS_AS(steering_phase_profile(cfg, 90.5, 180.0), DomainError);
    }
}

TEST_CASE("array_factor")
{
    const RisConfig cfg;

    SECTION("all phasors align at the steer direction")
    {
        for (double s : {0.0, 11.25, 33.75, 56.25, 78.75, 90.0})
        {
            const auto p = steering_phase_profile(cfg, s, cfg.phi_r_deg);
            CHECK(std::abs(array_factor(cfg, p, s, cfg.phi_r_deg)) == Approx(280.0).epsilon(1e-12));
        }
    }

    SECTION("zero amplitude")
    {
        RisConfig c = cfg;
        c.gamma_amp = 0.0;
        const auto p = steering_phase_profile(c, 40.0, 180.0);
        CHECK(array_factor(c, p, 10.0, 180.0) == std::complex<double>(0.0, 0.0));
    }

    SECTION("frozen value off the beam")
    {
        // Independent scalar evaluation, steer 56.25, evaluate 40 (phi 180).
        const auto p = steering_phase_profile(cfg, 56.25, 180.0);
        const auto af = array_factor(cfg, p, 40.0, 180.0);
        CHECK(af.real() == Approx(-56.44913112248008).epsilon(1e-9));
        CHECK(std::abs(af.imag()) < 1e-9);
        const auto brute = oracle::array_factor(cfg, p, 40.0, 180.0);
        CHECK(std::abs(af - brute) <= 1e-9 * std::abs(brute));
    }

    SECTION("matches the direct double loop and is bounded by gamma*M*N")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> th(0.0, 90.0), ph(0.0, 360.0);
        for (int i = 0; i < 100; ++i)
        {
            const auto p = steering_phase_profile(cfg, th(rng), ph(rng));
            const double et = th(rng), ep = ph(rng);
            const auto fast = array_factor(cfg, p, et, ep);
            const auto slow = oracle::array_factor(cfg, p, et, ep);
            CHECK(std::abs(fast - slow) <= 1e-9 * std::max(std::abs(slow), 1e-12) + 1e-12);
            CHECK(std::abs(fast) <= 280.0 * (1.0 + 1e-12));
        }
    }

    SECTION("dimension mismatch")
    {
        RisConfig other = cfg;
        other.m_rows = 10;
        const auto p = steering_phase_profile(other, 20.0, 180.0);
        CHECK_THROWS_AS(array_factor(cfg, p, 20.0, 180.0), InvalidInputError);
    }

    SECTION("spherical mode approaches the plane-wave value far away")
    {
        RisConfig far = cfg;
        far.d1_m = far.d2_m = 2000.0;
        RisConfig sph = far;
        sph.propagation_mode = PropagationMode::SphericalWave;
        const auto p = steering_phase_profile(far, 45.0, 180.0);
        for (double t : {10.0, 45.0, 70.0})
        {
            const auto a = array_factor(far, p, t, 180.0);
            const auto b = array_factor(sph, p, t, 180.0);
            CHECK(std::abs(std::abs(a) - std::abs(b)) <= 1e-3 * 280.0);
        }
    }

    SECTION("spherical mode at the reference distances stays bounded")
    {
        RisConfig sph = cfg;
        sph.propagation_mode = PropagationMode::SphericalWave;
        const auto p = steering_phase_profile(sph, 52.0, 180.0);
        const auto trace = radiation_pattern(sph, p, 0.0, 90.0, 0.5);
        for (double v : trace.power_dbm)
            CHECK(std::isfinite(v));
        CHECK(std::abs(peak_angle(trace) - 52.0) <= 3.0);
    }
}

TEST_CASE("received_power_dbm")
{
    const RisConfig cfg;
    const auto p = steering_phase_profile(cfg, 56.25, 180.0);

    SECTION("frozen golden value at the beam centre")
    {
        CHECK(received_power_dbm(cfg, p, 56.25) == Approx(-44.337953325512004).margin(1e-9));
        CHECK(received_power_dbm(cfg, p, 40.0) == Approx(-58.24796872124338).margin(1e-7));
    }

    SECTION("zero amplitude hits the floor")
    {
        RisConfig c = cfg;
        c.gamma_amp = 0.0;
        CHECK(received_power_dbm(c, p, 56.25) == power_floor_dbm);
    }

    SECTION("inverse-square distances")
    {
        RisConfig c = cfg;
        c.d2_m *= 2.0;
        CHECK(received_power_dbm(c, p, 30.0) - received_power_dbm(cfg, p, 30.0) == Approx(-six_db).margin(1e-6));
        RisConfig h = cfg;
        h.d1_m /= 2.0;
        CHECK(received_power_dbm(h, p, 30.0) - received_power_dbm(cfg, p, 30.0) == Approx(six_db).margin(1e-6));
    }

    SECTION("amplitude scaling shifts by 20 log10(alpha)")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> alpha(0.05, 1.0), theta(0.0, 90.0);
        for (int i = 0; i < 50; ++i)
        {
            const double a = alpha(rng), t = theta(rng);
            RisConfig c = cfg;
            c.gamma_amp = cfg.gamma_amp * a;
            CHECK(received_power_dbm(c, p, t) - received_power_dbm(cfg, p, t) ==
                  Approx(20.0 * std::log10(a)).margin(1e-9));
        }
    }

    SECTION("global phase offset changes nothing")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> off(-10.0, 10.0), theta(0.0, 90.0);
        for (int i = 0; i < 50; ++i)
        {
            const double t = theta(rng);
            CHECK(received_power_dbm(cfg, p.shifted(off(rng)), t) ==
                  Approx(received_power_dbm(cfg, p, t)).margin(1e-9));
        }
    }

    SECTION("angle outside the cut")
    {
        CHECK_THROWS_AS(received_power_dbm(cfg, p, 90.01), DomainError);
        CHECK_THROWS_AS(received_power_dbm(cfg, p, -1.0), DomainError);
    }
}

TEST_CASE("radiation_pattern and peak_angle")
{
    const RisConfig cfg;

    SECTION("grid arithmetic and determinism")
    {
        const auto p = steering_phase_profile(cfg, 52.0, 180.0);
        const auto a = radiation_pattern(cfg, p, 0.0, 90.0, 0.5);
        const auto b = radiation_pattern(cfg, p, 0.0, 90.0, 0.5);
        CHECK(a.angles_deg.size() == 181);
        CHECK(a.angles_deg.back() == 90.0);
        CHECK(a.angles_deg == b.angles_deg);
        CHECK(a.power_dbm == b.power_dbm);
        CHECK(std::is_sorted(a.angles_deg.begin(), a.angles_deg.end()));
        CHECK(std::abs(peak_angle(a) - 52.0) <= 0.5);
        CHECK(radiation_pattern(cfg, p, 0.0, 1.0, 0.3).angles_deg.size() == 4);
    }

    SECTION("peaks follow the steer angle across the cut")
    {
        for (double s = 5.0; s < 90.0; s += 10.0)
        {
            const auto p = steering_phase_profile(cfg, s, 180.0);
            const auto trace = radiation_pattern(cfg, p, 0.0, 90.0, 0.25);
            CHECK(std::abs(peak_angle(trace) - s) <= 0.25);
        }
        const auto p54 = steering_phase_profile(cfg, 54.0, 180.0);
        CHECK(std::abs(peak_angle(radiation_pattern(cfg, p54, 0.0, 90.0, 0.25)) - 54.0) <= 0.25);
    }

    SECTION("grid errors")
    {
        const auto p = steering_phase_profile(cfg, 52.0, 180.0);
        CHECK_THROWS_AS(radiation_pattern(cfg, p, 10.0, 10.0, 0.5), DomainError);
        CHECK_THROWS_AS(radiation_pattern(cfg, p, 20.0, 10.0, 0.5), DomainError);
        CHECK_THROWS_AS(radiation_pattern(cfg, p, 0.0, 90.0, 0.0), DomainError);
        CHECK_THROWS_AS(radiation_pattern(cfg, p, 0.0, 90.0, -1.0), DomainError);
    }

    SECTION("peak tie-break and degenerate traces")
    {
        PatternTrace t{{10.0, 20.0, 30.0}, {-50.0, -40.0, -40.0}, "t"};
        CHECK(peak_angle(t) == 20.0);
        CHECK(peak_angle(PatternTrace{{42.0}, {-70.0}, "one"}) == 42.0);
        CHECK_THROWS_AS(peak_angle(PatternTrace{}), DomainError);
    }

    SECTION("CSV export")
    {
        PatternTrace t{{0.0, 0.5}, {-44.3379533, power_floor_dbm}, "t"};
        std::ostringstream os;
        write_pattern_csv(t, os);
        CHECK(os.str() == "theta_deg,pr_dbm\n0.000000,-44.337953\n0.500000,-300.000000\n");
    }
}
