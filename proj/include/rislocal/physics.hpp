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

#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    inline constexpr double speed_of_light = 299792458.0;
    inline constexpr double pi = 3.14159265358979323846;

    /// Received power reported when the linear power is exactly zero.
    inline constexpr double power_floor_dbm = -300.0;

    enum class PropagationMode
    {
        PlaneWave,
        SphericalWave
    };

    /// Physical parameters of the BS -> RIS -> user link.
    /// Defaults are the reference 27 GHz, 20x20 setup. Angles in degrees, distances in meters.
    struct RisConfig
    {
        std::size_t m_rows = 20;
        std::size_t n_cols = 20;
        double d_x = 4.6e-3;
        double d_y = 4.6e-3;
        double freq_hz = 27e9;
        double p_t_dbm = 10.0;
        double g_t_dbi = 15.0;
        double g_r_dbi = 15.0;
        double gamma_amp = 0.7;
        double d1_m = 2.3;
        double d2_m = 2.3;
        double theta_t_deg = 0.0;
        double phi_t_deg = 0.0;
        double phi_r_deg = 180.0;
        PropagationMode propagation_mode = PropagationMode::PlaneWave;

        /// Throws ConfigError naming the first violated field.
        void validate() const;

        bool operator==(const RisConfig &) const = default;
    };

    /// Parses a config object. Missing keys keep their defaults, unknown keys throw ConfigError.
    RisConfig config_from_json(const nlohmann::json &j);
    nlohmann::json config_to_json(const RisConfig &cfg);
    RisConfig load_config(const std::filesystem::path &path);

    std::string to_string(PropagationMode mode);

    /// Per-element reflection phases (row-major, m_rows x n_cols), wrapped to [0, 2*pi).
    class PhaseProfile
    {
    public:
        PhaseProfile() = default;
        PhaseProfile(std::size_t rows, std::size_t cols, std::vector<double> phases,
                     double steer_theta_deg, double steer_phi_deg);

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        double at(std::size_t m, std::size_t n) const { return phases_.at(m * cols_ + n); }
        const std::vector<double> &phases() const noexcept { return phases_; }
        double steer_theta_deg() const noexcept { return steer_theta_deg_; }
        double steer_phi_deg() const noexcept { return steer_phi_deg_; }

        /// exp(j*phase) per element, precomputed at construction.
        const std::vector<std::complex<double>> &phasors() const noexcept { return phasors_; }

        /// Copy with `offset` added to every phase (then re-wrapped).
        PhaseProfile shifted(double offset) const;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<double> phases_;
        std::vector<std::complex<double>> phasors_;
        double steer_theta_deg_ = 0.0;
        double steer_phi_deg_ = 0.0;
    };

    /// Sampled received-power pattern over the theta_r cut.
    struct PatternTrace
    {
        std::vector<double> angles_deg;
        std::vector<double> power_dbm;
        std::string label;
    };

    double wavelength(double freq_hz);

    /// Wraps an angle in radians to [0, 2*pi).
    double wrap_phase(double phase);

    /// Centered element index: i - (count - 1) / 2.
    inline double centered_index(std::size_t i, std::size_t count)
    {
        return static_cast<double>(i) - 0.5 * static_cast<double>(count - 1);
    }

    /// Phase profile whose reflected beam points at (theta_s, phi_s).
    /// phases[m][n] = wrap(-k (d_x m' sin(ts) cos(ps) + d_y n' sin(ts) sin(ps)) - psi_inc(m, n)).
    PhaseProfile steering_phase_profile(const RisConfig &cfg, double theta_s_deg, double phi_s_deg);

    /// Complex array factor toward (theta_r, phi_r). Includes gamma_amp on every element.
    std::complex<double> array_factor(const RisConfig &cfg, const PhaseProfile &profile,
                                      double theta_r_deg, double phi_r_deg);

    /// Cascaded far-field received power in dBm at theta_r (phi_r from cfg).
    double received_power_dbm(const RisConfig &cfg, const PhaseProfile &profile, double theta_r_deg);

    /// Number of points in the inclusive grid start, start + step, ... <= stop.
    std::size_t grid_size(double start_deg, double stop_deg, double step_deg);

    PatternTrace radiation_pattern(const RisConfig &cfg, const PhaseProfile &profile,
                                   double start_deg, double stop_deg, double step_deg);

    /// Angle of the maximum power; ties go to the smaller angle.
    double peak_angle(const PatternTrace &trace);

    void write_pattern_csv(const PatternTrace &trace, std::ostream &os);
    void save_pattern_csv(const PatternTrace &trace, const std::filesystem::path &path);
}
