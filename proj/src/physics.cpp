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

#include "rislocal/physics.hpp"
#include "rislocal/errors.hpp"
#include "rislocal/fileio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace rislocal
{
    namespace
    {
        double deg2rad(double deg) { return deg * pi / 180.0; }

        double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

        void require(bool ok, const std::string &msg)
        {
            if (!ok)
                throw ConfigError(msg);
        }

        // Direction cosines (u_x, u_y) of a unit vector at polar angle theta, azimuth phi.
        struct Direction
        {
            double ux, uy, uz;
        };

        Direction direction(double theta_deg, double phi_deg)
        {
            const double t = deg2rad(theta_deg), p = deg2rad(phi_deg);
            return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
        }

        void check_dims(const RisConfig &cfg, const PhaseProfile &profile)
        {
            if (profile.rows() != cfg.m_rows || profile.cols() != cfg.n_cols)
                throw InvalidInputError("phase profile is " + std::to_string(profile.rows()) + "x" +
                                        std::to_string(profile.cols()) + ", config expects " +
                                        std::to_string(cfg.m_rows) + "x" + std::to_string(cfg.n_cols));
        }

        template <typename T>
        T get_checked(const nlohmann::json &v, const std::string &key)
        {
            try
            {
                return v.get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                throw ConfigError("config key '" + key + "' has the wrong type");
            }
        }
    }

    void RisConfig::validate() const
    {
        require(m_rows >= 1, "m_rows must be >= 1");
        require(n_cols >= 1, "n_cols must be >= 1");
        require(std::isfinite(d_x) && d_x > 0.0, "d_x must be > 0");
        require(std::isfinite(d_y) && d_y > 0.0, "d_y must be > 0");
        require(std::isfinite(freq_hz) && freq_hz > 0.0, "freq_hz must be > 0");
        require(std::isfinite(d1_m) && d1_m > 0.0, "d1_m must be > 0");
        require(std::isfinite(d2_m) && d2_m > 0.0, "d2_m must be > 0");
        require(gamma_amp >= 0.0 && gamma_amp <= 1.0, "gamma_amp must lie in [0, 1]");
        require(std::isfinite(p_t_dbm), "p_t_dbm must be finite");
        require(std::isfinite(g_t_dbi), "g_t_dbi must be finite");
        require(std::isfinite(g_r_dbi), "g_r_dbi must be finite");
        require(std::isfinite(theta_t_deg), "theta_t_deg must be finite");
        require(std::isfinite(phi_t_deg), "phi_t_deg must be finite");
        require(std::isfinite(phi_r_deg), "phi_r_deg must be finite");
    }

    std::string to_string(PropagationMode mode)
    {
        return mode == PropagationMode::PlaneWave ? "PlaneWave" : "SphericalWave";
    }

    RisConfig config_from_json(const nlohmann::json &j)
    {
        if (!j.is_object())
            throw ConfigError("config must be a JSON object");
        RisConfig cfg;
        for (const auto &[key, v] : j.items())
        {
            if (key == "m_rows" || key == "n_cols")
            {
                if (!v.is_number_integer() || v.get<long long>() < 1)
                    throw ConfigError("config key '" + key + "' must be a positive integer");
                (key == "m_rows" ? cfg.m_rows : cfg.n_cols) = v.get<std::size_t>();
            }
            else if (key == "propagation_mode")
            {
                const auto s = get_checked<std::string>(v, key);
                if (s == "PlaneWave")
                    cfg.propagation_mode = PropagationMode::PlaneWave;
                else if (s == "SphericalWave")
                    cfg.propagation_mode = PropagationMode::SphericalWave;
                else
                    throw ConfigError("config key 'propagation_mode' must be PlaneWave or SphericalWave");
            }
            else
            {
                double *field = nullptr;
                if (key == "d_x") field = &cfg.d_x;
                else if (key == "d_y") field = &cfg.d_y;
                else if (key == "freq_hz") field = &cfg.freq_hz;
                else if (key == "p_t_dbm") field = &cfg.p_t_dbm;
                else if (key == "g_t_dbi") field = &cfg.g_t_dbi;
                else if (key == "g_r_dbi") field = &cfg.g_r_dbi;
                else if (key == "gamma_amp") field = &cfg.gamma_amp;
                else if (key == "d1_m") field = &cfg.d1_m;
                else if (key == "d2_m") field = &cfg.d2_m;
                else if (key == "theta_t_deg") field = &cfg.theta_t_deg;
                else if (key == "phi_t_deg") field = &cfg.phi_t_deg;
                else if (key == "phi_r_deg") field = &cfg.phi_r_deg;
                else
                    throw ConfigError("unknown config key '" + key + "'");
                if (!v.is_number())
                    throw ConfigError("config key '" + key + "' must be a number");
                *field = v.get<double>();
            }
        }
        cfg.validate();
        return cfg;
    }

    nlohmann::json config_to_json(const RisConfig &cfg)
    {
        return nlohmann::json{{"m_rows", cfg.m_rows},
                              {"n_cols", cfg.n_cols},
                              {"d_x", cfg.d_x},
                              {"d_y", cfg.d_y},
                              {"freq_hz", cfg.freq_hz},
                              {"p_t_dbm", cfg.p_t_dbm},
                              {"g_t_dbi", cfg.g_t_dbi},
                              {"g_r_dbi", cfg.g_r_dbi},
                              {"gamma_amp", cfg.gamma_amp},
                              {"d1_m", cfg.d1_m},
                              {"d2_m", cfg.d2_m},
                              {"theta_t_deg", cfg.theta_t_deg},
                              {"phi_t_deg", cfg.phi_t_deg},
                              {"phi_r_deg", cfg.phi_r_deg},
                              {"propagation_mode", to_string(cfg.propagation_mode)}};
    }

    RisConfig load_config(const std::filesystem::path &path)
    {
        const std::string text = read_file(path);
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
        return config_from_json(j);
    }

    PhaseProfile::PhaseProfile(std::size_t rows, std::size_t cols, std::vector<double> phases,
                               double steer_theta_deg, double steer_phi_deg)
        : rows_(rows), cols_(cols), phases_(std::move(phases)),
          steer_theta_deg_(steer_theta_deg), steer_phi_deg_(steer_phi_deg)
    {
        if (phases_.size() != rows_ * cols_)
            throw InvalidInputError("phase matrix size does not match rows x cols");
        phasors_.reserve(phases_.size());
        for (auto &p : phases_)
        {
            p = wrap_phase(p);
            phasors_.push_back(std::polar(1.0, p));
        }
    }

    PhaseProfile PhaseProfile::shifted(double offset) const
    {
        auto p = phases_;
        for (auto &x : p)
            x += offset;
        return PhaseProfile(rows_, cols_, std::move(p), steer_theta_deg_, steer_phi_deg_);
    }

    double wavelength(double freq_hz)
    {
        if (!(freq_hz > 0.0) || !std::isfinite(freq_hz))
            throw ConfigError("freq_hz must be > 0");
        return speed_of_light / freq_hz;
    }

    double wrap_phase(double phase)
    {
        constexpr double two_pi = 2.0 * pi;
        double w = std::fmod(phase, two_pi);
        if (w < 0.0)
            w += two_pi;
        if (w >= two_pi)
            w = 0.0;
        return w;
    }

    PhaseProfile steering_phase_profile(const RisConfig &cfg, double theta_s_deg, double phi_s_deg)
    {
        cfg.validate();
        if (!(theta_s_deg >= 0.0 && theta_s_deg <= 90.0))
            throw DomainError("steer out of [0,90]");
        const double k = 2.0 * pi / wavelength(cfg.freq_hz);
        const auto s = direction(theta_s_deg, phi_s_deg);
        const auto t = direction(cfg.theta_t_deg, cfg.phi_t_deg);

        std::vector<double> phases(cfg.m_rows * cfg.n_cols);
        for (std::size_t m = 0; m < cfg.m_rows; ++m)
        {
            const double x = cfg.d_x * centered_index(m, cfg.m_rows);
            for (std::size_t n = 0; n < cfg.n_cols; ++n)
            {
                const double y = cfg.d_y * centered_index(n, cfg.n_cols);
                const double steer = k * (x * s.ux + y * s.uy);
                const double incident = k * (x * t.ux + y * t.uy);
                phases[m * cfg.n_cols + n] = -steer - incident;
            }
        }
        return PhaseProfile(cfg.m_rows, cfg.n_cols, std::move(phases), theta_s_deg, phi_s_deg);
    }

    std::complex<double> array_factor(const RisConfig &cfg, const PhaseProfile &profile,
                                      double theta_r_deg, double phi_r_deg)
    {
        check_dims(cfg, profile);
        const double k = 2.0 * pi / wavelength(cfg.freq_hz);
        const auto &P = profile.phasors();
        std::complex<double> sum = 0.0;

        if (cfg.propagation_mode == PropagationMode::PlaneWave)
        {
            const auto r = direction(theta_r_deg, phi_r_deg);
            const auto t = direction(cfg.theta_t_deg, cfg.phi_t_deg);
            // Separable propagation phasors: exp(j k x (u_rx + u_tx)) and exp(j k y (u_ry + u_ty)).
            std::vector<std::complex<double>> col(cfg.n_cols);
            for (std::size_t n = 0; n < cfg.n_cols; ++n)
                col[n] = std::polar(1.0, k * cfg.d_y * centered_index(n, cfg.n_cols) * (r.uy + t.uy));
            for (std::size_t m = 0; m < cfg.m_rows; ++m)
            {
                std::complex<double> row_sum = 0.0;
                const auto *pm = P.data() + m * cfg.n_cols;
                for (std::size_t n = 0; n < cfg.n_cols; ++n)
                    row_sum += pm[n] * col[n];
                sum += row_sum * std::polar(1.0, k * cfg.d_x * centered_index(m, cfg.m_rows) * (r.ux + t.ux));
            }
        }
        else
        {
            const auto r = direction(theta_r_deg, phi_r_deg);
            const auto t = direction(cfg.theta_t_deg, cfg.phi_t_deg);
            const double tx[3] = {cfg.d1_m * t.ux, cfg.d1_m * t.uy, cfg.d1_m * t.uz};
            const double rx[3] = {cfg.d2_m * r.ux, cfg.d2_m * r.uy, cfg.d2_m * r.uz};
            for (std::size_t m = 0; m < cfg.m_rows; ++m)
            {
                const double x = cfg.d_x * centered_index(m, cfg.m_rows);
                for (std::size_t n = 0; n < cfg.n_cols; ++n)
                {
                    const double y = cfg.d_y * centered_index(n, cfg.n_cols);
                    const double r1 = std::hypot(tx[0] - x, tx[1] - y, tx[2]);
                    const double r2 = std::hypot(rx[0] - x, rx[1] - y, rx[2]);
                    // Excess path relative to the array center.
                    const double excess = (r1 - cfg.d1_m) + (r2 - cfg.d2_m);
                    sum += P[m * cfg.n_cols + n] * std::polar(1.0, -k * excess);
                }
            }
        }
        return cfg.gamma_amp * sum;
    }

    double received_power_dbm(const RisConfig &cfg, const PhaseProfile &profile, double theta_r_deg)
    {
        cfg.validate();
        if (!(theta_r_deg >= 0.0 && theta_r_deg <= 90.0))
            throw DomainError("theta_r out of [0,90]");
        const double lambda = wavelength(cfg.freq_hz);
        const double af2 = std::norm(array_factor(cfg, profile, theta_r_deg, cfg.phi_r_deg));
        const double pt_w = db_to_linear(cfg.p_t_dbm) * 1e-3;
        const double path_gain = db_to_linear(cfg.g_t_dbi) * db_to_linear(cfg.g_r_dbi) * cfg.d_x * cfg.d_y *
                                 lambda * lambda /
                                 (64.0 * pi * pi * pi * cfg.d1_m * cfg.d1_m * cfg.d2_m * cfg.d2_m);
        const double pr_w = pt_w * path_gain * af2;
        if (!(pr_w > 0.0))
            return power_floor_dbm;
        return 10.0 * std::log10(pr_w) + 30.0;
    }

    std::size_t grid_size(double start_deg, double stop_deg, double step_deg)
    {
        if (!(step_deg > 0.0) || !std::isfinite(step_deg))
            throw DomainError("grid step must be > 0");
        if (!(start_deg < stop_deg))
            throw DomainError("grid start must be < stop");
        return static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
    }

    PatternTrace radiation_pattern(const RisConfig &cfg, const PhaseProfile &profile,
                                   double start_deg, double stop_deg, double step_deg)
    {
        const std::size_t n = grid_size(start_deg, stop_deg, step_deg);
        PatternTrace trace;
        trace.angles_deg.reserve(n);
        trace.power_dbm.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double a = std::min(start_deg + static_cast<double>(i) * step_deg, stop_deg);
            trace.angles_deg.push_back(a);
            trace.power_dbm.push_back(received_power_dbm(cfg, profile, a));
        }
        std::ostringstream label;
        label << "steer_" << profile.steer_theta_deg();
        trace.label = label.str();
        return trace;
    }

    double peak_angle(const PatternTrace &trace)
    {
        if (trace.angles_deg.empty() || trace.angles_deg.size() != trace.power_dbm.size())
            throw DomainError("peak_angle of an empty trace");
        std::size_t best = 0;
        for (std::size_t i = 1; i < trace.power_dbm.size(); ++i)
            if (trace.power_dbm[i] > trace.power_dbm[best])
                best = i;
        return trace.angles_deg[best];
    }

    void write_pattern_csv(const PatternTrace &trace, std::ostream &os)
    {
        os << "theta_deg,pr_dbm\n";
        for (std::size_t i = 0; i < trace.angles_deg.size(); ++i)
            os << fixed6(trace.angles_deg[i]) << ',' << fixed6(trace.power_dbm[i]) << '\n';
    }

    void save_pattern_csv(const PatternTrace &trace, const std::filesystem::path &path)
    {
        std::ostringstream ss;
        write_pattern_csv(trace, ss);
        write_file_atomic(path, ss.str());
    }
}
