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

#include "rislocal/probing.hpp"
#include "rislocal/errors.hpp"

#include <cmath>
#include <random>

namespace rislocal
{
    std::vector<double> SectorCodebook::steer_angles_deg() const
    {
        std::vector<double> out;
        out.reserve(profiles.size());
        for (const auto &p : profiles)
            out.push_back(p.steer_theta_deg());
        return out;
    }

    std::size_t SectorCodebook::sector_of(double theta_deg) const
    {
        if (sectors.empty())
            throw DomainError("empty codebook");
        if (theta_deg < sectors.front().lower_deg || theta_deg > sectors.back().upper_deg)
            throw DomainError("angle outside codebook span");
        for (std::size_t i = 0; i + 1 < sectors.size(); ++i)
            if (theta_deg < sectors[i].upper_deg)
                return i;
        return sectors.size() - 1;
    }

    SectorCodebook build_sector_codebook(const RisConfig &cfg, std::size_t n_sectors,
                                         double span_lo_deg, double span_hi_deg)
    {
        if (n_sectors == 0)
            throw DomainError("n_sectors must be >= 1");
        if (!(span_lo_deg >= 0.0 && span_hi_deg <= 90.0 && span_lo_deg < span_hi_deg))
            throw DomainError("sector span must satisfy 0 <= lo < hi <= 90");
        SectorCodebook cb;
        const double width = (span_hi_deg - span_lo_deg) / static_cast<double>(n_sectors);
        for (std::size_t i = 0; i < n_sectors; ++i)
        {
            const double lo = span_lo_deg + width * static_cast<double>(i);
            const double hi = (i + 1 == n_sectors) ? span_hi_deg : span_lo_deg + width * static_cast<double>(i + 1);
            const double center = 0.5 * (lo + hi);
            cb.sectors.push_back({lo, hi, center});
            cb.profiles.push_back(steering_phase_profile(cfg, center, cfg.phi_r_deg));
        }
        return cb;
    }

    nlohmann::json codebook_to_json(const SectorCodebook &codebook)
    {
        nlohmann::json j;
        j["span"] = {codebook.sectors.front().lower_deg, codebook.sectors.back().upper_deg};
        j["steer_deg"] = codebook.steer_angles_deg();
        return j;
    }

    SectorCodebook codebook_from_json(const RisConfig &cfg, const nlohmann::json &j)
    {
        try
        {
            const auto span = j.at("span").get<std::vector<double>>();
            const auto steer = j.at("steer_deg").get<std::vector<double>>();
            if (span.size() != 2)
                throw ConfigError("codebook span must have two entries");
            return build_sector_codebook(cfg, steer.size(), span[0], span[1]);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("malformed codebook: ") + e.what());
        }
    }

    FeatureVector probe_features(const RisConfig &cfg, const SectorCodebook &codebook, double theta_user_deg,
                                 double noise_sigma_db, std::optional<std::uint64_t> rng_seed)
    {
        if (!(theta_user_deg >= 0.0 && theta_user_deg <= 90.0))
            throw DomainError("user angle out of [0,90]");
        if (!(noise_sigma_db >= 0.0) || !std::isfinite(noise_sigma_db))
            throw DomainError("noise sigma must be >= 0");

        FeatureVector fv;
        fv.powers_dbm.reserve(codebook.profiles.size());
        for (const auto &profile : codebook.profiles)
            fv.powers_dbm.push_back(received_power_dbm(cfg, profile, theta_user_deg));

        if (noise_sigma_db > 0.0)
        {
            std::mt19937_64 rng(rng_seed ? *rng_seed : std::random_device{}());
            std::normal_distribution<double> noise(0.0, noise_sigma_db);
            for (auto &p : fv.powers_dbm)
                p += noise(rng);
        }
        return fv;
    }
}
