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

#include "rislocal/physics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    struct Sector
    {
        double lower_deg;
        double upper_deg;
        double center_deg;
    };

    /// Equal-width angular sectors over a span, each with a beam steered at its center.
    /// Intervals are half-open except the last, which is closed at the span's upper end.
    struct SectorCodebook
    {
        std::vector<Sector> sectors;
        std::vector<PhaseProfile> profiles;

        std::size_t size() const noexcept { return sectors.size(); }
        std::vector<double> steer_angles_deg() const;

        /// Index of the sector containing theta; throws DomainError outside the span.
        std::size_t sector_of(double theta_deg) const;
    };

    /// One received power per codebook beam, in sector order.
    struct FeatureVector
    {
        std::vector<double> powers_dbm;

        std::size_t size() const noexcept { return powers_dbm.size(); }
        bool operator==(const FeatureVector &) const = default;
    };

    SectorCodebook build_sector_codebook(const RisConfig &cfg, std::size_t n_sectors = 4,
                                         double span_lo_deg = 0.0, double span_hi_deg = 90.0);

    /// Codebook description for manifests: {"span": [lo, hi], "steer_deg": [...]}.
    nlohmann::json codebook_to_json(const SectorCodebook &codebook);
    SectorCodebook codebook_from_json(const RisConfig &cfg, const nlohmann::json &j);

    /// Powers a user at theta_user would report for each beam, plus independent N(0, sigma^2)
    /// dB noise. sigma == 0 never touches the random source. Absent seed draws one from
    /// std::random_device.
    FeatureVector probe_features(const RisConfig &cfg, const SectorCodebook &codebook, double theta_user_deg,
                                 double noise_sigma_db = 0.0, std::optional<std::uint64_t> rng_seed = std::nullopt);
}
