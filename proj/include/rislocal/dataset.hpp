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
#include "rislocal/probing.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    struct Sample
    {
        FeatureVector features;
        double theta_deg = 0.0;

        bool operator==(const Sample &) const = default;
    };

    struct DatasetMeta
    {
        double step_deg = 0.5;
        std::size_t repeats = 5;
        double noise_sigma_db = 1.0;
        std::uint64_t seed = 42;
        std::vector<double> steer_angles_deg;

        bool operator==(const DatasetMeta &) const = default;
    };

    nlohmann::json meta_to_json(const DatasetMeta &meta);
    DatasetMeta meta_from_json(const nlohmann::json &j);

    struct Dataset
    {
        std::vector<Sample> samples;
        DatasetMeta meta;

        std::size_t size() const noexcept { return samples.size(); }
        bool empty() const noexcept { return samples.empty(); }
        /// Feature width, 0 for an empty dataset.
        std::size_t n_features() const noexcept { return samples.empty() ? 0 : samples.front().features.size(); }
        std::vector<double> labels() const;
    };

    /// Samples ordered by (angle index, repeat index); angle i = i * step over [0, 90].
    /// Each sample draws its noise from derive_seed(seed, angle index, repeat index).
    Dataset generate_dataset(const RisConfig &cfg, const SectorCodebook &codebook, double step_deg = 0.5,
                             std::size_t repeats_per_angle = 5, double noise_sigma_db = 1.0,
                             std::uint64_t seed = 42);

    /// Seeded shuffle then partition into (train, test); test size = round(n * test_fraction),
    /// clamped so that both halves are non-empty.
    std::pair<Dataset, Dataset> split(const Dataset &ds, double test_fraction = 0.2, std::uint64_t seed = 42);

    std::string csv_header(std::size_t n_sectors);

    void write_csv(const Dataset &ds, std::ostream &os);
    void save_csv(const Dataset &ds, const std::filesystem::path &path);

    /// Parses a dataset CSV. Throws ParseError (with line number) on header mismatch, wrong
    /// column count or non-numeric cells, and on a file that has no samples.
    /// Metadata is read from the sidecar when one exists next to the file.
    /// expected_sectors == 0 infers the width from the header.
    Dataset load_csv(const std::filesystem::path &path, std::size_t expected_sectors = 4);
    Dataset parse_csv(std::istream &is, std::size_t expected_sectors = 4);

    /// "<dir>/<stem>.meta.json" for "<dir>/<stem>.csv".
    std::filesystem::path meta_sidecar_path(const std::filesystem::path &csv_path);
    void save_meta(const DatasetMeta &meta, const std::filesystem::path &csv_path);
}
