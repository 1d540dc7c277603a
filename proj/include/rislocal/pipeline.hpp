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

#include "rislocal/evaluation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

namespace rislocal::pipeline
{
    /// Process exit codes. Stable contract for scripts.
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 2, // bad config, arguments or input data
        exit_model = 3,  // unknown model kind, bad hyperparameters, malformed model file
        exit_io = 4,
    };

    struct PatternOptions
    {
        std::optional<std::filesystem::path> config;
        double steer_deg = 0.0;
        AngleGrid grid{0.0, 90.0, 0.5};
        std::filesystem::path out = "pattern.csv";
    };

    struct GenDataOptions
    {
        std::optional<std::filesystem::path> config;
        double step_deg = 0.5;
        std::size_t repeats = 5;
        double sigma_db = 1.0;
        std::uint64_t seed = 42;
        std::size_t sectors = 4;
        std::filesystem::path out = "dataset.csv";
    };

    struct SplitOptions
    {
        std::filesystem::path data;
        double test_fraction = 0.2;
        std::uint64_t seed = 42;
        std::filesystem::path train_out = "train.csv";
        std::filesystem::path test_out = "test.csv";
    };

    struct TrainOptions
    {
        std::filesystem::path data;
        std::string model;
        std::string params_json = "{}";
        std::uint64_t seed = 42;
        std::filesystem::path out = "model.json";
    };

    struct EvalOptions
    {
        std::filesystem::path data;
        std::filesystem::path models_dir;
        std::filesystem::path out = "report.json";
    };

    struct CompareOptions
    {
        std::optional<std::filesystem::path> config;
        double theta_deg = 52.0;
        std::filesystem::path models_dir;
        std::filesystem::path out_dir = "compare";
        AngleGrid grid{0.0, 90.0, 0.25};
    };

    struct ReproOptions
    {
        std::filesystem::path workdir = "repro";
        std::uint64_t seed = 42;
    };

    // Each command validates its inputs, writes its outputs atomically plus a manifest, and
    // returns an ExitCode. Diagnostics go to `err`.
    int run_pattern(const PatternOptions &opt, std::ostream &err);
    int run_gen_data(const GenDataOptions &opt, std::ostream &err);
    int run_split(const SplitOptions &opt, std::ostream &err);
    int run_train(const TrainOptions &opt, std::ostream &err);
    int run_eval(const EvalOptions &opt, std::ostream &err);
    int run_compare(const CompareOptions &opt, std::ostream &err);
    int run_repro(const ReproOptions &opt, std::ostream &err);

    /// Re-executes the command recorded in a manifest.
    int run_replay(const std::filesystem::path &manifest, std::ostream &err);

    /// Parses "start:stop:step".
    AngleGrid parse_grid(const std::string &text);

    /// Stage seeds: derive_seed(seed, "gen-data"), "split", "train:<KIND>".
    std::uint64_t stage_seed(std::uint64_t seed, const std::string &stage);

    /// Report timestamp: SOURCE_DATE_EPOCH when set, otherwise the Unix epoch, in UTC ISO-8601.
    std::string report_timestamp();

    std::string sha256_hex(const std::string &bytes);
    std::string file_sha256(const std::filesystem::path &path);

    /// Manifest path for a file output: "<out>.manifest.json".
    std::filesystem::path manifest_path_for(const std::filesystem::path &out);
}
