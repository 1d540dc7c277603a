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

#include "rislocal/dataset.hpp"
#include "rislocal/physics.hpp"
#include "rislocal/probing.hpp"
#include "rislocal/regressors.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    /// Mean absolute error. Throws InvalidInputError on empty or mismatched inputs.
    double mae(std::span<const double> y_true, std::span<const double> y_pred);
    double rmse(std::span<const double> y_true, std::span<const double> y_pred);
    /// Coefficient of determination 1 - SSE/SST; DomainError when y_true has zero variance.
    double r2(std::span<const double> y_true, std::span<const double> y_pred);

    struct EvalRow
    {
        std::string model;
        double mae_deg = 0.0;
        double rmse_deg = 0.0;
        double r2 = 0.0;
    };

    struct EvalReport
    {
        std::vector<EvalRow> rows; // ascending MAE, stable for ties
        DatasetMeta meta;
        std::size_t n_test = 0;
        std::string timestamp;
    };

    /// Published per-model figures for the reference 27 GHz setup (MAE, RMSE, R2).
    /// Context for reports only; they depend on an unpublished dataset size, noise level and split.
    const std::vector<EvalRow> &published_reference_rows();

    EvalRow evaluate_model(const TrainedModel &model, const Dataset &test);
    EvalReport evaluate_all(std::span<const TrainedModel> models, const Dataset &test, std::string timestamp = {});

    nlohmann::json report_to_json(const EvalReport &report);
    /// Aligned plain-text table: Model, MAE(deg), RMSE, R2 with three decimals.
    std::string report_table(const EvalReport &report);

    struct AngleGrid
    {
        double start_deg = 0.0;
        double stop_deg = 90.0;
        double step_deg = 0.25;
    };

    struct ModelPattern
    {
        std::string model;
        double predicted_theta_deg = 0.0;
        PatternTrace trace;
        double peak_deg = 0.0;
        double peak_delta_deg = 0.0; // peak_deg - ground-truth peak
    };

    struct PatternComparison
    {
        double theta_true_deg = 0.0;
        PatternTrace ground_truth;
        double ground_truth_peak_deg = 0.0;
        std::vector<ModelPattern> predictions;
    };

    /// Ground truth is the pattern of a beam steered at theta_true. Each model predicts from the
    /// noiseless probe at theta_true; its beam is re-steered at the prediction and traced on the same grid.
    PatternComparison pattern_comparison(const RisConfig &cfg, double theta_true_deg,
                                         std::span<const TrainedModel> models, const SectorCodebook &codebook,
                                         const AngleGrid &grid = {});

    /// Writes ground_truth.csv, one <model>.csv per prediction and peaks.json into `dir`.
    void save_pattern_comparison(const PatternComparison &cmp, const std::filesystem::path &dir);
    nlohmann::json peaks_to_json(const PatternComparison &cmp);
}
