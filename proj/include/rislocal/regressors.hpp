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
#include "rislocal/svr.hpp"
#include "rislocal/tree.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    enum class ModelKind
    {
        DT,
        SVR,
        KNN,
        XGB,
        GB,
        RF
    };

    inline constexpr std::array<ModelKind, 6> all_model_kinds = {ModelKind::DT, ModelKind::SVR, ModelKind::KNN,
                                                                 ModelKind::XGB, ModelKind::GB, ModelKind::RF};

    std::string to_string(ModelKind kind);
    /// Accepts the short names (DT, SVR, ...) case-insensitively; throws ModelError otherwise.
    ModelKind parse_model_kind(std::string_view name);

    struct KnnParams
    {
        std::size_t k = 5;
    };

    struct CartParams
    {
        std::size_t max_depth = 12; // 0 = unlimited
        std::size_t min_samples_split = 2;
    };

    struct RfParams
    {
        std::size_t n_trees = 100;
        std::size_t max_depth = 12;
        std::size_t min_samples_split = 2;
        bool bootstrap = true;
        std::size_t max_features = 0; // 0 = ceil(sqrt(d))
    };

    struct GbParams
    {
        std::size_t n_estimators = 200;
        double learning_rate = 0.1;
        std::size_t max_depth = 3;
        std::size_t min_samples_split = 2;
    };

    struct XgbParams
    {
        std::size_t n_estimators = 200;
        double learning_rate = 0.1;
        std::size_t max_depth = 3;
        std::size_t min_samples_split = 2;
        double lambda = 1.0;
        double gamma = 0.0;
    };

    /// Alternative index equals the ModelKind value.
    using Hyperparameters = std::variant<CartParams, SvrParams, KnnParams, XgbParams, GbParams, RfParams>;

    struct RegressorSpec
    {
        Hyperparameters params;
        std::uint64_t seed = 42;

        ModelKind kind() const noexcept { return static_cast<ModelKind>(params.index()); }

        static RegressorSpec defaults(ModelKind kind, std::uint64_t seed = 42);
    };

    /// Overrides defaults with the given object; unknown names or out-of-range values throw ModelError.
    RegressorSpec spec_from_json(ModelKind kind, const nlohmann::json &params, std::uint64_t seed = 42);
    nlohmann::json params_to_json(const Hyperparameters &params);

    struct KnnState
    {
        FeatureMatrix samples;
        std::vector<double> labels;
        std::size_t k = 5;
    };

    struct ForestState
    {
        std::vector<RegressionTree> trees;
    };

    struct BoostState
    {
        double base_score = 0.0;
        double learning_rate = 0.1;
        std::vector<RegressionTree> trees;
    };

    using LearnedState = std::variant<RegressionTree, SvrModel, KnnState, BoostState, ForestState>;

    // Per-algorithm entry points. Inputs are used in the given order; fit() canonicalizes first.
    KnnState knn_fit(const FeatureMatrix &X, std::span<const double> y, const KnnParams &params);
    /// Mean label of the k nearest samples (Euclidean); distance ties go to the lower sample index.
    double knn_predict(const KnnState &state, std::span<const double> x);

    RegressionTree cart_fit(const FeatureMatrix &X, std::span<const double> y, const CartParams &params);

    /// Each tree uses its own generator seeded with derive_seed(seed, tree index).
    ForestState rf_fit(const FeatureMatrix &X, std::span<const double> y, const RfParams &params, std::uint64_t seed);
    double rf_predict(const ForestState &state, std::span<const double> x);

    BoostState gb_fit(const FeatureMatrix &X, std::span<const double> y, const GbParams &params);
    BoostState xgb_fit(const FeatureMatrix &X, std::span<const double> y, const XgbParams &params);
    double boost_predict(const BoostState &state, std::span<const double> x);
    /// Prediction after 0, 1, ..., T stages (entry 0 is the base score).
    std::vector<double> boost_staged_predict(const BoostState &state, std::span<const double> x);

    /// A fitted regressor. Immutable; predict is safe for concurrent callers.
    class TrainedModel
    {
    public:
        TrainedModel(RegressorSpec spec, LearnedState state, std::size_t n_samples, std::size_t n_features);

        const RegressorSpec &spec() const noexcept { return spec_; }
        ModelKind kind() const noexcept { return spec_.kind(); }
        const LearnedState &state() const noexcept { return state_; }
        std::size_t n_samples() const noexcept { return n_samples_; }
        std::size_t n_features() const noexcept { return n_features_; }

        /// Predicted angle in degrees, clamped to [0, 90].
        double predict(std::span<const double> features) const;
        double predict(const FeatureVector &features) const { return predict(std::span<const double>(features.powers_dbm)); }
        double predict_unclamped(std::span<const double> features) const;

    private:
        RegressorSpec spec_;
        LearnedState state_;
        std::size_t n_samples_;
        std::size_t n_features_;
    };

    FeatureMatrix to_matrix(const Dataset &ds);

    /// Sorts samples lexicographically by (features, label) so fits do not depend on input order.
    void canonicalize(FeatureMatrix &X, std::vector<double> &y);

    TrainedModel fit(const FeatureMatrix &X, std::span<const double> y, const RegressorSpec &spec);
    TrainedModel fit(const Dataset &train, const RegressorSpec &spec);

    nlohmann::json model_to_json(const TrainedModel &model);
    TrainedModel model_from_json(const nlohmann::json &j);
    void save_model(const TrainedModel &model, const std::filesystem::path &path);
    TrainedModel load_model(const std::filesystem::path &path);
}
