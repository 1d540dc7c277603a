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

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    /// Dense row-major sample matrix.
    struct FeatureMatrix
    {
        std::vector<double> values;
        std::size_t n_rows = 0;
        std::size_t n_cols = 0;

        std::span<const double> row(std::size_t i) const { return {values.data() + i * n_cols, n_cols}; }
        double at(std::size_t i, std::size_t j) const { return values[i * n_cols + j]; }
    };

    struct TreeNode
    {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;

        bool is_leaf() const noexcept { return feature < 0; }
    };

    /// Binary regression tree; samples with x[feature] <= threshold go left.
    class RegressionTree
    {
    public:
        std::vector<TreeNode> nodes;

        double predict(std::span<const double> x) const;
        std::size_t depth() const;
        std::size_t leaf_count() const;

        /// Nested form: {"feature", "threshold", "left", "right"} or {"value"}.
        nlohmann::json to_json() const;
        static RegressionTree from_json(const nlohmann::json &j);
    };

    enum class SplitCriterion
    {
        Variance,    // maximize SSE reduction, leaf = mean target
        SecondOrder, // 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma, leaf = -G/(H+l)
    };

    struct TreeGrowParams
    {
        std::size_t max_depth = 12;        // 0 = unlimited
        std::size_t min_samples_split = 2; // nodes smaller than this become leaves
        std::size_t max_features = 0;      // features tried per split, 0 = all
        SplitCriterion criterion = SplitCriterion::Variance;
        double lambda = 0.0;
        double gamma = 0.0;
    };

    /// Grows a tree over `rows` (indices into X; repeats allowed for bootstrap resamples).
    /// Variance criterion reads targets from `target` and ignores `hess`; SecondOrder reads
    /// gradients from `target` and hessians from `hess`. Candidate thresholds are midpoints between
    /// consecutive distinct values. Split ties go to the lower feature index, then lower threshold.
    /// `rng` is only consulted when max_features selects a strict subset.
    RegressionTree grow_tree(const FeatureMatrix &X, std::span<const double> target, std::span<const double> hess,
                             std::span<const std::size_t> rows, const TreeGrowParams &params,
                             std::mt19937_64 *rng = nullptr);
}
