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

#include "rislocal/tree.hpp"

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace rislocal
{
    struct SvrParams
    {
        double c = 100.0;
        double epsilon = 0.5;
        double kernel_gamma = 0.0; // 0 = 1 / (d * var(standardized features))
        double tolerance = 1e-3;   // max KKT violation at convergence
        std::size_t max_updates = 0; // 0 = 1000 * n pair updates
    };

    /// epsilon-insensitive RBF support vector regressor.
    struct SvrModel
    {
        std::vector<double> feature_mean;
        std::vector<double> feature_scale;
        double kernel_gamma = 1.0;
        FeatureMatrix support;             // standardized support vectors
        std::vector<double> coefficients;  // alpha_i - alpha_i^*
        double bias = 0.0;
        std::size_t updates = 0;
        bool converged = false;

        double decision(std::span<const double> x) const;

        nlohmann::json to_json() const;
        static SvrModel from_json(const nlohmann::json &j);
    };

    /// Optional diagnostics from the solver.
    struct SvrTrace
    {
        std::vector<double> dual_objective; // after every pair update; maximization form
        std::vector<double> kkt_violation;
    };

    /// Trains by sequential minimal optimization on the 2n-variable dual with second-order
    /// working-set selection. Features are standardized internally.
    SvrModel svr_fit(const FeatureMatrix &X, std::span<const double> y, const SvrParams &params,
                     SvrTrace *trace = nullptr);
}
