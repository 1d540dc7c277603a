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

// Test-only reference implementations. They deliberately take the slow, direct route
// and share no code paths with the library beyond the data types.

#pragma once

#include "rislocal/physics.hpp"
#include "rislocal/tree.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

namespace oracle
{
    /// Direct per-element double loop over the plane-wave array factor.
    inline std::complex<double> array_factor(const rislocal::RisConfig &cfg, const rislocal::PhaseProfile &profile,
                                             double theta_deg, double phi_deg)
    {
        const double deg = 3.14159265358979323846 / 180.0;
        const double k = 2.0 * 3.14159265358979323846 * cfg.freq_hz / 299792458.0;
        const double ux = std::sin(theta_deg * deg) * std::cos(phi_deg * deg);
        const double uy = std::sin(theta_deg * deg) * std::sin(phi_deg * deg);
        const double tx = std::sin(cfg.theta_t_deg * deg) * std::cos(cfg.phi_t_deg * deg);
        const double ty = std::sin(cfg.theta_t_deg * deg) * std::sin(cfg.phi_t_deg * deg);
        std::complex<double> sum = 0.0;
        for (std::size_t m = 0; m < cfg.m_rows; ++m)
            for (std::size_t n = 0; n < cfg.n_cols; ++n)
            {
                const double x = cfg.d_x * (static_cast<double>(m) - (static_cast<double>(cfg.m_rows) - 1.0) / 2.0);
                const double y = cfg.d_y * (static_cast<double>(n) - (static_cast<double>(cfg.n_cols) - 1.0) / 2.0);
                const double phase = profile.at(m, n) + k * (x * (ux + tx) + y * (uy + ty));
                sum += cfg.gamma_amp * std::exp(std::complex<double>(0.0, phase));
            }
        return sum;
    }

    /// Brute-force k-nearest-neighbour mean: full sort by (distance, index).
    inline double knn(const rislocal::FeatureMatrix &X, std::span<const double> y, std::span<const double> q,
                      std::size_t k)
    {
        std::vector<std::size_t> idx(X.n_rows);
        std::iota(idx.begin(), idx.end(), 0);
        auto dist = [&](std::size_t i)
        {
            double s = 0.0;
            for (std::size_t j = 0; j < X.n_cols; ++j)
                s += std::pow(X.at(i, j) - q[j], 2);
            return s;
        };
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
                  { return dist(a) < dist(b) || (dist(a) == dist(b) && a < b); });
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            sum += y[idx[i]];
        return sum / static_cast<double>(k);
    }

    struct SplitNode
    {
        int feature = -1;
        double threshold = 0.0;
        double value = 0.0;
        std::unique_ptr<SplitNode> left, right;
    };

    inline double sse(const std::vector<double> &v)
    {
        if (v.empty())
            return 0.0;
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v)
            s += (x - mean) * (x - mean);
        return s;
    }

    /// Exhaustive regression tree: every feature, every midpoint between distinct values, SSE by
    /// two-pass recomputation. Ties within a relative 1e-12 keep the earlier (feature, threshold).
    inline std::unique_ptr<SplitNode> exhaustive_tree(const rislocal::FeatureMatrix &X, std::span<const double> y,
                                                      const std::vector<std::size_t> &rows, std::size_t depth,
                                                      std::size_t max_depth)
    {
        auto node = std::make_unique<SplitNode>();
        std::vector<double> labels;
        for (auto i : rows)
            labels.push_back(y[i]);
        node->value = std::accumulate(labels.begin(), labels.end(), 0.0) / static_cast<double>(labels.size());
        const double parent = sse(labels);
        if (depth >= max_depth || rows.size() < 2 || parent <= 0.0)
            return node;

        double best = parent * (1.0 - 1e-12);
        int best_f = -1;
        double best_t = 0.0;
        for (std::size_t f = 0; f < X.n_cols; ++f)
        {
            std::vector<double> vals;
            for (auto i : rows)
                vals.push_back(X.at(i, f));
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            for (std::size_t t = 0; t + 1 < vals.size(); ++t)
            {
                const double thr = 0.5 * (vals[t] + vals[t + 1]);
                std::vector<double> l, r;
                for (auto i : rows)
                    (X.at(i, f) <= thr ? l : r).push_back(y[i]);
                const double s = sse(l) + sse(r);
                if (s < best - 1e-12 * parent)
                {
                    best = s;
                    best_f = static_cast<int>(f);
                    best_t = thr;
                }
            }
        }
        if (best_f < 0)
            return node;
        node->feature = best_f;
        node->threshold = best_t;
        std::vector<std::size_t> lr, rr;
        for (auto i : rows)
            (X.at(i, static_cast<std::size_t>(best_f)) <= best_t ? lr : rr).push_back(i);
        node->left = exhaustive_tree(X, y, lr, depth + 1, max_depth);
        node->right = exhaustive_tree(X, y, rr, depth + 1, max_depth);
        return node;
    }

    /// Structural equality between the library's tree (from node index) and the oracle tree.
    inline bool same_tree(const rislocal::RegressionTree &t, std::size_t i, const SplitNode &o, double tol = 1e-9)
    {
        const auto &n = t.nodes[i];
        if (n.is_leaf() != (o.feature < 0))
            return false;
        if (n.is_leaf())
            return std::abs(n.value - o.value) <= tol;
        return n.feature == o.feature && std::abs(n.threshold - o.threshold) <= tol &&
               same_tree(t, static_cast<std::size_t>(n.left), *o.left, tol) &&
               same_tree(t, static_cast<std::size_t>(n.right), *o.right, tol);
    }
}
