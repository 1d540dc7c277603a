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

#include "rislocal/tree.hpp"
#include "rislocal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace rislocal
{
    double RegressionTree::predict(std::span<const double> x) const
    {
        if (nodes.empty())
            throw ModelError("empty tree");
        std::size_t i = 0;
        while (!nodes[i].is_leaf())
        {
            const auto &n = nodes[i];
            i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
        }
        return nodes[i].value;
    }

    std::size_t RegressionTree::depth() const
    {
        if (nodes.empty())
            return 0;
        std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t
        {
            const auto &n = nodes[i];
            if (n.is_leaf())
                return 0;
            return 1 + std::max(rec(static_cast<std::size_t>(n.left)), rec(static_cast<std::size_t>(n.right)));
        };
        return rec(0);
    }

    std::size_t RegressionTree::leaf_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(nodes.begin(), nodes.end(), [](const TreeNode &n) { return n.is_leaf(); }));
    }

    nlohmann::json RegressionTree::to_json() const
    {
        std::function<nlohmann::json(std::size_t)> rec = [&](std::size_t i) -> nlohmann::json
        {
            const auto &n = nodes[i];
            if (n.is_leaf())
                return {{"value", n.value}};
            return {{"feature", n.feature},
                    {"threshold", n.threshold},
                    {"left", rec(static_cast<std::size_t>(n.left))},
                    {"right", rec(static_cast<std::size_t>(n.right))}};
        };
        return nodes.empty() ? nlohmann::json::object() : rec(0);
    }

    RegressionTree RegressionTree::from_json(const nlohmann::json &j)
    {
        RegressionTree t;
        std::function<int(const nlohmann::json &)> rec = [&](const nlohmann::json &n) -> int
        {
            const int id = static_cast<int>(t.nodes.size());
            t.nodes.emplace_back();
            if (n.contains("value"))
            {
                t.nodes[static_cast<std::size_t>(id)].value = n.at("value").get<double>();
                return id;
            }
            TreeNode node;
            node.feature = n.at("feature").get<int>();
            node.threshold = n.at("threshold").get<double>();
            if (node.feature < 0)
                throw ModelError("negative feature index in tree");
            node.left = rec(n.at("left"));
            node.right = rec(n.at("right"));
            t.nodes[static_cast<std::size_t>(id)] = node;
            return id;
        };
        try
        {
            rec(j);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ModelError(std::string("malformed tree: ") + e.what());
        }
        return t;
    }

    namespace
    {
        struct SplitChoice
        {
            int feature = -1;
            double threshold = 0.0;
            double gain = 0.0;
        };

        class TreeGrower
        {
        public:
            TreeGrower(const FeatureMatrix &X, std::span<const double> target, std::span<const double> hess,
                       const TreeGrowParams &params, std::mt19937_64 *rng)
                : X_(X), target_(target), hess_(hess), params_(params), rng_(rng)
            {
            }

            RegressionTree run(std::vector<std::size_t> rows)
            {
                grow(std::move(rows), 0);
                return std::move(tree_);
            }

        private:
            double h(std::size_t i) const { return params_.criterion == SplitCriterion::Variance ? 1.0 : hess_[i]; }

            double leaf_value(const std::vector<std::size_t> &rows) const
            {
                double g = 0.0, hs = 0.0;
                for (auto i : rows)
                {
                    g += target_[i];
                    hs += h(i);
                }
                if (params_.criterion == SplitCriterion::Variance)
                    return g / static_cast<double>(rows.size());
                return -g / (hs + params_.lambda);
            }

            std::vector<std::size_t> candidate_features()
            {
                std::vector<std::size_t> f(X_.n_cols);
                std::iota(f.begin(), f.end(), 0);
                const std::size_t k = params_.max_features;
                if (k == 0 || k >= f.size() || rng_ == nullptr)
                    return f;
                for (std::size_t i = 0; i < k; ++i)
                {
                    std::uniform_int_distribution<std::size_t> pick(i, f.size() - 1);
                    std::swap(f[i], f[pick(*rng_)]);
                }
                f.resize(k);
                std::sort(f.begin(), f.end());
                return f;
            }

            SplitChoice best_split(const std::vector<std::size_t> &rows)
            {
                const bool variance = params_.criterion == SplitCriterion::Variance;
                const double n = static_cast<double>(rows.size());

                // Variance: work with targets centered on the node mean so the parent score is zero.
                double mean = 0.0, G = 0.0, H = 0.0, sse = 0.0;
                for (auto i : rows)
                {
                    G += target_[i];
                    H += h(i);
                }
                if (variance)
                {
                    mean = G / n;
                    for (auto i : rows)
                        sse += (target_[i] - mean) * (target_[i] - mean);
                }
                const double lambda = params_.lambda;
                const double parent_score = variance ? 0.0 : G * G / (H + lambda);

                // Candidates within tie_eps of the incumbent lose, so exact ties (the same partition
                // reached through different features) go to the earlier candidate regardless of rounding.
                SplitChoice best;
                const double tie_eps = variance ? 1e-12 * sse : 0.0;
                best.gain = tie_eps;

                std::vector<std::size_t> order(rows);
                for (std::size_t f : candidate_features())
                {
                    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                              {
                                  const double va = X_.at(a, f), vb = X_.at(b, f);
                                  return va < vb || (va == vb && a < b);
                              });
                    double gl = 0.0, hl = 0.0;
                    for (std::size_t k = 0; k + 1 < order.size(); ++k)
                    {
                        const std::size_t i = order[k];
                        gl += variance ? target_[i] - mean : target_[i];
                        hl += h(i);
                        const double v = X_.at(i, f), v_next = X_.at(order[k + 1], f);
                        if (!(v < v_next))
                            continue;
                        double gain;
                        if (variance)
                        {
                            const double nl = static_cast<double>(k + 1);
                            gain = gl * gl / nl + gl * gl / (n - nl);
                        }
                        else
                        {
                            const double gr = G - gl, hr = H - hl;
                            gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent_score) -
                                   params_.gamma;
                        }
                        if (gain > best.gain + tie_eps)
                        {
                            double thr = 0.5 * (v + v_next);
                            if (!(thr < v_next))
                                thr = v;
                            best = {static_cast<int>(f), thr, gain};
                        }
                    }
                }
                return best;
            }

            int grow(std::vector<std::size_t> rows, std::size_t depth)
            {
                const int id = static_cast<int>(tree_.nodes.size());
                tree_.nodes.emplace_back();
                tree_.nodes.back().value = leaf_value(rows);

                const bool depth_left = params_.max_depth == 0 || depth < params_.max_depth;
                if (!depth_left || rows.size() < std::max<std::size_t>(params_.min_samples_split, 2))
                    return id;
                if (params_.criterion == SplitCriterion::Variance)
                {
                    const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [&](auto a, auto b)
                                                              { return target_[a] < target_[b]; });
                    if (target_[*lo] == target_[*hi])
                        return id;
                }

                const SplitChoice s = best_split(rows);
                if (s.feature < 0)
                    return id;

                std::vector<std::size_t> left, right;
                for (auto i : rows)
                    (X_.at(i, static_cast<std::size_t>(s.feature)) <= s.threshold ? left : right).push_back(i);
                rows.clear();
                rows.shrink_to_fit();

                const int l = grow(std::move(left), depth + 1);
                const int r = grow(std::move(right), depth + 1);
                auto &node = tree_.nodes[static_cast<std::size_t>(id)];
                node.feature = s.feature;
                node.threshold = s.threshold;
                node.left = l;
                node.right = r;
                return id;
            }

            const FeatureMatrix &X_;
            std::span<const double> target_;
            std::span<const double> hess_;
            const TreeGrowParams &params_;
            std::mt19937_64 *rng_;
            RegressionTree tree_;
        };
    }

    RegressionTree grow_tree(const FeatureMatrix &X, std::span<const double> target, std::span<const double> hess,
                             std::span<const std::size_t> rows, const TreeGrowParams &params, std::mt19937_64 *rng)
    {
        if (rows.empty())
            throw DomainError("cannot grow a tree on zero samples");
        if (target.size() != X.n_rows)
            throw InvalidInputError("target length does not match sample count");
        if (params.criterion == SplitCriterion::SecondOrder && hess.size() != X.n_rows)
            throw InvalidInputError("hessian length does not match sample count");
        TreeGrower g(X, target, hess, params, rng);
        return g.run(std::vector<std::size_t>(rows.begin(), rows.end()));
    }
}
