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

#include "rislocal/regressors.hpp"
#include "rislocal/errors.hpp"
#include "rislocal/seed.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace rislocal
{
    std::string to_string(ModelKind kind)
    {
        switch (kind)
        {
        case ModelKind::DT: return "DT";
        case ModelKind::SVR: return "SVR";
        case ModelKind::KNN: return "KNN";
        case ModelKind::XGB: return "XGB";
        case ModelKind::GB: return "GB";
        case ModelKind::RF: return "RF";
        }
        return "?";
    }

    ModelKind parse_model_kind(std::string_view name)
    {
        std::string up(name);
        std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        for (auto k : all_model_kinds)
            if (to_string(k) == up)
                return k;
        throw ModelError("unknown model kind '" + std::string(name) + "' (expected DT, SVR, KNN, XGB, GB or RF)");
    }

    RegressorSpec RegressorSpec::defaults(ModelKind kind, std::uint64_t seed)
    {
        switch (kind)
        {
        case ModelKind::DT: return {CartParams{}, seed};
        case ModelKind::SVR: return {SvrParams{}, seed};
        case ModelKind::KNN: return {KnnParams{}, seed};
        case ModelKind::XGB: return {XgbParams{}, seed};
        case ModelKind::GB: return {GbParams{}, seed};
        case ModelKind::RF: return {RfParams{}, seed};
        }
        throw ModelError("unknown model kind");
    }

    namespace
    {
        class ParamReader
        {
        public:
            explicit ParamReader(const nlohmann::json &j) : j_(j)
            {
                if (!j_.is_object() && !j_.is_null())
                    throw ModelError("hyperparameters must be a JSON object");
            }

            void count(const char *name, std::size_t &field, std::size_t min_value)
            {
                if (!present(name))
                    return;
                const auto &v = j_.at(name);
                if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value))
                    throw ModelError(std::string("hyperparameter '") + name + "' must be an integer >= " +
                                     std::to_string(min_value));
                field = v.get<std::size_t>();
            }

            void real(const char *name, double &field, double lo, double hi, bool lo_open = false)
            {
                if (!present(name))
                    return;
                const auto &v = j_.at(name);
                if (!v.is_number())
                    throw ModelError(std::string("hyperparameter '") + name + "' must be a number");
                const double x = v.get<double>();
                if (!(lo_open ? x > lo : x >= lo) || !(x <= hi))
                    throw ModelError(std::string("hyperparameter '") + name + "' out of range");
                field = x;
            }

            void flag(const char *name, bool &field)
            {
                if (!present(name))
                    return;
                if (!j_.at(name).is_boolean())
                    throw ModelError(std::string("hyperparameter '") + name + "' must be a boolean");
                field = j_.at(name).get<bool>();
            }

            void finish() const
            {
                if (!j_.is_object())
                    return;
                for (const auto &[key, _] : j_.items())
                    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
                        throw ModelError("unknown hyperparameter '" + key + "'");
            }

        private:
            bool present(const char *name)
            {
                seen_.emplace_back(name);
                return j_.is_object() && j_.contains(name);
            }

            const nlohmann::json &j_;
            std::vector<std::string> seen_;
        };

        constexpr double inf = std::numeric_limits<double>::infinity();
    }

    RegressorSpec spec_from_json(ModelKind kind, const nlohmann::json &params, std::uint64_t seed)
    {
        RegressorSpec spec = RegressorSpec::defaults(kind, seed);
        ParamReader r(params);
        std::visit(
            [&](auto &p)
            {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, KnnParams>)
                    r.count("k", p.k, 1);
                else if constexpr (std::is_same_v<P, CartParams>)
                {
                    r.count("max_depth", p.max_depth, 0);
                    r.count("min_samples_split", p.min_samples_split, 2);
                }
                else if constexpr (std::is_same_v<P, RfParams>)
                {
                    r.count("n_trees", p.n_trees, 1);
                    r.count("max_depth", p.max_depth, 0);
                    r.count("min_samples_split", p.min_samples_split, 2);
                    r.flag("bootstrap", p.bootstrap);
                    r.count("max_features", p.max_features, 0);
                }
                else if constexpr (std::is_same_v<P, GbParams>)
                {
                    r.count("n_estimators", p.n_estimators, 1);
                    r.real("learning_rate", p.learning_rate, 0.0, 1.0);
                    r.count("max_depth", p.max_depth, 0);
                    r.count("min_samples_split", p.min_samples_split, 2);
                }
                else if constexpr (std::is_same_v<P, XgbParams>)
                {
                    r.count("n_estimators", p.n_estimators, 1);
                    r.real("learning_rate", p.learning_rate, 0.0, 1.0);
                    r.count("max_depth", p.max_depth, 0);
                    r.count("min_samples_split", p.min_samples_split, 2);
                    r.real("lambda", p.lambda, 0.0, inf);
                    r.real("gamma", p.gamma, 0.0, inf);
                }
                else if constexpr (std::is_same_v<P, SvrParams>)
                {
                    r.real("C", p.c, 0.0, inf, true);
                    r.real("epsilon", p.epsilon, 0.0, inf);
                    r.real("kernel_gamma", p.kernel_gamma, 0.0, inf);
                    r.real("tolerance", p.tolerance, 0.0, inf, true);
                    r.count("max_updates", p.max_updates, 0);
                }
            },
            spec.params);
        r.finish();
        return spec;
    }

    nlohmann::json params_to_json(const Hyperparameters &params)
    {
        return std::visit(
            [](const auto &p) -> nlohmann::json
            {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, KnnParams>)
                    return {{"k", p.k}};
                else if constexpr (std::is_same_v<P, CartParams>)
                    return {{"max_depth", p.max_depth}, {"min_samples_split", p.min_samples_split}};
                else if constexpr (std::is_same_v<P, RfParams>)
                    return {{"n_trees", p.n_trees},
                            {"max_depth", p.max_depth},
                            {"min_samples_split", p.min_samples_split},
                            {"bootstrap", p.bootstrap},
                            {"max_features", p.max_features}};
                else if constexpr (std::is_same_v<P, GbParams>)
                    return {{"n_estimators", p.n_estimators},
                            {"learning_rate", p.learning_rate},
                            {"max_depth", p.max_depth},
                            {"min_samples_split", p.min_samples_split}};
                else if constexpr (std::is_same_v<P, XgbParams>)
                    return {{"n_estimators", p.n_estimators},
                            {"learning_rate", p.learning_rate},
                            {"max_depth", p.max_depth},
                            {"min_samples_split", p.min_samples_split},
                            {"lambda", p.lambda},
                            {"gamma", p.gamma}};
                else
                    return {{"C", p.c},
                            {"epsilon", p.epsilon},
                            {"kernel_gamma", p.kernel_gamma},
                            {"tolerance", p.tolerance},
                            {"max_updates", p.max_updates}};
            },
            params);
    }

    namespace
    {
        void check_training(const FeatureMatrix &X, std::span<const double> y)
        {
            if (X.n_rows == 0)
                throw DomainError("empty training set");
            if (X.n_cols == 0)
                throw InvalidInputError("training features have zero width");
            if (y.size() != X.n_rows || X.values.size() != X.n_rows * X.n_cols)
                throw InvalidInputError("label count does not match sample count");
            for (double v : X.values)
                if (!std::isfinite(v))
                    throw InvalidInputError("non-finite training feature");
            for (double v : y)
                if (!std::isfinite(v))
                    throw InvalidInputError("non-finite training label");
        }

        std::vector<std::size_t> all_rows(std::size_t n)
        {
            std::vector<std::size_t> r(n);
            std::iota(r.begin(), r.end(), 0);
            return r;
        }
    }

    KnnState knn_fit(const FeatureMatrix &X, std::span<const double> y, const KnnParams &params)
    {
        check_training(X, y);
        if (params.k < 1)
            throw ModelError("k must be >= 1");
        return {X, std::vector<double>(y.begin(), y.end()), params.k};
    }

    double knn_predict(const KnnState &state, std::span<const double> x)
    {
        const std::size_t n = state.samples.n_rows;
        const std::size_t k = std::min(state.k, n);
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto r = state.samples.row(i);
            double d2 = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                d2 += (r[j] - x[j]) * (r[j] - x[j]);
            dist[i] = {d2, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            sum += state.labels[dist[i].second];
        return sum / static_cast<double>(k);
    }

    RegressionTree cart_fit(const FeatureMatrix &X, std::span<const double> y, const CartParams &params)
    {
        check_training(X, y);
        TreeGrowParams gp;
        gp.max_depth = params.max_depth;
        gp.min_samples_split = params.min_samples_split;
        const auto rows = all_rows(X.n_rows);
        return grow_tree(X, y, {}, rows, gp);
    }

    ForestState rf_fit(const FeatureMatrix &X, std::span<const double> y, const RfParams &params, std::uint64_t seed)
    {
        check_training(X, y);
        if (params.n_trees < 1)
            throw ModelError("n_trees must be >= 1");
        if (params.max_features > X.n_cols)
            throw ModelError("max_features exceeds the feature count");
        TreeGrowParams gp;
        gp.max_depth = params.max_depth;
        gp.min_samples_split = params.min_samples_split;
        gp.max_features = params.max_features > 0
                              ? params.max_features
                              : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.n_cols))));

        const std::size_t n = X.n_rows;
        ForestState forest;
        forest.trees.reserve(params.n_trees);
        for (std::size_t t = 0; t < params.n_trees; ++t)
        {
            std::mt19937_64 rng(derive_seed(seed, t));
            std::vector<std::size_t> rows;
            if (params.bootstrap)
            {
                rows.resize(n);
                std::uniform_int_distribution<std::size_t> pick(0, n - 1);
                for (auto &r : rows)
                    r = pick(rng);
            }
            else
                rows = all_rows(n);
            forest.trees.push_back(grow_tree(X, y, {}, rows, gp, &rng));
        }
        return forest;
    }

    double rf_predict(const ForestState &state, std::span<const double> x)
    {
        double sum = 0.0;
        for (const auto &t : state.trees)
            sum += t.predict(x);
        return sum / static_cast<double>(state.trees.size());
    }

    namespace
    {
        double mean_of(std::span<const double> y)
        {
            return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
        }
    }

    BoostState gb_fit(const FeatureMatrix &X, std::span<const double> y, const GbParams &params)
    {
        check_training(X, y);
        const std::size_t n = X.n_rows;
        BoostState s;
        s.base_score = mean_of(y);
        s.learning_rate = params.learning_rate;
        TreeGrowParams gp;
        gp.max_depth = params.max_depth;
        gp.min_samples_split = params.min_samples_split;
        const auto rows = all_rows(n);

        std::vector<double> F(n, s.base_score), residual(n);
        for (std::size_t t = 0; t < params.n_estimators; ++t)
        {
            for (std::size_t i = 0; i < n; ++i)
                residual[i] = y[i] - F[i];
            auto tree = grow_tree(X, residual, {}, rows, gp);
            for (std::size_t i = 0; i < n; ++i)
                F[i] += s.learning_rate * tree.predict(X.row(i));
            s.trees.push_back(std::move(tree));
        }
        return s;
    }

    BoostState xgb_fit(const FeatureMatrix &X, std::span<const double> y, const XgbParams &params)
    {
        check_training(X, y);
        const std::size_t n = X.n_rows;
        BoostState s;
        s.base_score = mean_of(y);
        s.learning_rate = params.learning_rate;
        TreeGrowParams gp;
        gp.max_depth = params.max_depth;
        gp.min_samples_split = params.min_samples_split;
        gp.criterion = SplitCriterion::SecondOrder;
        gp.lambda = params.lambda;
        gp.gamma = params.gamma;
        const auto rows = all_rows(n);

        // Squared loss (F - y)^2: gradient 2 (F - y), hessian 2.
        std::vector<double> F(n, s.base_score), grad(n), hess(n, 2.0);
        for (std::size_t t = 0; t < params.n_estimators; ++t)
        {
            for (std::size_t i = 0; i < n; ++i)
                grad[i] = 2.0 * (F[i] - y[i]);
            auto tree = grow_tree(X, grad, hess, rows, gp);
            for (std::size_t i = 0; i < n; ++i)
                F[i] += s.learning_rate * tree.predict(X.row(i));
            s.trees.push_back(std::move(tree));
        }
        return s;
    }

    double boost_predict(const BoostState &state, std::span<const double> x)
    {
        double f = state.base_score;
        for (const auto &t : state.trees)
            f += state.learning_rate * t.predict(x);
        return f;
    }

    std::vector<double> boost_staged_predict(const BoostState &state, std::span<const double> x)
    {
        std::vector<double> out{state.base_score};
        double f = state.base_score;
        for (const auto &t : state.trees)
        {
            f += state.learning_rate * t.predict(x);
            out.push_back(f);
        }
        return out;
    }

    TrainedModel::TrainedModel(RegressorSpec spec, LearnedState state, std::size_t n_samples, std::size_t n_features)
        : spec_(std::move(spec)), state_(std::move(state)), n_samples_(n_samples), n_features_(n_features)
    {
        if (n_features_ == 0)
            throw ModelError("model has zero feature width");
    }

    double TrainedModel::predict_unclamped(std::span<const double> features) const
    {
        if (features.size() != n_features_)
            throw InvalidInputError("feature width " + std::to_string(features.size()) + " does not match trained width " +
                                    std::to_string(n_features_));
        for (double v : features)
            if (!std::isfinite(v))
                throw InvalidInputError("non-finite feature");
        return std::visit(
            [&](const auto &s) -> double
            {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, RegressionTree>)
                    return s.predict(features);
                else if constexpr (std::is_same_v<S, SvrModel>)
                    return s.decision(features);
                else if constexpr (std::is_same_v<S, KnnState>)
                    return knn_predict(s, features);
                else if constexpr (std::is_same_v<S, BoostState>)
                    return boost_predict(s, features);
                else
                    return rf_predict(s, features);
            },
            state_);
    }

    double TrainedModel::predict(std::span<const double> features) const
    {
        return std::clamp(predict_unclamped(features), 0.0, 90.0);
    }

    FeatureMatrix to_matrix(const Dataset &ds)
    {
        FeatureMatrix X;
        X.n_rows = ds.size();
        X.n_cols = ds.n_features();
        X.values.reserve(X.n_rows * X.n_cols);
        for (const auto &s : ds.samples)
        {
            if (s.features.size() != X.n_cols)
                throw InvalidInputError("ragged feature widths in dataset");
            X.values.insert(X.values.end(), s.features.powers_dbm.begin(), s.features.powers_dbm.end());
        }
        return X;
    }

    void canonicalize(FeatureMatrix &X, std::vector<double> &y)
    {
        std::vector<std::size_t> order(X.n_rows);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                         {
                             const auto ra = X.row(a), rb = X.row(b);
                             for (std::size_t j = 0; j < X.n_cols; ++j)
                                 if (ra[j] != rb[j])
                                     return ra[j] < rb[j];
                             return y[a] < y[b];
                         });
        FeatureMatrix Xs{std::vector<double>(), X.n_rows, X.n_cols};
        Xs.values.reserve(X.values.size());
        std::vector<double> ys;
        ys.reserve(y.size());
        for (auto i : order)
        {
            Xs.values.insert(Xs.values.end(), X.row(i).begin(), X.row(i).end());
            ys.push_back(y[i]);
        }
        X = std::move(Xs);
        y = std::move(ys);
    }

    TrainedModel fit(const FeatureMatrix &X_in, std::span<const double> y_in, const RegressorSpec &spec)
    {
        check_training(X_in, y_in);
        FeatureMatrix X = X_in;
        std::vector<double> y(y_in.begin(), y_in.end());
        canonicalize(X, y);

        LearnedState state = std::visit(
            [&](const auto &p) -> LearnedState
            {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, KnnParams>)
                    return knn_fit(X, y, p);
                else if constexpr (std::is_same_v<P, CartParams>)
                    return cart_fit(X, y, p);
                else if constexpr (std::is_same_v<P, RfParams>)
                    return rf_fit(X, y, p, spec.seed);
                else if constexpr (std::is_same_v<P, GbParams>)
                    return gb_fit(X, y, p);
                else if constexpr (std::is_same_v<P, XgbParams>)
                    return xgb_fit(X, y, p);
                else
                    return svr_fit(X, y, p);
            },
            spec.params);
        return TrainedModel(spec, std::move(state), X.n_rows, X.n_cols);
    }

    TrainedModel fit(const Dataset &train, const RegressorSpec &spec)
    {
        if (train.empty())
            throw DomainError("empty training set");
        const auto y = train.labels();
        return fit(to_matrix(train), y, spec);
    }
}
