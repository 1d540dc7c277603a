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

#include "rislocal/errors.hpp"
#include "rislocal/fileio.hpp"
#include "rislocal/regressors.hpp"

namespace rislocal
{
    namespace
    {
        constexpr const char *model_format = "rislocal-model";
        constexpr int model_version = 1;

        nlohmann::json matrix_rows(const FeatureMatrix &X)
        {
            auto rows = nlohmann::json::array();
            for (std::size_t i = 0; i < X.n_rows; ++i)
                rows.push_back(std::vector<double>(X.row(i).begin(), X.row(i).end()));
            return rows;
        }

        nlohmann::json trees_json(const std::vector<RegressionTree> &trees)
        {
            auto a = nlohmann::json::array();
            for (const auto &t : trees)
                a.push_back(t.to_json());
            return a;
        }

        std::vector<RegressionTree> trees_from(const nlohmann::json &a)
        {
            std::vector<RegressionTree> out;
            for (const auto &t : a)
                out.push_back(RegressionTree::from_json(t));
            return out;
        }
    }

    nlohmann::json model_to_json(const TrainedModel &model)
    {
        nlohmann::json state = std::visit(
            [](const auto &s) -> nlohmann::json
            {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, RegressionTree>)
                    return {{"tree", s.to_json()}};
                else if constexpr (std::is_same_v<S, SvrModel>)
                    return s.to_json();
                else if constexpr (std::is_same_v<S, KnnState>)
                    return {{"k", s.k}, {"samples", matrix_rows(s.samples)}, {"labels", s.labels}};
                else if constexpr (std::is_same_v<S, BoostState>)
                    return {{"base_score", s.base_score}, {"learning_rate", s.learning_rate}, {"trees", trees_json(s.trees)}};
                else
                    return {{"trees", trees_json(s.trees)}};
            },
            model.state());

        return {{"format", model_format},
                {"version", model_version},
                {"kind", to_string(model.kind())},
                {"seed", model.spec().seed},
                {"params", params_to_json(model.spec().params)},
                {"n_samples", model.n_samples()},
                {"n_features", model.n_features()},
                {"state", std::move(state)}};
    }

    TrainedModel model_from_json(const nlohmann::json &j)
    {
        try
        {
            if (j.at("format").get<std::string>() != model_format || j.at("version").get<int>() != model_version)
                throw ModelError("unsupported model format");
            const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
            const auto spec = spec_from_json(kind, j.at("params"), j.at("seed").get<std::uint64_t>());
            const auto n_samples = j.at("n_samples").get<std::size_t>();
            const auto n_features = j.at("n_features").get<std::size_t>();
            const auto &s = j.at("state");

            LearnedState state;
            switch (kind)
            {
            case ModelKind::DT:
                state = RegressionTree::from_json(s.at("tree"));
                break;
            case ModelKind::SVR:
                state = SvrModel::from_json(s);
                break;
            case ModelKind::KNN:
            {
                KnnState k;
                k.k = s.at("k").get<std::size_t>();
                k.labels = s.at("labels").get<std::vector<double>>();
                const auto rows = s.at("samples").get<std::vector<std::vector<double>>>();
                k.samples.n_rows = rows.size();
                k.samples.n_cols = n_features;
                for (const auto &r : rows)
                {
                    if (r.size() != n_features)
                        throw ModelError("KNN sample width mismatch");
                    k.samples.values.insert(k.samples.values.end(), r.begin(), r.end());
                }
                if (k.labels.size() != rows.size() || rows.empty())
                    throw ModelError("inconsistent KNN state");
                state = std::move(k);
                break;
            }
            case ModelKind::XGB:
            case ModelKind::GB:
                state = BoostState{s.at("base_score").get<double>(), s.at("learning_rate").get<double>(),
                                   trees_from(s.at("trees"))};
                break;
            case ModelKind::RF:
                state = ForestState{trees_from(s.at("trees"))};
                if (std::get<ForestState>(state).trees.empty())
                    throw ModelError("forest has no trees");
                break;
            }
            return TrainedModel(spec, std::move(state), n_samples, n_features);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ModelError(std::string("malformed model: ") + e.what());
        }
    }

    void save_model(const TrainedModel &model, const std::filesystem::path &path)
    {
        write_file_atomic(path, model_to_json(model).dump(1) + "\n");
    }

    TrainedModel load_model(const std::filesystem::path &path)
    {
        const std::string text = read_file(path);
        try
        {
            return model_from_json(nlohmann::json::parse(text));
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ModelError(path.string() + ": " + e.what());
        }
    }
}
