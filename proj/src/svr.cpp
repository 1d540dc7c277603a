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

#include "rislocal/svr.hpp"
#include "rislocal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rislocal
{
    namespace
    {
        constexpr double tau = 1e-12;

        double rbf(std::span<const double> a, std::span<const double> b, double gamma)
        {
            double d2 = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k)
                d2 += (a[k] - b[k]) * (a[k] - b[k]);
            return std::exp(-gamma * d2);
        }
    }

    double SvrModel::decision(std::span<const double> x) const
    {
        if (x.size() != feature_mean.size())
            throw InvalidInputError("feature width mismatch");
        std::vector<double> z(x.size());
        for (std::size_t k = 0; k < x.size(); ++k)
            z[k] = (x[k] - feature_mean[k]) / feature_scale[k];
        double f = bias;
        for (std::size_t i = 0; i < coefficients.size(); ++i)
            f += coefficients[i] * rbf(support.row(i), z, kernel_gamma);
        return f;
    }

    nlohmann::json SvrModel::to_json() const
    {
        std::vector<std::vector<double>> sv(support.n_rows);
        for (std::size_t i = 0; i < support.n_rows; ++i)
            sv[i].assign(support.row(i).begin(), support.row(i).end());
        return {{"feature_mean", feature_mean},
                {"feature_scale", feature_scale},
                {"kernel_gamma", kernel_gamma},
                {"support_vectors", sv},
                {"coefficients", coefficients},
                {"bias", bias}};
    }

    SvrModel SvrModel::from_json(const nlohmann::json &j)
    {
        SvrModel m;
        try
        {
            m.feature_mean = j.at("feature_mean").get<std::vector<double>>();
            m.feature_scale = j.at("feature_scale").get<std::vector<double>>();
            m.kernel_gamma = j.at("kernel_gamma").get<double>();
            m.coefficients = j.at("coefficients").get<std::vector<double>>();
            m.bias = j.at("bias").get<double>();
            const auto sv = j.at("support_vectors").get<std::vector<std::vector<double>>>();
            m.support.n_rows = sv.size();
            m.support.n_cols = m.feature_mean.size();
            for (const auto &r : sv)
            {
                if (r.size() != m.support.n_cols)
                    throw ModelError("support vector width mismatch");
                m.support.values.insert(m.support.values.end(), r.begin(), r.end());
            }
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ModelError(std::string("malformed SVR state: ") + e.what());
        }
        if (m.coefficients.size() != m.support.n_rows || m.feature_scale.size() != m.feature_mean.size())
            throw ModelError("inconsistent SVR state");
        m.converged = true;
        return m;
    }

    SvrModel svr_fit(const FeatureMatrix &X, std::span<const double> y, const SvrParams &params, SvrTrace *trace)
    {
        const std::size_t n = X.n_rows, d = X.n_cols;
        if (n == 0)
            throw DomainError("SVR needs at least one training sample");
        if (y.size() != n)
            throw InvalidInputError("label count does not match sample count");
        if (!(params.c > 0.0) || !(params.epsilon >= 0.0) || !(params.kernel_gamma >= 0.0) || !(params.tolerance > 0.0))
            throw ModelError("SVR hyperparameters out of range");

        SvrModel model;
        model.feature_mean.assign(d, 0.0);
        model.feature_scale.assign(d, 1.0);
        for (std::size_t k = 0; k < d; ++k)
        {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                mean += X.at(i, k);
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                var += (X.at(i, k) - mean) * (X.at(i, k) - mean);
            var /= static_cast<double>(n);
            model.feature_mean[k] = mean;
            model.feature_scale[k] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
        FeatureMatrix Z{std::vector<double>(n * d), n, d};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k)
                Z.values[i * d + k] = (X.at(i, k) - model.feature_mean[k]) / model.feature_scale[k];

        if (params.kernel_gamma > 0.0)
            model.kernel_gamma = params.kernel_gamma;
        else
        {
            double mean = 0.0, var = 0.0;
            for (double v : Z.values)
                mean += v;
            mean /= static_cast<double>(Z.values.size());
            for (double v : Z.values)
                var += (v - mean) * (v - mean);
            var /= static_cast<double>(Z.values.size());
            model.kernel_gamma = 1.0 / (static_cast<double>(d) * (var > 0.0 ? var : 1.0));
        }

        std::vector<double> K(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                K[i * n + j] = K[j * n + i] = rbf(Z.row(i), Z.row(j), model.kernel_gamma);

        // Variables t < n carry alpha (sign +1), t >= n carry alpha^* (sign -1).
        const std::size_t l = 2 * n;
        const double C = params.c;
        auto sign = [n](std::size_t t) { return t < n ? 1.0 : -1.0; };
        auto kern = [&](std::size_t s, std::size_t t) { return K[(s % n) * n + (t % n)]; };
        auto Q = [&](std::size_t s, std::size_t t) { return sign(s) * sign(t) * kern(s, t); };

        std::vector<double> alpha(l, 0.0), p(l), G(l);
        for (std::size_t i = 0; i < n; ++i)
        {
            p[i] = params.epsilon - y[i];
            p[i + n] = params.epsilon + y[i];
        }
        G = p;

        auto is_upper = [&](std::size_t t) { return alpha[t] >= C; };
        auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
        auto in_up = [&](std::size_t t) { return sign(t) > 0 ? !is_upper(t) : !is_lower(t); };
        auto in_low = [&](std::size_t t) { return sign(t) > 0 ? !is_lower(t) : !is_upper(t); };
        auto dual_objective = [&]()
        {
            double f = 0.0;
            for (std::size_t t = 0; t < l; ++t)
                f += alpha[t] * (G[t] + p[t]);
            return -0.5 * f;
        };

        const std::size_t max_updates = params.max_updates > 0 ? params.max_updates : 1000 * n;
        std::size_t updates = 0;
        bool converged = false;
        while (true)
        {
            double g_max = -std::numeric_limits<double>::infinity();
            std::size_t i = l;
            for (std::size_t t = 0; t < l; ++t)
                if (in_up(t) && -sign(t) * G[t] >= g_max)
                {
                    g_max = -sign(t) * G[t];
                    i = t;
                }

            double g_max2 = -std::numeric_limits<double>::infinity();
            double obj_min = std::numeric_limits<double>::infinity();
            std::size_t j = l;
            for (std::size_t t = 0; t < l; ++t)
            {
                if (!in_low(t))
                    continue;
                const double yg = sign(t) * G[t];
                g_max2 = std::max(g_max2, yg);
                if (i == l)
                    continue;
                const double b = g_max + yg;
                if (b > 0.0)
                {
                    double a = kern(i, i) + kern(t, t) - 2.0 * kern(i, t);
                    if (a <= 0.0)
                        a = tau;
                    const double obj = -(b * b) / a;
                    if (obj < obj_min)
                    {
                        obj_min = obj;
                        j = t;
                    }
                }
            }

            const double violation = g_max + g_max2;
            if (trace)
                trace->kkt_violation.push_back(violation);
            if (i == l || j == l || violation < params.tolerance)
            {
                converged = true;
                break;
            }
            if (updates >= max_updates)
                break;

            const double old_i = alpha[i], old_j = alpha[j];
            if (sign(i) != sign(j))
            {
                double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
                if (quad <= 0.0)
                    quad = tau;
                const double delta = (-G[i] - G[j]) / quad;
                const double diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if (diff > 0.0)
                {
                    if (alpha[j] < 0.0)
                    {
                        alpha[j] = 0.0;
                        alpha[i] = diff;
                    }
                }
                else if (alpha[i] < 0.0)
                {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if (diff > 0.0)
                {
                    if (alpha[i] > C)
                    {
                        alpha[i] = C;
                        alpha[j] = C - diff;
                    }
                }
                else if (alpha[j] > C)
                {
                    alpha[j] = C;
                    alpha[i] = C + diff;
                }
            }
            else
            {
                double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
                if (quad <= 0.0)
                    quad = tau;
                const double delta = (G[i] - G[j]) / quad;
                const double sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if (sum > C)
                {
                    if (alpha[i] > C)
                    {
                        alpha[i] = C;
                        alpha[j] = sum - C;
                    }
                }
                else if (alpha[j] < 0.0)
                {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if (sum > C)
                {
                    if (alpha[j] > C)
                    {
                        alpha[j] = C;
                        alpha[i] = sum - C;
                    }
                }
                else if (alpha[i] < 0.0)
                {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }

            const double dai = alpha[i] - old_i, daj = alpha[j] - old_j;
            for (std::size_t t = 0; t < l; ++t)
                G[t] += Q(t, i) * dai + Q(t, j) * daj;
            ++updates;
            if (trace)
                trace->dual_objective.push_back(dual_objective());
        }

        // Bias from free variables, or the midpoint of the feasible interval when none are free.
        double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t t = 0; t < l; ++t)
        {
            const double yg = sign(t) * G[t];
            if (is_upper(t))
            {
                if (sign(t) < 0)
                    ub = std::min(ub, yg);
                else
                    lb = std::max(lb, yg);
            }
            else if (is_lower(t))
            {
                if (sign(t) > 0)
                    ub = std::min(ub, yg);
                else
                    lb = std::max(lb, yg);
            }
            else
            {
                ++n_free;
                sum_free += yg;
            }
        }
        const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
        model.bias = -rho;

        model.support.n_cols = d;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double coef = alpha[i] - alpha[i + n];
            if (coef != 0.0)
            {
                model.coefficients.push_back(coef);
                model.support.values.insert(model.support.values.end(), Z.row(i).begin(), Z.row(i).end());
                ++model.support.n_rows;
            }
        }
        model.updates = updates;
        model.converged = converged;
        return model;
    }
}
