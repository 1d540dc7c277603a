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

#include "rislocal/evaluation.hpp"
#include "rislocal/errors.hpp"
#include "rislocal/fileio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace rislocal
{
    namespace
    {
        void check_pair(std::span<const double> a, std::span<const double> b)
        {
            if (a.empty() || a.size() != b.size())
                throw InvalidInputError("metric inputs must be non-empty and of equal length");
        }

        std::string fixed3(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f", v);
            return buf;
        }

        std::string lower(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return s;
        }
    }

    double mae(std::span<const double> y_true, std::span<const double> y_pred)
    {
        check_pair(y_true, y_pred);
        double s = 0.0;
        for (std::size_t i = 0; i < y_true.size(); ++i)
            s += std::abs(y_true[i] - y_pred[i]);
        return s / static_cast<double>(y_true.size());
    }

    double rmse(std::span<const double> y_true, std::span<const double> y_pred)
    {
        check_pair(y_true, y_pred);
        double s = 0.0;
        for (std::size_t i = 0; i < y_true.size(); ++i)
            s += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        return std::sqrt(s / static_cast<double>(y_true.size()));
    }

    double r2(std::span<const double> y_true, std::span<const double> y_pred)
    {
        check_pair(y_true, y_pred);
        if (y_true.size() < 2)
            throw InvalidInputError("r2 needs at least two samples");
        double mean = 0.0;
        for (double v : y_true)
            mean += v;
        mean /= static_cast<double>(y_true.size());
        double sse = 0.0, sst = 0.0;
        for (std::size_t i = 0; i < y_true.size(); ++i)
        {
            sse += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
            sst += (y_true[i] - mean) * (y_true[i] - mean);
        }
        if (!(sst > 0.0))
            throw DomainError("r2 is undefined for zero-variance ground truth");
        return 1.0 - sse / sst;
    }

    const std::vector<EvalRow> &published_reference_rows()
    {
        static const std::vector<EvalRow> rows = {{"DT", 4.800, 6.066, 0.959},  {"SVR", 7.547, 11.271, 0.860},
                                                  {"KNN", 8.054, 12.509, 0.828}, {"XGB", 8.522, 11.774, 0.848},
                                                  {"GB", 10.390, 14.197, 0.779}, {"RF", 12.458, 16.461, 0.702}};
        return rows;
    }

    EvalRow evaluate_model(const TrainedModel &model, const Dataset &test)
    {
        if (test.empty())
            throw InvalidInputError("empty test set");
        const auto y = test.labels();
        std::vector<double> yhat;
        yhat.reserve(y.size());
        for (const auto &s : test.samples)
            yhat.push_back(model.predict(s.features));
        return {to_string(model.kind()), mae(y, yhat), rmse(y, yhat), r2(y, yhat)};
    }

    EvalReport evaluate_all(std::span<const TrainedModel> models, const Dataset &test, std::string timestamp)
    {
        if (models.empty())
            throw InvalidInputError("no models to evaluate");
        EvalReport report;
        report.meta = test.meta;
        report.n_test = test.size();
        report.timestamp = std::move(timestamp);
        for (const auto &m : models)
            report.rows.push_back(evaluate_model(m, test));
        std::stable_sort(report.rows.begin(), report.rows.end(),
                         [](const EvalRow &a, const EvalRow &b) { return a.mae_deg < b.mae_deg; });
        return report;
    }

    nlohmann::json report_to_json(const EvalReport &report)
    {
        auto rows = nlohmann::json::array();
        for (const auto &r : report.rows)
            rows.push_back({{"model", r.model}, {"mae_deg", r.mae_deg}, {"rmse_deg", r.rmse_deg}, {"r2", r.r2}});
        return {{"rows", rows},
                {"n_test", report.n_test},
                {"dataset", meta_to_json(report.meta)},
                {"timestamp", report.timestamp}};
    }

    std::string report_table(const EvalReport &report)
    {
        const std::vector<std::string> head = {"Model", "MAE(deg)", "RMSE", "R2"};
        std::vector<std::vector<std::string>> cells;
        for (const auto &r : report.rows)
            cells.push_back({r.model, fixed3(r.mae_deg), fixed3(r.rmse_deg), fixed3(r.r2)});
        std::vector<std::size_t> width(head.size());
        for (std::size_t c = 0; c < head.size(); ++c)
        {
            width[c] = head[c].size();
            for (const auto &row : cells)
                width[c] = std::max(width[c], row[c].size());
        }
        std::ostringstream os;
        auto emit = [&](const std::vector<std::string> &row)
        {
            for (std::size_t c = 0; c < row.size(); ++c)
            {
                if (c == 0)
                    os << row[c] << std::string(width[c] - row[c].size(), ' ');
                else
                    os << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
            }
            os << '\n';
        };
        emit(head);
        std::size_t total = width[0];
        for (std::size_t c = 1; c < width.size(); ++c)
            total += 2 + width[c];
        os << std::string(total, '-') << '\n';
        for (const auto &row : cells)
            emit(row);
        return os.str();
    }

    PatternComparison pattern_comparison(const RisConfig &cfg, double theta_true_deg,
                                         std::span<const TrainedModel> models, const SectorCodebook &codebook,
                                         const AngleGrid &grid)
    {
        if (!(theta_true_deg >= 0.0 && theta_true_deg <= 90.0))
            throw DomainError("theta_true out of [0,90]");
        PatternComparison cmp;
        cmp.theta_true_deg = theta_true_deg;
        const auto gt_profile = steering_phase_profile(cfg, theta_true_deg, cfg.phi_r_deg);
        cmp.ground_truth = radiation_pattern(cfg, gt_profile, grid.start_deg, grid.stop_deg, grid.step_deg);
        cmp.ground_truth.label = "GT";
        cmp.ground_truth_peak_deg = peak_angle(cmp.ground_truth);

        const auto features = probe_features(cfg, codebook, theta_true_deg, 0.0);
        for (const auto &m : models)
        {
            ModelPattern mp;
            mp.model = to_string(m.kind());
            mp.predicted_theta_deg = m.predict(features);
            const auto profile = steering_phase_profile(cfg, mp.predicted_theta_deg, cfg.phi_r_deg);
            mp.trace = radiation_pattern(cfg, profile, grid.start_deg, grid.stop_deg, grid.step_deg);
            mp.trace.label = mp.model;
            mp.peak_deg = peak_angle(mp.trace);
            mp.peak_delta_deg = mp.peak_deg - cmp.ground_truth_peak_deg;
            cmp.predictions.push_back(std::move(mp));
        }
        return cmp;
    }

    namespace
    {
        // File stems per prediction; repeated model names get a numeric suffix.
        std::vector<std::string> file_stems(const PatternComparison &cmp)
        {
            std::map<std::string, int> seen;
            std::vector<std::string> stems;
            for (const auto &p : cmp.predictions)
            {
                const std::string base = lower(p.model);
                const int k = seen[base]++;
                stems.push_back(k == 0 ? base : base + "_" + std::to_string(k));
            }
            return stems;
        }
    }

    nlohmann::json peaks_to_json(const PatternComparison &cmp)
    {
        const auto stems = file_stems(cmp);
        auto models = nlohmann::json::array();
        for (std::size_t i = 0; i < cmp.predictions.size(); ++i)
        {
            const auto &p = cmp.predictions[i];
            models.push_back({{"model", p.model},
                              {"predicted_theta_deg", p.predicted_theta_deg},
                              {"peak_deg", p.peak_deg},
                              {"peak_delta_deg", p.peak_delta_deg},
                              {"csv", stems[i] + ".csv"}});
        }
        return {{"theta_true_deg", cmp.theta_true_deg},
                {"ground_truth_peak_deg", cmp.ground_truth_peak_deg},
                {"ground_truth_csv", "ground_truth.csv"},
                {"models", models}};
    }

    void save_pattern_comparison(const PatternComparison &cmp, const std::filesystem::path &dir)
    {
        save_pattern_csv(cmp.ground_truth, dir / "ground_truth.csv");
        const auto stems = file_stems(cmp);
        for (std::size_t i = 0; i < cmp.predictions.size(); ++i)
            save_pattern_csv(cmp.predictions[i].trace, dir / (stems[i] + ".csv"));
        write_file_atomic(dir / "peaks.json", peaks_to_json(cmp).dump(2) + "\n");
    }
}
