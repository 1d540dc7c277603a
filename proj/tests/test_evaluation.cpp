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

#include <catch_amalgamated.hpp>

#include "rislocal/errors.hpp"
#include "rislocal/evaluation.hpp"

#include <cmath>
#include <random>

using namespace rislocal;

TEST_CASE("metric values")
{
    const std::vector<double> a = {1.0, 2.0, 3.0};
    CHECK(mae(a, a) == 0.0);
    CHECK(rmse(a, a) == 0.0);
    CHECK(r2(a, a) == 1.0);

    const std::vector<double> zero = {0.0}, three = {3.0};
    CHECK(mae(zero, three) == 3.0);
    CHECK(rmse(zero, three) == 3.0);

    const std::vector<double> t = {0.0, 0.0}, p = {3.0, 4.0};
    CHECK(mae(t, p) == 3.5);
    CHECK(rmse(t, p) == Catch::Approx(std::sqrt(12.5)).epsilon(1e-15));

    // Predicting the mean gives exactly zero.
    const std::vector<double> y = {10.0, 20.0, 30.0, 40.0}, mean(4, 25.0);
    CHECK(r2(y, mean) == Catch::Approx(0.0).margin(1e-15));
    // Worse than the mean goes negative.
    const std::vector<double> rev = {40.0, 30.0, 20.0, 10.0};
    CHECK(r2(y, rev) == Catch::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("metric input errors")
{
    const std::vector<double> empty, one = {1.0}, two = {1.0, 2.0};
    CHECK_THROWS_AS(mae(empty, empty), InvalidInputError);
    CHECK_THROWS_AS(rmse(one, two), InvalidInputError);
    CHECK_THROWS_AS(r2(one, one), InvalidInputError);
    const std::vector<double> flat = {5.0, 5.0, 5.0}, pred = {4.0, 5.0, 6.0};
    CHECK_THROWS_AS(r2(flat, pred), DomainError);
}

TEST_CASE("metric identities on random data")
{
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.0, 90.0), shift(-50.0, 50.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<double> t(50), p(50);
        for (std::size_t i = 0; i < 50; ++i)
        {
            t[i] = u(rng);
            p[i] = u(rng);
        }
        CHECK(mae(t, p) <= rmse(t, p) + 1e-12);
        CHECK(rmse(t, p) <= std::sqrt(50.0) * mae(t, p) + 1e-12);
        const double s = shift(rng);
        std::vector<double> ts = t, ps = p;
        for (std::size_t i = 0; i < 50; ++i)
        {
            ts[i] += s;
            ps[i] += s;
        }
        CHECK(r2(ts, ps) == Catch::Approx(r2(t, p)).margin(1e-12));
        CHECK(mae(ts, ps) == Catch::Approx(mae(t, p)).margin(1e-12));
    }
}

namespace
{
    struct Fixture
    {
        RisConfig cfg;
        SectorCodebook cb = build_sector_codebook(cfg);
        Dataset clean = generate_dataset(cfg, cb, 0.5, 1, 0.0, 1);
    };
}

TEST_CASE("evaluate_all ranks by MAE")
{
    Fixture f;
    std::vector<TrainedModel> models;
    models.push_back(fit(f.clean, RegressorSpec{CartParams{1, 2}, 1}));
    models.push_back(fit(f.clean, RegressorSpec{KnnParams{1}, 1}));
    models.push_back(fit(f.clean, RegressorSpec{CartParams{3, 2}, 1}));
    const auto report = evaluate_all(models, f.clean, "1970-01-01T00:00:00Z");
    REQUIRE(report.rows.size() == 3);
    CHECK(report.n_test == f.clean.size());
    CHECK(report.rows[0].model == "KNN");
    CHECK(report.rows[0].mae_deg == 0.0);
    CHECK(report.rows[0].rmse_deg == 0.0);
    CHECK(report.rows[0].r2 == 1.0);
    for (std::size_t i = 1; i < 3; ++i)
        CHECK(report.rows[i - 1].mae_deg <= report.rows[i].mae_deg);
    // Depth 3 beats a stump on its own training data.
    CHECK(report.rows[1].mae_deg < report.rows[2].mae_deg);

    const auto j = report_to_json(report);
    CHECK(j["timestamp"] == "1970-01-01T00:00:00Z");
    CHECK(j["rows"].size() == 3);

    const auto table = report_table(report);
    CHECK(table.rfind("Model  MAE(deg)", 0) == 0);
    const auto knn_line = table.substr(table.find("\nKNN") + 1, table.find('\n', table.find("\nKNN") + 1) - table.find("\nKNN") - 1);
    CHECK(knn_line.find("0.000") != std::string::npos);
    CHECK(knn_line.ends_with("1.000"));
}

TEST_CASE("reference rows")
{
    const auto &ref = published_reference_rows();
    REQUIRE(ref.size() == 6);
    CHECK(ref.front().model == "DT");
    CHECK(ref.front().mae_deg == 4.800);
}

TEST_CASE("pattern comparison")
{
    Fixture f;
    std::vector<TrainedModel> models;
    models.push_back(fit(f.clean, RegressorSpec{KnnParams{1}, 1}));

    auto labels_90 = f.clean;
    for (auto &s : labels_90.samples)
        s.theta_deg = 90.0;
    models.push_back(fit(labels_90, RegressorSpec{CartParams{}, 1}));

    const auto cmp = pattern_comparison(f.cfg, 52.0, models, f.cb);
    CHECK(cmp.ground_truth.angles_deg.size() == 361);
    CHECK(cmp.ground_truth_peak_deg == Catch::Approx(52.0).margin(0.25));
    REQUIRE(cmp.predictions.size() == 2);

    const auto &exact = cmp.predictions[0];
    CHECK(exact.predicted_theta_deg == 52.0);
    CHECK(exact.peak_delta_deg == 0.0);
    CHECK(exact.trace.power_dbm == cmp.ground_truth.power_dbm);

    const auto &far = cmp.predictions[1];
    CHECK(far.predicted_theta_deg == 90.0);
    CHECK(far.peak_delta_deg == Catch::Approx(38.0).margin(1.0));

    const auto j = peaks_to_json(cmp);
    CHECK(j["models"].size() == 2);

    CHECK_THROWS_AS(pattern_comparison(f.cfg, 95.0, models, f.cb), DomainError);
}
