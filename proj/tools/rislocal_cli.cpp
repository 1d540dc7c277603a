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

// Command-line front end: one binary, one subcommand per pipeline stage.

#include "rislocal/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace pl = rislocal::pipeline;

int main(int argc, char **argv)
{
    CLI::App app{"RIS sector probing, dataset generation and angle regression"};
    app.require_subcommand(1);

    pl::PatternOptions pattern;
    std::string pattern_config, pattern_grid = "0:90:0.5";
    auto *cmd_pattern = app.add_subcommand("pattern", "Trace the received-power pattern of a steered beam");
    cmd_pattern->add_option("config", pattern_config, "RIS config JSON (defaults when omitted)");
    cmd_pattern->add_option("--steer", pattern.steer_deg, "Steer angle in degrees")->required();
    cmd_pattern->add_option("--grid", pattern_grid, "start:stop:step in degrees");
    cmd_pattern->add_option("--out", pattern.out, "Output CSV")->required();

    pl::GenDataOptions gen;
    std::string gen_config;
    auto *cmd_gen = app.add_subcommand("gen-data", "Generate a labeled received-power dataset");
    cmd_gen->add_option("config", gen_config, "RIS config JSON (defaults when omitted)");
    cmd_gen->add_option("--step", gen.step_deg, "Angle grid step in degrees");
    cmd_gen->add_option("--repeats", gen.repeats, "Samples per grid angle");
    cmd_gen->add_option("--sigma", gen.sigma_db, "Measurement noise std-dev in dB");
    cmd_gen->add_option("--seed", gen.seed, "Master seed");
    cmd_gen->add_option("--sectors", gen.sectors, "Number of probing sectors");
    cmd_gen->add_option("--out", gen.out, "Output CSV")->required();

    pl::SplitOptions sp;
    auto *cmd_split = app.add_subcommand("split", "Shuffle and split a dataset into train/test");
    cmd_split->add_option("--data", sp.data, "Dataset CSV")->required();
    cmd_split->add_option("--test-fraction", sp.test_fraction, "Fraction held out for testing");
    cmd_split->add_option("--seed", sp.seed, "Master seed");
    cmd_split->add_option("--train-out", sp.train_out, "Train CSV")->required();
    cmd_split->add_option("--test-out", sp.test_out, "Test CSV")->required();

    pl::TrainOptions train;
    auto *cmd_train = app.add_subcommand("train", "Fit one regressor");
    cmd_train->add_option("--data", train.data, "Training CSV")->required();
    cmd_train->add_option("--model", train.model, "DT, SVR, KNN, XGB, GB or RF")->required();
    cmd_train->add_option("--params", train.params_json, "Hyperparameters as a JSON object");
    cmd_train->add_option("--seed", train.seed, "Master seed");
    cmd_train->add_option("--out", train.out, "Model JSON")->required();

    pl::EvalOptions ev;
    auto *cmd_eval = app.add_subcommand("eval", "Score every model in a directory on a test set");
    cmd_eval->add_option("--data", ev.data, "Test CSV")->required();
    cmd_eval->add_option("--models", ev.models_dir, "Directory of model JSON files")->required();
    cmd_eval->add_option("--out", ev.out, "Report JSON (a .txt table is written beside it)")->required();

    pl::CompareOptions cmp;
    std::string cmp_config, cmp_grid = "0:90:0.25";
    auto *cmd_cmp = app.add_subcommand("compare", "Re-steer each model's prediction and compare patterns");
    cmd_cmp->add_option("config", cmp_config, "RIS config JSON (defaults when omitted)");
    cmd_cmp->add_option("--theta", cmp.theta_deg, "Ground-truth user angle in degrees");
    cmd_cmp->add_option("--models", cmp.models_dir, "Directory of model JSON files")->required();
    cmd_cmp->add_option("--grid", cmp_grid, "start:stop:step in degrees");
    cmd_cmp->add_option("--out", cmp.out_dir, "Output directory")->required();

    pl::ReproOptions repro;
    auto *cmd_repro = app.add_subcommand("repro", "Run the whole pipeline with fixed seeds");
    cmd_repro->add_option("--workdir", repro.workdir, "Output directory")->required();
    cmd_repro->add_option("--seed", repro.seed, "Master seed");

    std::string manifest;
    auto *cmd_replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    cmd_replay->add_option("manifest", manifest, "Manifest JSON")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : pl::exit_config;
    }

    auto config_opt = [](const std::string &s) -> std::optional<std::filesystem::path>
    {
        if (s.empty())
            return std::nullopt;
        return std::filesystem::path(s);
    };

    try
    {
        if (*cmd_pattern)
        {
            pattern.config = config_opt(pattern_config);
            pattern.grid = pl::parse_grid(pattern_grid);
            return pl::run_pattern(pattern, std::cerr);
        }
        if (*cmd_gen)
        {
            gen.config = config_opt(gen_config);
            return pl::run_gen_data(gen, std::cerr);
        }
        if (*cmd_split)
            return pl::run_split(sp, std::cerr);
        if (*cmd_train)
            return pl::run_train(train, std::cerr);
        if (*cmd_eval)
            return pl::run_eval(ev, std::cerr);
        if (*cmd_cmp)
        {
            cmp.config = config_opt(cmp_config);
            cmp.grid = pl::parse_grid(cmp_grid);
            return pl::run_compare(cmp, std::cerr);
        }
        if (*cmd_repro)
            return pl::run_repro(repro, std::cerr);
        if (*cmd_replay)
            return pl::run_replay(manifest, std::cerr);
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return pl::exit_config;
    }
    return pl::exit_config;
}
