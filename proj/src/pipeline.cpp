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

#include "rislocal/pipeline.hpp"
#include "rislocal/errors.hpp"
#include "rislocal/fileio.hpp"
#include "rislocal/seed.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <sstream>

namespace fs = std::filesystem;

namespace rislocal::pipeline
{
    namespace
    {
        int guarded(std::ostream &err, const std::function<void()> &body)
        {
            try
            {
                body();
                return exit_ok;
            }
            catch (const ModelError &e)
            {
                err << "error: " << e.what() << '\n';
                return exit_model;
            }
            catch (const IoError &e)
            {
                err << "error: " << e.what() << '\n';
                return exit_io;
            }
            catch (const fs::filesystem_error &e)
            {
                err << "error: " << e.what() << '\n';
                return exit_io;
            }
            catch (const ConfigError &e)
            {
                err << "config error: " << e.what() << '\n';
                return exit_config;
            }
            catch (const ParseError &e)
            {
                err << "parse error: " << e.what() << '\n';
                return exit_config;
            }
            catch (const std::invalid_argument &e)
            {
                err << "error: " << e.what() << '\n';
                return exit_config;
            }
            catch (const std::domain_error &e)
            {
                err << "error: " << e.what() << '\n';
                return exit_config;
            }
        }

        struct ResolvedConfig
        {
            RisConfig cfg;
            std::string source;
        };

        ResolvedConfig resolve_config(const std::optional<fs::path> &path)
        {
            if (!path)
                return {RisConfig{}, "defaults"};
            if (!fs::exists(*path))
                throw IoError("config file not found: " + path->string());
            return {load_config(*path), path->string()};
        }

        nlohmann::json file_entry(const fs::path &path, const fs::path &display)
        {
            return {{"path", display.generic_string()}, {"sha256", file_sha256(path)}};
        }

        nlohmann::json file_entry(const fs::path &path) { return file_entry(path, path); }

        nlohmann::json optional_path(const std::optional<fs::path> &p)
        {
            return p ? nlohmann::json(p->generic_string()) : nlohmann::json(nullptr);
        }

        std::string grid_string(const AngleGrid &g)
        {
            std::ostringstream os;
            os.precision(17);
            os << g.start_deg << ':' << g.stop_deg << ':' << g.step_deg;
            return os.str();
        }

        void write_manifest(const fs::path &path, nlohmann::json manifest)
        {
            manifest["manifest_version"] = 1;
            write_file_atomic(path, manifest.dump(2) + "\n");
        }

        std::vector<fs::path> model_files(const fs::path &dir)
        {
            if (!fs::is_directory(dir))
                throw ConfigError("models directory not found: " + dir.string());
            std::vector<fs::path> files;
            for (const auto &e : fs::directory_iterator(dir))
            {
                const auto name = e.path().filename().string();
                if (e.is_regular_file() && e.path().extension() == ".json" &&
                    name.find(".manifest.") == std::string::npos && name != "manifest.json")
                    files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
            if (files.empty())
                throw ConfigError("no model files (*.json) in " + dir.string());
            return files;
        }

        std::vector<TrainedModel> load_models(const std::vector<fs::path> &files)
        {
            std::vector<TrainedModel> models;
            for (const auto &f : files)
                models.push_back(load_model(f));
            return models;
        }

        void require_grid_in_range(const AngleGrid &g)
        {
            if (g.start_deg < 0.0 || g.stop_deg > 90.0)
                throw DomainError("grid must lie within [0,90]");
            grid_size(g.start_deg, g.stop_deg, g.step_deg);
        }

        std::string lower(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return s;
        }
    }

    AngleGrid parse_grid(const std::string &text)
    {
        AngleGrid g;
        double *fields[3] = {&g.start_deg, &g.stop_deg, &g.step_deg};
        std::size_t start = 0;
        for (int i = 0; i < 3; ++i)
        {
            const auto colon = text.find(':', start);
            if ((i < 2) == (colon == std::string::npos))
                throw ConfigError("grid must be start:stop:step, got '" + text + "'");
            const auto part = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
            try
            {
                std::size_t used = 0;
                *fields[i] = std::stod(part, &used);
                if (used != part.size())
                    throw std::invalid_argument(part);
            }
            catch (const std::exception &)
            {
                throw ConfigError("grid must be start:stop:step, got '" + text + "'");
            }
            start = colon + 1;
        }
        return g;
    }

    std::uint64_t stage_seed(std::uint64_t seed, const std::string &stage) { return derive_seed(seed, std::string_view(stage)); }

    std::string report_timestamp()
    {
        std::time_t t = 0;
        if (const char *env = std::getenv("SOURCE_DATE_EPOCH"))
        {
            try
            {
                t = static_cast<std::time_t>(std::stoll(env));
            }
            catch (const std::exception &)
            {
                t = 0;
            }
        }
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::string sha256_hex(const std::string &bytes)
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
            throw IoError("sha256 failed");
        std::string hex;
        char buf[3];
        for (unsigned int i = 0; i < len; ++i)
        {
            std::snprintf(buf, sizeof(buf), "%02x", md[i]);
            hex += buf;
        }
        return hex;
    }

    std::string file_sha256(const fs::path &path) { return sha256_hex(read_file(path)); }

    fs::path manifest_path_for(const fs::path &out)
    {
        fs::path p = out;
        p += ".manifest.json";
        return p;
    }

    int run_pattern(const PatternOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           if (!(opt.steer_deg >= 0.0 && opt.steer_deg <= 90.0))
                               throw DomainError("steer out of [0,90]");
                           require_grid_in_range(opt.grid);
                           const auto rc = resolve_config(opt.config);
                           const auto profile = steering_phase_profile(rc.cfg, opt.steer_deg, rc.cfg.phi_r_deg);
                           auto trace = radiation_pattern(rc.cfg, profile, opt.grid.start_deg, opt.grid.stop_deg,
                                                          opt.grid.step_deg);
                           save_pattern_csv(trace, opt.out);
                           write_manifest(manifest_path_for(opt.out),
                                          {{"command", "pattern"},
                                           {"args",
                                            {{"config", optional_path(opt.config)},
                                             {"steer_deg", opt.steer_deg},
                                             {"grid", grid_string(opt.grid)},
                                             {"out", opt.out.generic_string()}}},
                                           {"config_source", rc.source},
                                           {"config", config_to_json(rc.cfg)},
                                           {"seeds", nlohmann::json::object()},
                                           {"inputs", nlohmann::json::array()},
                                           {"outputs", {file_entry(opt.out)}}});
                           err << "wrote " << opt.out.string() << " (" << trace.angles_deg.size()
                               << " points, peak " << peak_angle(trace) << " deg)\n";
                       });
    }

    int run_gen_data(const GenDataOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           const auto rc = resolve_config(opt.config);
                           const auto codebook = build_sector_codebook(rc.cfg, opt.sectors);
                           const auto seed = stage_seed(opt.seed, "gen-data");
                           const auto ds = generate_dataset(rc.cfg, codebook, opt.step_deg, opt.repeats, opt.sigma_db, seed);
                           save_csv(ds, opt.out);
                           save_meta(ds.meta, opt.out);
                           const auto meta_path = meta_sidecar_path(opt.out);
                           write_manifest(manifest_path_for(opt.out),
                                          {{"command", "gen-data"},
                                           {"args",
                                            {{"config", optional_path(opt.config)},
                                             {"step_deg", opt.step_deg},
                                             {"repeats", opt.repeats},
                                             {"sigma_db", opt.sigma_db},
                                             {"seed", opt.seed},
                                             {"sectors", opt.sectors},
                                             {"out", opt.out.generic_string()}}},
                                           {"config_source", rc.source},
                                           {"config", config_to_json(rc.cfg)},
                                           {"codebook", codebook_to_json(codebook)},
                                           {"seeds", {{"master", opt.seed}, {"gen-data", seed}}},
                                           {"inputs", nlohmann::json::array()},
                                           {"outputs", {file_entry(opt.out), file_entry(meta_path)}}});
                           err << "wrote " << opt.out.string() << " (" << ds.size() << " samples)\n";
                       });
    }

    int run_split(const SplitOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           const auto ds = load_csv(opt.data, 0);
                           const auto seed = stage_seed(opt.seed, "split");
                           const auto [train, test] = split(ds, opt.test_fraction, seed);
                           save_csv(train, opt.train_out);
                           save_meta(train.meta, opt.train_out);
                           save_csv(test, opt.test_out);
                           save_meta(test.meta, opt.test_out);
                           write_manifest(manifest_path_for(opt.train_out),
                                          {{"command", "split"},
                                           {"args",
                                            {{"data", opt.data.generic_string()},
                                             {"test_fraction", opt.test_fraction},
                                             {"seed", opt.seed},
                                             {"train_out", opt.train_out.generic_string()},
                                             {"test_out", opt.test_out.generic_string()}}},
                                           {"seeds", {{"master", opt.seed}, {"split", seed}}},
                                           {"inputs", {file_entry(opt.data)}},
                                           {"outputs", {file_entry(opt.train_out), file_entry(opt.test_out)}}});
                           err << "split " << ds.size() << " samples into " << train.size() << " train / "
                               << test.size() << " test\n";
                       });
    }

    int run_train(const TrainOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           const ModelKind kind = parse_model_kind(opt.model);
                           nlohmann::json params;
                           try
                           {
                               params = nlohmann::json::parse(opt.params_json.empty() ? "{}" : opt.params_json);
                           }
                           catch (const nlohmann::json::parse_error &e)
                           {
                               throw ModelError(std::string("--params is not valid JSON: ") + e.what());
                           }
                           const auto seed = stage_seed(opt.seed, "train:" + to_string(kind));
                           const auto spec = spec_from_json(kind, params, seed);
                           const auto train = load_csv(opt.data, 0);
                           const auto model = fit(train, spec);
                           save_model(model, opt.out);
                           write_manifest(manifest_path_for(opt.out),
                                          {{"command", "train"},
                                           {"args",
                                            {{"data", opt.data.generic_string()},
                                             {"model", to_string(kind)},
                                             {"params", opt.params_json},
                                             {"seed", opt.seed},
                                             {"out", opt.out.generic_string()}}},
                                           {"seeds", {{"master", opt.seed}, {"train:" + to_string(kind), seed}}},
                                           {"inputs", {file_entry(opt.data)}},
                                           {"outputs", {file_entry(opt.out)}}});
                           err << "trained " << to_string(kind) << " on " << train.size() << " samples -> "
                               << opt.out.string() << '\n';
                       });
    }

    int run_eval(const EvalOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           const auto files = model_files(opt.models_dir);
                           const auto models = load_models(files);
                           const auto test = load_csv(opt.data, 0);
                           const auto report = evaluate_all(models, test, report_timestamp());
                           fs::path table_path = opt.out;
                           table_path.replace_extension(".txt");
                           write_file_atomic(opt.out, report_to_json(report).dump(2) + "\n");
                           const auto table = report_table(report);
                           write_file_atomic(table_path, table);

                           nlohmann::json inputs = nlohmann::json::array({file_entry(opt.data)});
                           for (const auto &f : files)
                               inputs.push_back(file_entry(f));
                           write_manifest(manifest_path_for(opt.out),
                                          {{"command", "eval"},
                                           {"args",
                                            {{"data", opt.data.generic_string()},
                                             {"models", opt.models_dir.generic_string()},
                                             {"out", opt.out.generic_string()}}},
                                           {"seeds", nlohmann::json::object()},
                                           {"inputs", inputs},
                                           {"outputs", {file_entry(opt.out), file_entry(table_path)}}});
                           err << table;
                       });
    }

    int run_compare(const CompareOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           if (!(opt.theta_deg >= 0.0 && opt.theta_deg <= 90.0))
                               throw DomainError("theta out of [0,90]");
                           require_grid_in_range(opt.grid);
                           const auto rc = resolve_config(opt.config);
                           const auto files = model_files(opt.models_dir);
                           const auto models = load_models(files);
                           const auto codebook = build_sector_codebook(rc.cfg, models.front().n_features());
                           const auto cmp = pattern_comparison(rc.cfg, opt.theta_deg, models, codebook, opt.grid);
                           save_pattern_comparison(cmp, opt.out_dir);

                           nlohmann::json inputs = nlohmann::json::array();
                           for (const auto &f : files)
                               inputs.push_back(file_entry(f));
                           nlohmann::json outputs = nlohmann::json::array();
                           outputs.push_back(file_entry(opt.out_dir / "ground_truth.csv"));
                           for (const auto &m : peaks_to_json(cmp).at("models"))
                               outputs.push_back(file_entry(opt.out_dir / m.at("csv").get<std::string>()));
                           outputs.push_back(file_entry(opt.out_dir / "peaks.json"));
                           write_manifest(opt.out_dir / "manifest.json",
                                          {{"command", "compare"},
                                           {"args",
                                            {{"config", optional_path(opt.config)},
                                             {"theta_deg", opt.theta_deg},
                                             {"models", opt.models_dir.generic_string()},
                                             {"out", opt.out_dir.generic_string()},
                                             {"grid", grid_string(opt.grid)}}},
                                           {"config_source", rc.source},
                                           {"config", config_to_json(rc.cfg)},
                                           {"seeds", nlohmann::json::object()},
                                           {"inputs", inputs},
                                           {"outputs", outputs}});
                           err << "ground truth peak " << cmp.ground_truth_peak_deg << " deg\n";
                           for (const auto &p : cmp.predictions)
                               err << "  " << p.model << ": predicted " << p.predicted_theta_deg << " deg, peak "
                                   << p.peak_deg << " deg (delta " << p.peak_delta_deg << ")\n";
                       });
    }

    int run_repro(const ReproOptions &opt, std::ostream &err)
    {
        return guarded(err, [&]
                       {
                           const fs::path wd = opt.workdir;
                           fs::create_directories(wd);
                           const RisConfig cfg;
                           write_file_atomic(wd / "config.json", config_to_json(cfg).dump(2) + "\n");

                           const auto codebook = build_sector_codebook(cfg, 4);
                           const GenDataOptions gd;
                           const auto data_seed = stage_seed(opt.seed, "gen-data");
                           const auto ds = generate_dataset(cfg, codebook, gd.step_deg, gd.repeats, gd.sigma_db, data_seed);
                           save_csv(ds, wd / "dataset.csv");
                           save_meta(ds.meta, wd / "dataset.csv");

                           const auto split_seed = stage_seed(opt.seed, "split");
                           const auto [train, test] = split(ds, SplitOptions{}.test_fraction, split_seed);
                           save_csv(train, wd / "train.csv");
                           save_meta(train.meta, wd / "train.csv");
                           save_csv(test, wd / "test.csv");
                           save_meta(test.meta, wd / "test.csv");

                           nlohmann::json seeds = {{"master", opt.seed}, {"gen-data", data_seed}, {"split", split_seed}};
                           std::vector<TrainedModel> models;
                           std::vector<fs::path> outputs = {"config.json", "dataset.csv", "dataset.meta.json",
                                                            "train.csv", "train.meta.json", "test.csv", "test.meta.json"};
                           for (auto kind : all_model_kinds)
                           {
                               const std::string stage = "train:" + to_string(kind);
                               const auto seed = stage_seed(opt.seed, stage);
                               seeds[stage] = seed;
                               models.push_back(fit(train, RegressorSpec::defaults(kind, seed)));
                               const fs::path rel = fs::path("models") / (lower(to_string(kind)) + ".json");
                               save_model(models.back(), wd / rel);
                               outputs.push_back(rel);
                           }

                           const auto report = evaluate_all(models, test, report_timestamp());
                           write_file_atomic(wd / "report.json", report_to_json(report).dump(2) + "\n");
                           write_file_atomic(wd / "report.txt", report_table(report));
                           outputs.insert(outputs.end(), {"report.json", "report.txt"});

                           const CompareOptions co;
                           const auto cmp = pattern_comparison(cfg, co.theta_deg, models, codebook, co.grid);
                           save_pattern_comparison(cmp, wd / "compare");
                           outputs.push_back(fs::path("compare") / "ground_truth.csv");
                           for (const auto &m : peaks_to_json(cmp).at("models"))
                               outputs.push_back(fs::path("compare") / m.at("csv").get<std::string>());
                           outputs.push_back(fs::path("compare") / "peaks.json");

                           nlohmann::json out_entries = nlohmann::json::array();
                           for (const auto &rel : outputs)
                               out_entries.push_back(file_entry(wd / rel, rel));
                           write_manifest(wd / "manifest.json",
                                          {{"command", "repro"},
                                           {"args", {{"workdir", opt.workdir.generic_string()}, {"seed", opt.seed}}},
                                           {"config_source", "defaults"},
                                           {"config", config_to_json(cfg)},
                                           {"codebook", codebook_to_json(codebook)},
                                           {"seeds", seeds},
                                           {"inputs", nlohmann::json::array()},
                                           {"outputs", out_entries}});
                           err << report_table(report);
                           err << "ground truth peak " << cmp.ground_truth_peak_deg << " deg at theta "
                               << co.theta_deg << " deg\n";
                           for (const auto &p : cmp.predictions)
                               err << "  " << p.model << ": peak " << p.peak_deg << " deg (delta " << p.peak_delta_deg
                                   << ")\n";
                       });
    }

    int run_replay(const fs::path &manifest_path, std::ostream &err)
    {
        nlohmann::json m;
        const int rc = guarded(err, [&] { m = nlohmann::json::parse(read_file(manifest_path)); });
        if (rc != exit_ok)
            return rc;
        try
        {
            const auto cmd = m.at("command").get<std::string>();
            const auto &a = m.at("args");
            auto opt_path = [&](const char *key) -> std::optional<fs::path>
            {
                if (!a.contains(key) || a.at(key).is_null())
                    return std::nullopt;
                return fs::path(a.at(key).get<std::string>());
            };
            if (cmd == "pattern")
                return run_pattern({opt_path("config"), a.at("steer_deg").get<double>(),
                                    parse_grid(a.at("grid").get<std::string>()), a.at("out").get<std::string>()},
                                   err);
            if (cmd == "gen-data")
                return run_gen_data({opt_path("config"), a.at("step_deg").get<double>(), a.at("repeats").get<std::size_t>(),
                                     a.at("sigma_db").get<double>(), a.at("seed").get<std::uint64_t>(),
                                     a.at("sectors").get<std::size_t>(), a.at("out").get<std::string>()},
                                    err);
            if (cmd == "split")
                return run_split({a.at("data").get<std::string>(), a.at("test_fraction").get<double>(),
                                  a.at("seed").get<std::uint64_t>(), a.at("train_out").get<std::string>(),
                                  a.at("test_out").get<std::string>()},
                                 err);
            if (cmd == "train")
                return run_train({a.at("data").get<std::string>(), a.at("model").get<std::string>(),
                                  a.at("params").get<std::string>(), a.at("seed").get<std::uint64_t>(),
                                  a.at("out").get<std::string>()},
                                 err);
            if (cmd == "eval")
                return run_eval({a.at("data").get<std::string>(), a.at("models").get<std::string>(),
                                 a.at("out").get<std::string>()},
                                err);
            if (cmd == "compare")
                return run_compare({opt_path("config"), a.at("theta_deg").get<double>(), a.at("models").get<std::string>(),
                                    a.at("out").get<std::string>(), parse_grid(a.at("grid").get<std::string>())},
                                   err);
            if (cmd == "repro")
                return run_repro({a.at("workdir").get<std::string>(), a.at("seed").get<std::uint64_t>()}, err);
            err << "error: unknown command '" << cmd << "' in manifest\n";
            return exit_config;
        }
        catch (const nlohmann::json::exception &e)
        {
            err << "error: malformed manifest: " << e.what() << '\n';
            return exit_config;
        }
        catch (const ConfigError &e)
        {
            err << "error: " << e.what() << '\n';
            return exit_config;
        }
    }
}
