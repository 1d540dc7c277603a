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

#include "rislocal/dataset.hpp"
#include "rislocal/errors.hpp"
#include "rislocal/fileio.hpp"
#include "rislocal/seed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace rislocal
{
    nlohmann::json meta_to_json(const DatasetMeta &meta)
    {
        return nlohmann::json{{"step_deg", meta.step_deg},
                              {"repeats", meta.repeats},
                              {"noise_sigma_db", meta.noise_sigma_db},
                              {"seed", meta.seed},
                              {"steer_angles_deg", meta.steer_angles_deg}};
    }

    DatasetMeta meta_from_json(const nlohmann::json &j)
    {
        DatasetMeta m;
        try
        {
            m.step_deg = j.at("step_deg").get<double>();
            m.repeats = j.at("repeats").get<std::size_t>();
            m.noise_sigma_db = j.at("noise_sigma_db").get<double>();
            m.seed = j.at("seed").get<std::uint64_t>();
            m.steer_angles_deg = j.at("steer_angles_deg").get<std::vector<double>>();
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError(std::string("malformed dataset metadata: ") + e.what());
        }
        return m;
    }

    std::vector<double> Dataset::labels() const
    {
        std::vector<double> y;
        y.reserve(samples.size());
        for (const auto &s : samples)
            y.push_back(s.theta_deg);
        return y;
    }

    Dataset generate_dataset(const RisConfig &cfg, const SectorCodebook &codebook, double step_deg,
                             std::size_t repeats_per_angle, double noise_sigma_db, std::uint64_t seed)
    {
        if (!(step_deg > 0.0) || !std::isfinite(step_deg) || step_deg > 90.0)
            throw DomainError("dataset grid step must lie in (0, 90]");
        if (repeats_per_angle < 1)
            throw DomainError("repeats_per_angle must be >= 1");
        if (codebook.size() == 0)
            throw DomainError("empty codebook");

        const std::size_t n_angles = grid_size(0.0, 90.0, step_deg);
        Dataset ds;
        ds.meta = {step_deg, repeats_per_angle, noise_sigma_db, seed, codebook.steer_angles_deg()};
        ds.samples.reserve(n_angles * repeats_per_angle);
        for (std::size_t i = 0; i < n_angles; ++i)
        {
            const double theta = std::min(static_cast<double>(i) * step_deg, 90.0);
            for (std::size_t r = 0; r < repeats_per_angle; ++r)
            {
                auto fv = probe_features(cfg, codebook, theta, noise_sigma_db, derive_seed(seed, i, r));
                ds.samples.push_back({std::move(fv), theta});
            }
        }
        return ds;
    }

    std::pair<Dataset, Dataset> split(const Dataset &ds, double test_fraction, std::uint64_t seed)
    {
        if (!(test_fraction > 0.0 && test_fraction < 1.0))
            throw DomainError("test_fraction must lie in (0, 1)");
        const std::size_t n = ds.size();
        if (n < 2)
            throw DomainError("split needs at least 2 samples");

        std::size_t n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
        n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::mt19937_64 rng(seed);
        std::shuffle(idx.begin(), idx.end(), rng);

        Dataset train, test;
        train.meta = test.meta = ds.meta;
        train.samples.reserve(n - n_test);
        test.samples.reserve(n_test);
        for (std::size_t k = 0; k < n; ++k)
            (k < n - n_test ? train : test).samples.push_back(ds.samples[idx[k]]);
        return {std::move(train), std::move(test)};
    }

    std::string csv_header(std::size_t n_sectors)
    {
        std::string h;
        for (std::size_t i = 0; i < n_sectors; ++i)
            h += "p_s" + std::to_string(i) + "_dbm,";
        return h + "theta_deg";
    }

    void write_csv(const Dataset &ds, std::ostream &os)
    {
        const std::size_t d = ds.empty() ? ds.meta.steer_angles_deg.size() : ds.n_features();
        os << csv_header(d) << '\n';
        for (const auto &s : ds.samples)
        {
            for (double p : s.features.powers_dbm)
                os << fixed6(p) << ',';
            os << fixed6(s.theta_deg) << '\n';
        }
    }

    void save_csv(const Dataset &ds, const std::filesystem::path &path)
    {
        std::ostringstream ss;
        write_csv(ds, ss);
        write_file_atomic(path, ss.str());
    }

    namespace
    {
        double parse_cell(std::string_view cell, std::size_t line)
        {
            while (!cell.empty() && cell.front() == ' ')
                cell.remove_prefix(1);
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r'))
                cell.remove_suffix(1);
            if (!cell.empty() && cell.front() == '+')
                cell.remove_prefix(1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
                throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
            return v;
        }
    }

    Dataset parse_csv(std::istream &is, std::size_t expected_sectors)
    {
        std::string line;
        if (!std::getline(is, line))
            throw ParseError("missing header", 1);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (expected_sectors == 0)
        {
            const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
            if (columns < 2)
                throw ParseError("header has no feature columns", 1);
            expected_sectors = columns - 1;
        }
        if (line != csv_header(expected_sectors))
            throw ParseError("header mismatch: expected '" + csv_header(expected_sectors) + "'", 1);

        Dataset ds;
        std::size_t lineno = 1;
        while (std::getline(is, line))
        {
            ++lineno;
            if (line.empty() || line == "\r")
                continue;
            std::vector<double> cells;
            std::size_t start = 0;
            while (true)
            {
                const auto comma = line.find(',', start);
                const auto end = comma == std::string::npos ? line.size() : comma;
                cells.push_back(parse_cell(std::string_view(line).substr(start, end - start), lineno));
                if (comma == std::string::npos)
                    break;
                start = comma + 1;
            }
            if (cells.size() != expected_sectors + 1)
                throw ParseError("expected " + std::to_string(expected_sectors + 1) + " columns, found " +
                                     std::to_string(cells.size()),
                                 lineno);
            const double theta = cells.back();
            if (theta < 0.0 || theta > 90.0)
                throw ParseError("theta_deg outside [0, 90]", lineno);
            cells.pop_back();
            ds.samples.push_back({FeatureVector{std::move(cells)}, theta});
        }
        if (ds.empty())
            throw ParseError("no samples", lineno);
        return ds;
    }

    std::filesystem::path meta_sidecar_path(const std::filesystem::path &csv_path)
    {
        auto p = csv_path;
        p.replace_extension(".meta.json");
        return p;
    }

    void save_meta(const DatasetMeta &meta, const std::filesystem::path &csv_path)
    {
        write_file_atomic(meta_sidecar_path(csv_path), meta_to_json(meta).dump(2) + "\n");
    }

    Dataset load_csv(const std::filesystem::path &path, std::size_t expected_sectors)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open " + path.string());
        Dataset ds = parse_csv(in, expected_sectors);
        const auto sidecar = meta_sidecar_path(path);
        if (std::filesystem::exists(sidecar))
        {
            try
            {
                ds.meta = meta_from_json(nlohmann::json::parse(read_file(sidecar)));
            }
            catch (const nlohmann::json::parse_error &e)
            {
                throw ConfigError(sidecar.string() + ": " + e.what());
            }
        }
        return ds;
    }
}
