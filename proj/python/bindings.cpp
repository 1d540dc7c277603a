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

// Python bindings: configs, physics, probing, datasets, regressors, metrics and the repro pipeline.

#include "rislocal/errors.hpp"
#include "rislocal/evaluation.hpp"
#include "rislocal/pipeline.hpp"

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace rislocal;

namespace
{
    std::vector<std::vector<double>> feature_rows(const Dataset &ds)
    {
        std::vector<std::vector<double>> out;
        out.reserve(ds.size());
        for (const auto &s : ds.samples)
            out.push_back(s.features.powers_dbm);
        return out;
    }

    Dataset make_dataset(const std::vector<std::vector<double>> &features, const std::vector<double> &labels)
    {
        if (features.size() != labels.size())
            throw InvalidInputError("feature and label counts differ");
        Dataset ds;
        for (std::size_t i = 0; i < labels.size(); ++i)
            ds.samples.push_back({{features[i]}, labels[i]});
        return ds;
    }

    py::dict trace_dict(const PatternTrace &t)
    {
        py::dict d;
        d["angles_deg"] = t.angles_deg;
        d["power_dbm"] = t.power_dbm;
        d["label"] = t.label;
        return d;
    }

    void check_exit(int code, const std::ostringstream &err)
    {
        if (code != pipeline::exit_ok)
            throw std::runtime_error("exit " + std::to_string(code) + ": " + err.str());
    }
}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "RIS sector probing, dataset generation and angle regressors";

    py::enum_<PropagationMode>(m, "PropagationMode")
        .value("PlaneWave", PropagationMode::PlaneWave)
        .value("SphericalWave", PropagationMode::SphericalWave);

    py::class_<RisConfig>(m, "RisConfig")
        .def(py::init<>())
        .def_readwrite("m_rows", &RisConfig::m_rows)
        .def_readwrite("n_cols", &RisConfig::n_cols)
        .def_readwrite("d_x", &RisConfig::d_x)
        .def_readwrite("d_y", &RisConfig::d_y)
        .def_readwrite("freq_hz", &RisConfig::freq_hz)
        .def_readwrite("p_t_dbm", &RisConfig::p_t_dbm)
        .def_readwrite("g_t_dbi", &RisConfig::g_t_dbi)
        .def_readwrite("g_r_dbi", &RisConfig::g_r_dbi)
        .def_readwrite("gamma_amp", &RisConfig::gamma_amp)
        .def_readwrite("d1_m", &RisConfig::d1_m)
        .def_readwrite("d2_m", &RisConfig::d2_m)
        .def_readwrite("theta_t_deg", &RisConfig::theta_t_deg)
        .def_readwrite("phi_t_deg", &RisConfig::phi_t_deg)
        .def_readwrite("phi_r_deg", &RisConfig::phi_r_deg)
        .def_readwrite("propagation_mode", &RisConfig::propagation_mode)
        .def("validate", &RisConfig::validate)
        .def("to_json", [](const RisConfig &c) { return config_to_json(c).dump(); })
        .def_static("from_json", [](const std::string &text) { return config_from_json(nlohmann::json::parse(text)); })
        .def(py::self == py::self);

    py::class_<PhaseProfile>(m, "PhaseProfile")
        .def_property_readonly("rows", &PhaseProfile::rows)
        .def_property_readonly("cols", &PhaseProfile::cols)
        .def_property_readonly("phases", &PhaseProfile::phases)
        .def_property_readonly("steer_theta_deg", &PhaseProfile::steer_theta_deg)
        .def_property_readonly("steer_phi_deg", &PhaseProfile::steer_phi_deg);

    m.def("wavelength", &wavelength, py::arg("freq_hz"));
    m.def(
        "steering_phase_profile",
        [](const RisConfig &cfg, double theta, std::optional<double> phi)
        { return steering_phase_profile(cfg, theta, phi.value_or(cfg.phi_r_deg)); },
        py::arg("cfg"), py::arg("theta_s_deg"), py::arg("phi_s_deg") = py::none());
    m.def(
        "array_factor",
        [](const RisConfig &cfg, const PhaseProfile &p, double theta, std::optional<double> phi)
        { return array_factor(cfg, p, theta, phi.value_or(cfg.phi_r_deg)); },
        py::arg("cfg"), py::arg("profile"), py::arg("theta_r_deg"), py::arg("phi_r_deg") = py::none());
    m.def("received_power_dbm", &received_power_dbm, py::arg("cfg"), py::arg("profile"), py::arg("theta_r_deg"));
    m.def(
        "radiation_pattern",
        [](const RisConfig &cfg, const PhaseProfile &p, double start, double stop, double step)
        { return trace_dict(radiation_pattern(cfg, p, start, stop, step)); },
        py::arg("cfg"), py::arg("profile"), py::arg("start_deg") = 0.0, py::arg("stop_deg") = 90.0,
        py::arg("step_deg") = 0.5);
    m.def(
        "peak_angle",
        [](const std::vector<double> &angles, const std::vector<double> &power)
        { return peak_angle(PatternTrace{angles, power, {}}); },
        py::arg("angles_deg"), py::arg("power_dbm"));

    py::class_<SectorCodebook>(m, "SectorCodebook")
        .def("__len__", &SectorCodebook::size)
        .def_property_readonly("steer_angles_deg", &SectorCodebook::steer_angles_deg)
        .def_property_readonly("profiles", [](const SectorCodebook &c) { return c.profiles; })
        .def("sector_of", &SectorCodebook::sector_of, py::arg("theta_deg"));
    m.def("build_sector_codebook", &build_sector_codebook, py::arg("cfg"), py::arg("n_sectors") = 4,
          py::arg("span_lo_deg") = 0.0, py::arg("span_hi_deg") = 90.0);
    m.def(
        "probe_features",
        [](const RisConfig &cfg, const SectorCodebook &cb, double theta, double sigma, std::optional<std::uint64_t> seed)
        { return probe_features(cfg, cb, theta, sigma, seed).powers_dbm; },
        py::arg("cfg"), py::arg("codebook"), py::arg("theta_deg"), py::arg("sigma_db") = 0.0,
        py::arg("seed") = py::none());

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("features"), py::arg("labels"))
        .def("__len__", &Dataset::size)
        .def_property_readonly("n_features", &Dataset::n_features)
        .def_property_readonly("features", &feature_rows)
        .def_property_readonly("labels", &Dataset::labels)
        .def("save_csv", [](const Dataset &ds, const std::filesystem::path &p) { save_csv(ds, p); }, py::arg("path"));
    m.def("generate_dataset", &generate_dataset, py::arg("cfg"), py::arg("codebook"), py::arg("step_deg") = 0.5,
          py::arg("repeats") = 5, py::arg("sigma_db") = 1.0, py::arg("seed") = 42);
    m.def("split", &split, py::arg("dataset"), py::arg("test_fraction") = 0.2, py::arg("seed") = 42);
    m.def("load_csv", &load_csv, py::arg("path"), py::arg("expected_sectors") = 4);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("DT", ModelKind::DT)
        .value("SVR", ModelKind::SVR)
        .value("KNN", ModelKind::KNN)
        .value("XGB", ModelKind::XGB)
        .value("GB", ModelKind::GB)
        .value("RF", ModelKind::RF);

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_property_readonly("kind", &TrainedModel::kind)
        .def_property_readonly("n_samples", &TrainedModel::n_samples)
        .def_property_readonly("n_features", &TrainedModel::n_features)
        .def_property_readonly("params", [](const TrainedModel &t) { return params_to_json(t.spec().params).dump(); })
        .def(
            "predict", [](const TrainedModel &t, const std::vector<double> &x) { return t.predict(x); },
            py::arg("features"))
        .def(
            "predict_many",
            [](const TrainedModel &t, const std::vector<std::vector<double>> &rows)
            {
                std::vector<double> out;
                out.reserve(rows.size());
                for (const auto &r : rows)
                    out.push_back(t.predict(r));
                return out;
            },
            py::arg("rows"))
        .def("save", [](const TrainedModel &t, const std::filesystem::path &p) { save_model(t, p); }, py::arg("path"))
        .def("to_json", [](const TrainedModel &t) { return model_to_json(t).dump(); });

    m.def(
        "fit",
        [](const Dataset &train, const std::string &kind, const std::string &params, std::uint64_t seed)
        { return fit(train, spec_from_json(parse_model_kind(kind), nlohmann::json::parse(params), seed)); },
        py::arg("train"), py::arg("kind"), py::arg("params") = "{}", py::arg("seed") = 42,
        py::call_guard<py::gil_scoped_release>());
    m.def("load_model", &load_model, py::arg("path"));
    m.def(
        "model_from_json", [](const std::string &text) { return model_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));

    m.def("mae", [](const std::vector<double> &t, const std::vector<double> &p) { return mae(t, p); });
    m.def("rmse", [](const std::vector<double> &t, const std::vector<double> &p) { return rmse(t, p); });
    m.def("r2", [](const std::vector<double> &t, const std::vector<double> &p) { return r2(t, p); });

    m.def(
        "evaluate_all",
        [](const std::vector<TrainedModel> &models, const Dataset &test)
        {
            const auto report = evaluate_all(models, test, pipeline::report_timestamp());
            py::list rows;
            for (const auto &r : report.rows)
            {
                py::dict d;
                d["model"] = r.model;
                d["mae_deg"] = r.mae_deg;
                d["rmse_deg"] = r.rmse_deg;
                d["r2"] = r.r2;
                rows.append(d);
            }
            return rows;
        },
        py::arg("models"), py::arg("test"));

    m.def(
        "pattern_comparison",
        [](const RisConfig &cfg, double theta, const std::vector<TrainedModel> &models, const SectorCodebook &cb,
           double step)
        {
            const auto cmp = pattern_comparison(cfg, theta, models, cb, AngleGrid{0.0, 90.0, step});
            py::dict out;
            out["theta_true_deg"] = cmp.theta_true_deg;
            out["ground_truth"] = trace_dict(cmp.ground_truth);
            out["ground_truth_peak_deg"] = cmp.ground_truth_peak_deg;
            py::list preds;
            for (const auto &p : cmp.predictions)
            {
                py::dict d;
                d["model"] = p.model;
                d["predicted_theta_deg"] = p.predicted_theta_deg;
                d["peak_deg"] = p.peak_deg;
                d["peak_delta_deg"] = p.peak_delta_deg;
                d["trace"] = trace_dict(p.trace);
                preds.append(d);
            }
            out["predictions"] = preds;
            return out;
        },
        py::arg("cfg"), py::arg("theta_true_deg"), py::arg("models"), py::arg("codebook"), py::arg("step_deg") = 0.25);

    m.def(
        "repro",
        [](const std::filesystem::path &workdir, std::uint64_t seed)
        {
            std::ostringstream err;
            check_exit(pipeline::run_repro({workdir, seed}, err), err);
            return err.str();
        },
        py::arg("workdir"), py::arg("seed") = 42, py::call_guard<py::gil_scoped_release>());
    m.def("sha256_file", &pipeline::file_sha256, py::arg("path"));
}
