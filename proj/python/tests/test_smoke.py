# SPDX-License-Identifier: Apache-2.0
#
# rislocal: RIS sector probing and angle regression toolkit
# Copyright (C) 2026 The rislocal authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
import json
import math

import pytest

import rislocal


@pytest.fixture(scope="module")
def setup():
    cfg = rislocal.RisConfig()
    cb = rislocal.build_sector_codebook(cfg)
    return cfg, cb


def test_physics(setup):
    cfg, _ = setup
    assert cfg.m_rows == 20 and cfg.freq_hz == 27e9
    assert rislocal.wavelength(27e9) == pytest.approx(0.01110342437037037, rel=1e-12)
    profile = rislocal.steering_phase_profile(cfg, 56.25)
    assert len(profile.phases) == 400
    assert abs(rislocal.array_factor(cfg, profile, 56.25)) == pytest.approx(280.0, rel=1e-9)
    trace = rislocal.radiation_pattern(cfg, profile, 0.0, 90.0, 0.25)
    assert len(trace["angles_deg"]) == 361
    assert rislocal.peak_angle(trace["angles_deg"], trace["power_dbm"]) == pytest.approx(56.25)
    with pytest.raises(ValueError):
        rislocal.steering_phase_profile(cfg, 95.0)


def test_config_json_round_trip(setup):
    cfg, _ = setup
    back = rislocal.RisConfig.from_json(cfg.to_json())
    assert back == cfg
    with pytest.raises(ValueError, match="frequency"):
        rislocal.RisConfig.from_json(json.dumps({"frequency": 1}))


def test_codebook_and_probe(setup):
    cfg, cb = setup
    assert len(cb) == 4
    assert cb.steer_angles_deg == pytest.approx([11.25, 33.75, 56.25, 78.75])
    assert cb.sector_of(90.0) == 3
    clean = rislocal.probe_features(cfg, cb, 52.0)
    assert len(clean) == 4 and max(clean) == clean[2]
    a = rislocal.probe_features(cfg, cb, 52.0, sigma_db=1.0, seed=5)
    b = rislocal.probe_features(cfg, cb, 52.0, sigma_db=1.0, seed=5)
    assert a == b and a != clean


def test_train_evaluate_compare(setup, tmp_path):
    cfg, cb = setup
    ds = rislocal.generate_dataset(cfg, cb, step_deg=1.0, repeats=2, sigma_db=1.0, seed=3)
    assert len(ds) == 182 and ds.n_features == 4
    train, test = rislocal.split(ds, 0.2, 3)
    assert len(train) + len(test) == len(ds)

    models = [rislocal.fit(train, kind, params='{"n_trees": 10}' if kind == "RF" else "{}")
              for kind in rislocal.MODEL_KINDS]
    rows = rislocal.evaluate_all(models, test)
    assert [r["mae_deg"] for r in rows] == sorted(r["mae_deg"] for r in rows)
    assert rows[0]["r2"] > 0.8

    preds = models[0].predict_many(test.features)
    assert all(0.0 <= p <= 90.0 for p in preds)
    assert rislocal.mae(test.labels, preds) <= rislocal.rmse(test.labels, preds)

    path = tmp_path / "dt.json"
    models[0].save(path)
    back = rislocal.load_model(path)
    assert back.predict_many(test.features) == preds

    cmp = rislocal.pattern_comparison(cfg, 52.0, models, cb)
    assert cmp["ground_truth_peak_deg"] == pytest.approx(52.0, abs=0.25)
    for p in cmp["predictions"]:
        assert abs(p["peak_deg"] - p["predicted_theta_deg"]) <= 0.25

    with pytest.raises(RuntimeError, match="LSTM"):
        rislocal.fit(train, "LSTM")


def test_metrics_hand_cases():
    assert rislocal.mae([0.0, 0.0], [3.0, 4.0]) == 3.5
    assert rislocal.rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(math.sqrt(12.5), rel=1e-15)
    assert rislocal.r2([1.0, 2.0, 3.0], [2.0, 2.0, 2.0]) == 0.0
    with pytest.raises(ValueError):
        rislocal.r2([5.0, 5.0], [4.0, 6.0])


def test_repro_is_deterministic(tmp_path):
    rislocal.repro(tmp_path / "a")
    first = {p.name: rislocal.sha256_file(p) for p in (tmp_path / "a").rglob("*.csv")}
    rislocal.repro(tmp_path / "a")
    second = {p.name: rislocal.sha256_file(p) for p in (tmp_path / "a").rglob("*.csv")}
    assert first == second and "dataset.csv" in first
