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
"""RIS sector probing, dataset generation and angle regressors (compiled core)."""

from ._core import (
    Dataset,
    ModelKind,
    PhaseProfile,
    PropagationMode,
    RisConfig,
    SectorCodebook,
    TrainedModel,
    array_factor,
    build_sector_codebook,
    evaluate_all,
    fit,
    generate_dataset,
    load_csv,
    load_model,
    mae,
    model_from_json,
    pattern_comparison,
    peak_angle,
    probe_features,
    r2,
    radiation_pattern,
    received_power_dbm,
    repro,
    rmse,
    sha256_file,
    split,
    steering_phase_profile,
    wavelength,
)

MODEL_KINDS = ("DT", "SVR", "KNN", "XGB", "GB", "RF")

__all__ = [name for name in dir() if not name.startswith("_")]
