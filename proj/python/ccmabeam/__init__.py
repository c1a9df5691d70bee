# Copyright 2026 The ccmabeam Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Concentric circular microphone array beamformer design.

Configs and parameters are plain dicts with the same layout as the JSON
files read by the ``ccma`` command-line tool.
"""

import json

from . import _core
from ._core import (
    ArrayGeometry,
    DimensionError,
    NumericalError,
    ValidationError,
    beamwidth_oracle,
    beamwidth_parabola,
    das_filter,
    directivity_factor,
    gamma_matrix,
    mics_per_ring,
    steering_vector,
    white_noise_gain,
)

__version__ = _core.__version__

__all__ = [
    "ArrayGeometry",
    "DimensionError",
    "NumericalError",
    "ValidationError",
    "baseline",
    "beamwidth_oracle",
    "beamwidth_parabola",
    "das_filter",
    "design",
    "directivity_factor",
    "evaluate",
    "gamma_matrix",
    "gradcheck",
    "mics_per_ring",
    "resolve_config",
    "steering_vector",
    "white_noise_gain",
]


def resolve_config(config=None):
    """Config with every default filled in."""
    return json.loads(_core.resolve_config(json.dumps(config or {})))


def design(config=None, out_dir=None):
    """Optimize a design. Writes the artifact set when ``out_dir`` is given."""
    result = _core.design(json.dumps(config or {}), str(out_dir) if out_dir else "")
    result["params"] = json.loads(result["params"])
    return result


def evaluate(params, config=None):
    """Metric curves of stored parameters."""
    return _core.evaluate(json.dumps(config or {}), json.dumps(params))


def baseline(config=None, kind="das"):
    """Metric curves of a fixed baseline beamformer on the config bands."""
    return _core.baseline(json.dumps(config or {}), kind)


def gradcheck(config=None, points=5, seed=0):
    """(max relative error, per-point errors, excluded coordinate count)."""
    return _core.gradcheck(json.dumps(config or {}), points, seed)
