# Copyright (c) sgmor contributors.
# SPDX-License-Identifier: Apache-2.0
"""Stochastic Galerkin model order reduction with stability preservation."""

import json

from ._core import (
    NumericalError,
    arnoldi,
    basis_count,
    galerkin_system,
    h2_norm,
    lyap_residual,
    model_mean,
    model_system,
    solve_lyap_direct,
    theta_margins,
)
from ._core import run_experiment_json as _run_experiment_json

__all__ = [
    "NumericalError",
    "arnoldi",
    "basis_count",
    "galerkin_system",
    "h2_norm",
    "lyap_residual",
    "model_mean",
    "model_system",
    "run_experiment",
    "solve_lyap_direct",
    "theta_margins",
]


def run_experiment(config=None, **overrides):
    """Run the pipeline. Returns (ok, report dict, stability CSV text)."""
    cfg = dict(config or {})
    cfg.update(overrides)
    ok, report, csv = _run_experiment_json(json.dumps(cfg))
    return ok, json.loads(report), csv
