# Copyright 2026 The pulseq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Pulse-level gate simulation for coupled superconducting charge qubits."""

import json as _json

from ._core import (
    ConvergenceError,
    CouplingParams,
    GateProgram,
    InvalidArgument,
    NumericalError,
    cnot_matrix,
    compile_gate,
    expm_hermitian,
    fit_error_law,
    magnus_linear_ramp,
    phase_insensitive_distance,
    propagator,
    simulate,
    solve_coupling,
    sweep_rise_time,
)
from ._core import run as _run

__version__ = "0.1.0"


def run(command, config, out_dir, jobs=0, dt=None):
    """Run a command-line subcommand in-process.

    ``config`` may be a dict or a JSON string. Returns the manifest as a dict.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_run(command, text, str(out_dir), jobs, dt))


__all__ = [
    "ConvergenceError",
    "CouplingParams",
    "GateProgram",
    "InvalidArgument",
    "NumericalError",
    "cnot_matrix",
    "compile_gate",
    "expm_hermitian",
    "fit_error_law",
    "magnus_linear_ramp",
    "phase_insensitive_distance",
    "propagator",
    "run",
    "simulate",
    "solve_coupling",
    "sweep_rise_time",
]
