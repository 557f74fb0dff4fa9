# Copyright 2026 The Phonosynth Authors.
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


"""Phonological rule synthesis from word pairs."""

import json

from ._phonosynth import (
    IngestError,
    ProgramSyntaxError,
    chrf,
    format_program,
    run_cli,
    run_program,
    synthesize,
)
from ._phonosynth import solve as _solve

__all__ = [
    "IngestError",
    "ProgramSyntaxError",
    "chrf",
    "format_program",
    "run_cli",
    "run_program",
    "solve",
    "synthesize",
]


def solve(problems, variant="feature", seed=0):
    """Solves every problem file in `problems` and returns the parsed report."""
    return json.loads(_solve(str(problems), variant, seed))
