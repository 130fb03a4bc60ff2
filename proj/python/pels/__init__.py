# Copyright 2026 The PELS Simulator Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python front end for the PELS simulator."""

from __future__ import annotations

import json
import os
from typing import Any

from . import _pels
from ._pels import PelsError, assemble, decode, disassemble, encode, pack_image, unpack_image

__all__ = [
    "PelsError",
    "assemble",
    "compare",
    "decode",
    "disassemble",
    "encode",
    "pack_image",
    "run",
    "run_file",
    "unpack_image",
]


def run(scenario: dict[str, Any] | str, base_dir: str = "", *, mode: str | None = None,
        trace_level: str | None = None) -> dict[str, Any]:
    """Runs a scenario given as a dict or JSON text and returns the report."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(_pels.run_scenario(text, base_dir, mode, trace_level))


def run_file(path: str | os.PathLike[str], **kwargs: Any) -> dict[str, Any]:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return run(text, os.path.dirname(os.path.abspath(path)), **kwargs)


def compare(pels_report: dict[str, Any], baseline_report: dict[str, Any]) -> dict[str, Any]:
    return json.loads(_pels.compare(json.dumps(_strip(pels_report)),
                                    json.dumps(_strip(baseline_report))))


def _strip(report: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in report.items() if k not in ("trace", "check_failures")}
