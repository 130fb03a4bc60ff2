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

import json
import os
import pathlib
import sys

import pytest

import pels

SCENARIOS = pathlib.Path(os.environ.get("PELS_SCENARIO_DIR",
                                        pathlib.Path(__file__).resolve().parents[2] / "tests" / "scenarios"))


def test_encode_decode_round_trip():
    word = pels.encode(5, 0x004, 0x8000_0000)
    assert word == 0x5004_8000_0000
    assert pels.decode(word) == (5, 0x004, 0x8000_0000)


def test_undefined_opcode_raises():
    with pytest.raises(pels.PelsError) as info:
        pels.decode(0xA000_0000_0000)
    assert info.value.code == "undefined-opcode"


def test_assemble_and_disassemble():
    words = pels.assemble("set 0x4, 0x1\naction grp0.set, 0b1\n")
    assert len(words) == 2
    text = pels.disassemble(words)
    assert pels.assemble(text) == words
    image = pels.pack_image(words)
    assert len(image) == 12
    assert pels.unpack_image(image) == words


def test_assembler_diagnostic():
    with pytest.raises(pels.PelsError) as info:
        pels.assemble("frobnicate 1\n")
    assert info.value.code == "unknown-mnemonic"


def test_run_instant_scenario():
    report = pels.run_file(SCENARIOS / "instant.json")
    assert report["errors"] == []
    assert report["check_failures"] == []
    assert report["links"][0]["latency"]["max"] == 2
    assert json.loads(report["trace"][0])["type"] == "header"


def test_compare_modes():
    path = SCENARIOS / "sequenced.json"
    a = pels.run_file(path, mode="pels", trace_level="off")
    b = pels.run_file(path, mode="baseline", trace_level="off")
    assert len(a["trace"]) == 2
    cmp = pels.compare(a, b)
    assert cmp["latency_cycles"]["ratio"] == pytest.approx(16 / 7)
    assert cmp["shared_memory_fetches"]["ratio"] == "inf"


def test_bad_scenario_raises_config_error():
    with pytest.raises(pels.PelsError) as info:
        pels.run({"links": "nope"})
    assert info.value.code == "config"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
