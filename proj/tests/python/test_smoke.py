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


import pathlib

import pytest

import phonosynth

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def test_two_pass_program_runs():
    program = (
        'Map(ReplaceBy(x, "l", "h"), input_tokens)\n'
        'Map(IfThen(TransformationApplied(w, "{ReplaceBy, h}", 1), Insert(x, "s")), input_tokens)'
    )
    assert phonosynth.run_program(program, "a l a") == "a s h a"
    assert phonosynth.format_program(program) == program


def test_bad_program_raises():
    with pytest.raises(ValueError):
        phonosynth.format_program("IfThen(Bogus(")


def test_synthesize_learns_a_substitution():
    pairs = [("k a t i", "k e t i"), ("m a s e", "m e s e"), ("t a k u", "t e k u")]
    result = phonosynth.synthesize(pairs, variant="token")
    assert all(result["solved"])
    assert phonosynth.run_program(result["program"], "p a n u") == "p e n u"


def test_feature_guard_under_feature_variant():
    features = {
        "s": {"fricative": True},
        "t": {"fricative": False},
        "a": {"vowel": True},
        "e": {"vowel": True},
    }
    pairs = [("t a s", "t e s"), ("t a t", "t a t"), ("s a s a", "s e s a")]
    result = phonosynth.synthesize(pairs, features=features, variant="feature")
    assert all(result["solved"])
    assert 'Is(w, "fricative"' in result["program"]


def test_chrf():
    assert phonosynth.chrf("a b c", "a b c") == pytest.approx(1.0)
    assert phonosynth.chrf("a b c", "a b d", max_n=2) == pytest.approx(7 / 12)


def test_solve_fixtures():
    report = phonosynth.solve(FIXTURES, seed=7)
    assert report["variant"] == "feature"
    assert report["problems"]["somali"]["exact"] == 1.0
    assert 0.0 <= report["aggregates"]["overall"]["exact"] <= 1.0


def test_cli_exit_codes():
    code, _, _ = phonosynth.run_cli(["solve", "--problems", "/nonexistent"])
    assert code == 1
    code, out, _ = phonosynth.run_cli(["solve", "--problems", str(FIXTURES), "--variant", "token"])
    assert code == 0
    assert '"variant": "token"' in out
