# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any

import pytest
import voluptuous as vol

from qrt_elliptic.const import INFINITY
from qrt_elliptic.elliptic import Bracket
from qrt_elliptic.errors import ProblemFileError
from qrt_elliptic.problem import complex_number, coordinate, load_problem, parse_problem
from qrt_elliptic.qrt import compute_K

if TYPE_CHECKING:
    from pathlib import Path

    from qrt_elliptic.problem import Problem

A = [[0, [-7, -1], [3, 1]], [[0, 4], [-5, 2], [2, -1]], [[3, 4], 6, 0]]
B = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]


def problem_data(**changes: Any) -> dict[str, Any]:
    data = {"A": A, "B": B, "initial_point": [1, [0.437561, 0.328195]]}
    data.update(changes)
    return data


def test_fixture_is_loaded(phi1_problem: Problem) -> None:
    assert phi1_problem.name == "phi1"
    assert phi1_problem.qrt_map.A[0][1] == -7 - 1j
    assert phi1_problem.config.n_max == 50
    assert phi1_problem.config.seed == 0
    assert phi1_problem.config.basepoint is not None
    assert phi1_problem.k == 0


def test_initial_point_is_snapped_when_k_is_given(phi1_problem: Problem) -> None:
    assert abs(compute_K(phi1_problem.qrt_map, phi1_problem.initial_point)) < 1e-12


def test_complex_number_forms() -> None:
    assert complex_number(2) == 2
    assert complex_number([1.5, -2]) == 1.5 - 2j
    assert coordinate("inf") is INFINITY
    for bad in (True, [1, 2, 3], "1+2j", [1, "x"]):
        with pytest.raises(vol.Invalid):
            complex_number(bad)


def test_defaults_without_config() -> None:
    problem = parse_problem(problem_data(), "plain")
    assert problem.name == "plain"
    assert problem.k is None
    assert problem.config.bracket is Bracket.SIGMA
    assert problem.config.n_max == 50


def test_config_overrides() -> None:
    data = problem_data(config={"seed": 4, "bracket": "theta", "marked_points": ["inf", "inf", 0, 0]})
    problem = parse_problem(data)
    assert problem.config.bracket is Bracket.THETA
    assert problem.config.marked_points.is_identity
    changed = problem.with_overrides(seed=7, n_max=None)
    assert changed.config.seed == 7
    assert changed.config.n_max == problem.config.n_max
    assert problem.with_overrides(seed=None) is problem


@pytest.mark.parametrize(
    "changes",
    [
        {"A": [[1, 2], [3, 4]]},
        {"initial_point": [1]},
        {"config": {"tol_orbit": -1}},
        {"config": {"bracket": "gamma"}},
        {"config": {"unknown": 1}},
        {"B": A},
        {"config": {"marked_points": [1, 1, 1, 2]}},
    ],
)
def test_invalid_problems(changes: dict[str, Any]) -> None:
    with pytest.raises(ProblemFileError):
        parse_problem(problem_data(**changes))


def test_missing_matrix() -> None:
    data = problem_data()
    del data["B"]
    with pytest.raises(ProblemFileError, match="B"):
        parse_problem(data)


def test_load_problem_errors(tmp_path: Path) -> None:
    with pytest.raises(ProblemFileError):
        load_problem(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text('{"A": [\n', encoding="utf-8")
    with pytest.raises(ProblemFileError, match=r"broken\.json:2:"):
        load_problem(broken)


def test_load_problem_uses_file_stem(tmp_path: Path) -> None:
    path = tmp_path / "custom.json"
    path.write_text(json.dumps(problem_data()), encoding="utf-8")
    assert load_problem(path).name == "custom"
