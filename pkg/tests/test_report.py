# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import csv
import json
from typing import TYPE_CHECKING

import pytest

from qrt_elliptic.const import INFINITY
from qrt_elliptic.projective import ProjPoint
from qrt_elliptic.report import (
    ORBIT_FIELDS,
    PATH_NAMES,
    compare_orbits,
    params_text,
    params_to_dict,
    read_orbit_csv,
    reverify_orbit,
    verification_text,
    verification_to_dict,
    write_json,
    write_orbit_csv,
    write_paths,
)
from qrt_elliptic.solver import OrbitRow, verify

if TYPE_CHECKING:
    from pathlib import Path

    from qrt_elliptic.problem import Problem
    from qrt_elliptic.solver import SolutionParams


def test_orbit_table_is_reverified_from_disk(
    tmp_path: Path, phi1_problem: Problem, phi1_params: SolutionParams
) -> None:
    report = verify(phi1_params, phi1_problem.qrt_map, phi1_problem.initial_point, 12)
    path = tmp_path / "orbit.csv"
    write_orbit_csv(path, report.rows)
    with path.open(encoding="utf-8") as f:
        header = next(csv.reader(f))
    assert tuple(header) == ORBIT_FIELDS

    rows = read_orbit_csv(path)
    assert [row.n for row in rows] == list(range(-10, 13))
    assert reverify_orbit(rows, phi1_problem.config.tol_orbit)
    assert compare_orbits(rows, report.rows) < 1e-12


def test_infinite_coordinates_survive_the_table(tmp_path: Path) -> None:
    row = OrbitRow(3, ProjPoint(INFINITY, 1 + 2j), ProjPoint(INFINITY, 1 + 2j), 0.0)
    path = tmp_path / "orbit.csv"
    write_orbit_csv(path, [row])
    (parsed,) = read_orbit_csv(path)
    assert parsed.closed.x is INFINITY
    assert parsed.closed.y == 1 + 2j
    assert reverify_orbit([parsed], 1e-6)


def test_missing_iterate_fails_reverification() -> None:
    row = OrbitRow(1, ProjPoint(0j, 0j), None, float("inf"))
    assert not reverify_orbit([row], 1e-6)


def test_orbit_table_needs_all_columns(tmp_path: Path) -> None:
    path = tmp_path / "orbit.csv"
    path.write_text("n,x_closed_re\n0,1.0\n", encoding="utf-8")
    with pytest.raises(ValueError, match="missing columns"):
        read_orbit_csv(path)


def test_disjoint_orbit_tables() -> None:
    ours = [OrbitRow(1, ProjPoint(0j, 0j), None, 0.0)]
    theirs = [OrbitRow(2, ProjPoint(0j, 0j), None, 0.0)]
    with pytest.raises(ValueError, match="share no rows"):
        compare_orbits(ours, theirs)


def test_path_files(tmp_path: Path, phi1_params: SolutionParams) -> None:
    written = write_paths(tmp_path / "paths", phi1_params)
    assert sorted(p.name for p in written) == sorted([*(f"{name}.csv" for name in PATH_NAMES), "branch_points.csv"])
    with (tmp_path / "paths" / "branch_points.csv").open(encoding="utf-8") as f:
        records = list(csv.DictReader(f))
    assert len(records) == 4
    partners = {int(r["index"]): int(r["cut_partner"]) for r in records}
    assert all(partners[partners[i]] == i for i in partners)
    with (tmp_path / "paths" / "e1.csv").open(encoding="utf-8") as f:
        waypoints = list(csv.DictReader(f))
    assert waypoints[-1]["x_re"] == "inf"


def test_json_reports(tmp_path: Path, phi1_problem: Problem, phi1_params: SolutionParams) -> None:
    report = verify(phi1_params, phi1_problem.qrt_map, phi1_problem.initial_point, 5)
    write_json(tmp_path / "params.json", params_to_dict(phi1_params))
    write_json(tmp_path / "verification.json", verification_to_dict(report))
    params = json.loads((tmp_path / "params.json").read_text(encoding="utf-8"))
    verification = json.loads((tmp_path / "verification.json").read_text(encoding="utf-8"))
    c1 = phi1_params.embedding.c1
    assert params["embedding"]["c1"] == [c1.real, c1.imag]
    assert len(params["branch_points"]) == 4
    assert params["bracket"] == "sigma"
    assert verification["passed"] is True
    assert verification["rows"] == 11


def test_text_reports(phi1_problem: Problem, phi1_params: SolutionParams) -> None:
    text = params_text(phi1_params, "phi1")
    assert text.startswith("problem: phi1\n")
    assert "c1 = " in text
    report = verify(phi1_params, phi1_problem.qrt_map, phi1_problem.initial_point, 3)
    summary = verification_text(report, compare=1e-9)
    assert "max cross-orbit distance" in summary
    assert summary.endswith("result: PASS\n")
