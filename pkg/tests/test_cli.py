# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import json
from typing import TYPE_CHECKING

import pytest

from qrt_elliptic.cli import EXIT_FAILURE, EXIT_NOT_SMOOTH, EXIT_OK, build_parser, main
from qrt_elliptic.report import read_orbit_csv, reverify_orbit

if TYPE_CHECKING:
    from pathlib import Path


def test_solve_writes_the_report(fixtures_dir: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "phi1"
    assert main(["solve", str(fixtures_dir / "phi1.json"), "--out", str(out)]) == EXIT_OK
    assert {p.name for p in out.iterdir()} == {"params.txt", "verification.txt", "orbit.csv"}
    stdout = capsys.readouterr().out
    assert "problem: phi1" in stdout
    assert "result: PASS" in stdout
    rows = read_orbit_csv(out / "orbit.csv")
    assert len(rows) == 61
    assert reverify_orbit(rows, 1e-6)


def test_second_map_matches_the_first(fixtures_dir: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    first = tmp_path / "phi1"
    assert main(["solve", str(fixtures_dir / "phi1.json"), "--out", str(first), "--steps", "20"]) == EXIT_OK
    code = main(
        [
            "solve",
            str(fixtures_dir / "phi2.json"),
            "--out",
            str(tmp_path / "phi2"),
            "--steps",
            "20",
            "--compare",
            str(first / "orbit.csv"),
        ]
    )
    assert code == EXIT_OK
    assert "max cross-orbit distance" in capsys.readouterr().out


def test_json_report_and_paths(fixtures_dir: Path, tmp_path: Path) -> None:
    out = tmp_path / "json"
    args = ["solve", str(fixtures_dir / "phi1.json"), "--out", str(out), "--steps", "5", "--report", "json", "--paths"]
    assert main(args) == EXIT_OK
    verification = json.loads((out / "verification.json").read_text(encoding="utf-8"))
    assert verification["passed"] is True
    assert "lattice" in json.loads((out / "params.json").read_text(encoding="utf-8"))
    assert len(list((out / "paths").glob("*.csv"))) == 9


def test_paths_command(fixtures_dir: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["paths", str(fixtures_dir / "phi1.json"), "--out", str(tmp_path)]) == EXIT_OK
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 9
    branch = (tmp_path / "paths" / "branch_points.csv").read_text(encoding="utf-8").splitlines()
    assert len(branch) == 5


def test_singular_curve_exit_code(fixtures_dir: Path, tmp_path: Path) -> None:
    assert main(["solve", str(fixtures_dir / "singular.json"), "--out", str(tmp_path)]) == EXIT_NOT_SMOOTH


def test_tight_tolerance_fails(fixtures_dir: Path, tmp_path: Path) -> None:
    args = ["solve", str(fixtures_dir / "phi1.json"), "--out", str(tmp_path), "--steps", "5", "--tol-orbit", "1e-300"]
    assert main(args) == EXIT_FAILURE


@pytest.mark.parametrize("content", ["{", '{"A": []}'])
def test_invalid_problem_file(tmp_path: Path, content: str) -> None:
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    assert main(["solve", str(path), "--out", str(tmp_path / "out")]) == EXIT_FAILURE


def test_missing_problem_file(tmp_path: Path) -> None:
    assert main(["solve", str(tmp_path / "nope.json")]) == EXIT_FAILURE


def test_parser_requires_a_command() -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_curve_without_y_squared_exit_code(tmp_path: Path) -> None:
    problem = {
        "A": [[0, 1, 0], [0, 0, 1], [0, 1, 2]],
        "B": [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
        "initial_point": [0, -2],
    }
    path = tmp_path / "linear.json"
    path.write_text(json.dumps(problem), encoding="utf-8")
    assert main(["solve", str(path), "--out", str(tmp_path / "out")]) == EXIT_NOT_SMOOTH
