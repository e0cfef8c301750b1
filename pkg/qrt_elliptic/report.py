# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import csv
import json
import math
from typing import TYPE_CHECKING, Any

from .const import INFINITY, INFINITY_TOKEN, LOGGER
from .projective import Coordinate, ProjPoint, as_coordinate, format_coordinate, point_distance
from .solver import ABEL_TARGETS, OrbitRow, SolutionParams, VerificationReport

if TYPE_CHECKING:
    from collections.abc import Iterable
    from pathlib import Path

    from .riemann import BranchData

_LOGGER = LOGGER.getChild(__name__)

ORBIT_FIELDS = (
    "n",
    "x_closed_re",
    "x_closed_im",
    "y_closed_re",
    "y_closed_im",
    "x_iter_re",
    "x_iter_im",
    "y_iter_re",
    "y_iter_im",
    "chordal_error",
)
PATH_FIELDS = ("segment_index", "x_re", "x_im")
BRANCH_POINT_FIELDS = ("index", "q_re", "q_im", "cut_partner")
PATH_NAMES = ("delta1", "delta2", *ABEL_TARGETS)


def _float(value: float) -> str:
    return INFINITY_TOKEN if math.isinf(value) else repr(float(value))


def _parts(c: Coordinate | None) -> tuple[str, str]:
    if c is None:
        return "", ""
    if c is INFINITY:
        return INFINITY_TOKEN, INFINITY_TOKEN
    return repr(c.real), repr(c.imag)


def _parse(re_part: str, im_part: str) -> Coordinate:
    if re_part == INFINITY_TOKEN:
        return INFINITY
    return as_coordinate(complex(float(re_part), float(im_part)))


def json_complex(c: Coordinate) -> list[float] | str:
    if c is INFINITY:
        return INFINITY_TOKEN
    c = complex(c)
    return [c.real, c.imag]


def _json_point(p: ProjPoint) -> list[list[float] | str]:
    return [json_complex(p.x), json_complex(p.y)]


def params_to_dict(params: SolutionParams) -> dict[str, Any]:
    provenance = params.provenance
    embedding = params.embedding
    lattice = params.lattice
    return {
        "K0": json_complex(provenance.k0),
        "pencil_swapped": provenance.pencil_swapped,
        "eisenstein": {
            "g2": json_complex(provenance.eisenstein[0]),
            "g3": json_complex(provenance.eisenstein[1]),
            "discriminant": json_complex(provenance.eisenstein[2]),
        },
        "marked_points": [_json_point(params.rho.first), _json_point(params.rho.second)],
        "normalized_curve": [[json_complex(c) for c in row] for row in params.curve.coefficients.tolist()],
        "branch_points": [json_complex(q) for q in params.branch.roots],
        "lattice": {
            "w1": json_complex(lattice.w1),
            "w2": json_complex(lattice.w2),
            "tau": json_complex(lattice.tau),
            "eta1": json_complex(lattice.eta1),
            "eta2": json_complex(lattice.eta2),
        },
        "period_cuts": [list(cut) for cut in provenance.period_cuts],
        "basepoint": _json_point(params.basept),
        "abel": {name: json_complex(value) for name, value in provenance.abel_values.items()},
        "embedding": {
            "e1": json_complex(embedding.e1),
            "e2": json_complex(embedding.e2),
            "h_x": json_complex(embedding.h_x),
            "h_y": json_complex(embedding.h_y),
            "c1": json_complex(embedding.c1),
            "c2": json_complex(embedding.c2),
        },
        "u0": json_complex(params.u0),
        "step": json_complex(params.step),
        "bracket": str(params.config.bracket),
        "provenance": {
            "detours": list(provenance.detours),
            "chain_offsets": [list(offset) for offset in provenance.chain_offsets],
            "relation_residuals": list(provenance.relation_residuals),
            "coefficient_residuals": list(provenance.coefficient_residuals),
            "invariant_residual": provenance.invariant_residual,
            "step_flipped": provenance.step_flipped,
        },
    }


def params_text(params: SolutionParams, name: str = "") -> str:
    f = format_coordinate
    provenance = params.provenance
    embedding = params.embedding
    lines = [
        f"problem: {name}" if name else "problem:",
        f"K0 = {f(provenance.k0)}" + (" (curve x^T B y = 0)" if provenance.pencil_swapped else ""),
        f"Eisenstein invariant = {f(provenance.eisenstein[2])}",
        f"marked points: p1 = {params.rho.first}, p2 = {params.rho.second}",
        "branch points: " + ", ".join(f"q{i + 1} = {f(q)}" for i, q in enumerate(params.branch.roots)),
        f"periods: w1 = {f(params.lattice.w1)}, w2 = {f(params.lattice.w2)}, tau = {f(params.lattice.tau)}",
        f"basepoint: {params.basept}",
        f"e1 = {f(embedding.e1)}, e2 = {f(embedding.e2)}",
        f"h_x = {f(embedding.h_x)}, h_y = {f(embedding.h_y)}",
    ]
    lines.extend(f"  {key} = {f(value)}" for key, value in provenance.abel_values.items())
    lines += [
        f"c1 = {f(embedding.c1)}, c2 = {f(embedding.c2)}",
        f"u0 = {f(params.u0)}, step = {f(params.step)}" + (" (flipped)" if provenance.step_flipped else ""),
        "detours: " + (", ".join(provenance.detours) or "none"),
        f"e1-chain offsets: h_x {provenance.chain_offsets[0]}, h_y {provenance.chain_offsets[1]}",
    ]
    return "\n".join(lines) + "\n"


def verification_to_dict(report: VerificationReport) -> dict[str, Any]:
    return {
        "passed": bool(report.passed),
        "orbit_passed": bool(report.orbit_passed),
        "intermediate_passed": bool(report.intermediate_passed),
        "rows": len(report.rows),
        "max_chordal_error": float(report.max_error),
        "max_k_residual": float(report.max_k_residual),
        "coefficient_residuals": [float(r) for r in report.coefficient_residuals],
        "relation_residuals": [float(r) for r in report.relation_residuals],
        "invariant_residual": float(report.invariant_residual),
        "tol_orbit": report.tol_orbit,
        "tol_intermediate": report.tol_intermediate,
    }


def verification_text(report: VerificationReport, compare: float | None = None) -> str:
    lines = [
        f"orbit rows: {len(report.rows)}",
        f"max chordal error: {report.max_error:.3g} (tolerance {report.tol_orbit:.3g})",
        f"max K residual: {report.max_k_residual:.3g}",
        "c1/c2 consistency: " + ", ".join(f"{r:.3g}" for r in report.coefficient_residuals),
        "parameter relations: " + ", ".join(f"{r:.3g}" for r in report.relation_residuals),
        f"lattice invariants: {report.invariant_residual:.3g}",
    ]
    if compare is not None:
        lines.append(f"max cross-orbit distance: {compare:.3g}")
    lines.append("intermediates: " + ("ok" if report.intermediate_passed else "outside tolerance"))
    lines.append("result: " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(lines) + "\n"


def write_json(path: Path, data: dict[str, Any]) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def write_orbit_csv(path: Path, rows: Iterable[OrbitRow]) -> None:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(ORBIT_FIELDS)
        for row in sorted(rows, key=lambda r: r.n):
            iterated = row.iterated
            writer.writerow(
                [
                    row.n,
                    *_parts(row.closed.x),
                    *_parts(row.closed.y),
                    *_parts(None if iterated is None else iterated.x),
                    *_parts(None if iterated is None else iterated.y),
                    _float(row.error),
                ]
            )
    _LOGGER.debug("Wrote orbit table %s", path)


def read_orbit_csv(path: Path) -> list[OrbitRow]:
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = set(ORBIT_FIELDS) - set(reader.fieldnames or ())
        if missing:
            msg = f"{path}: missing columns {sorted(missing)}"
            raise ValueError(msg)
        rows = []
        for record in reader:
            closed = ProjPoint(
                _parse(record["x_closed_re"], record["x_closed_im"]),
                _parse(record["y_closed_re"], record["y_closed_im"]),
            )
            iterated = None
            if record["x_iter_re"]:
                iterated = ProjPoint(
                    _parse(record["x_iter_re"], record["x_iter_im"]),
                    _parse(record["y_iter_re"], record["y_iter_im"]),
                )
            rows.append(OrbitRow(int(record["n"]), closed, iterated, float(record["chordal_error"])))
    return rows


def reverify_orbit(rows: Iterable[OrbitRow], tol_orbit: float) -> bool:
    """Recompute the chordal errors of a parsed orbit table against the tolerance."""
    errors = [math.inf if row.iterated is None else point_distance(row.closed, row.iterated) for row in rows]
    return max(errors, default=0.0) < tol_orbit


def compare_orbits(ours: Iterable[OrbitRow], theirs: Iterable[OrbitRow]) -> float:
    """Largest distance between the closed-form points of two orbit tables over their common n."""
    reference = {row.n: row.closed for row in theirs}
    distances = [point_distance(row.closed, reference[row.n]) for row in ours if row.n in reference]
    if not distances:
        msg = "Orbit tables share no rows"
        raise ValueError(msg)
    return max(distances)


def write_paths(directory: Path, params: SolutionParams) -> list[Path]:
    """One CSV of waypoints per period cut and marked-point integral."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in PATH_NAMES:
        target = directory / f"{name}.csv"
        with target.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(PATH_FIELDS)
            for i, x in enumerate(params.provenance.paths[name].waypoints):
                writer.writerow([i, *_parts(x)])
        written.append(target)
    written.append(write_branch_points(directory / "branch_points.csv", params.branch))
    _LOGGER.debug("Wrote %d path files to %s", len(written), directory)
    return written


def write_branch_points(path: Path, branch: BranchData) -> Path:
    partner = {}
    for i, j in branch.cuts:
        partner[i], partner[j] = j, i
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(BRANCH_POINT_FIELDS)
        for i, q in enumerate(branch.roots):
            writer.writerow([i, *_parts(q), partner[i]])
    return path
