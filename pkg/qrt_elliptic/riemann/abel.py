# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from ..const import INFINITY, LOGGER, SHEET_TOLERANCE  # noqa: TID252
from ..elliptic import build_lattice, lattice_invariants_eisenstein  # noqa: TID252
from ..errors import DegenerateLatticeError  # noqa: TID252
from ..lattice import Lattice  # noqa: TID252
from ..pencil import QuarticPoly, eisenstein_invariants  # noqa: TID252
from .branch import BranchData, SheetedPoint, sheet_value
from .errors import PeriodLatticeError, SheetMismatchError
from .integrate import track_integral
from .paths import IntegrationPath, abel_path, cut_path

if TYPE_CHECKING:
    from ..projective import ProjPoint  # noqa: TID252
    from ..qrt import Biquadratic  # noqa: TID252

_LOGGER = LOGGER.getChild(__name__)

PERIOD_TOLERANCE = 1e-6
# cut pairs bounding the loops around q1, q2 and q2, q3 come first
_PREFERRED_CUTS = ((0, 1), (1, 2))


@dataclass(frozen=True)
class AbelIntegral:
    value: complex
    path: IntegrationPath
    detoured: bool
    end: SheetedPoint


@dataclass(frozen=True)
class PeriodResult:
    """Period lattice with the cut paths whose doubled integrals generate it."""

    lattice: Lattice
    pair: tuple[tuple[int, int], tuple[int, int]]
    paths: dict[str, IntegrationPath] = field(default_factory=dict)
    residual: float = 0.0


def _same_sheet(curve: Biquadratic, branch: BranchData, end: ProjPoint, target: ProjPoint) -> bool:
    if branch.index_of(target.x) is not None:
        return True
    tracked = sheet_value(curve, end)
    wanted = sheet_value(curve, target)
    return abs(tracked - wanted) <= SHEET_TOLERANCE * max(abs(tracked), abs(wanted))


def abel_integral(curve: Biquadratic, branch: BranchData, basept: SheetedPoint, target: ProjPoint) -> AbelIntegral:
    """
    Integral of dx / P_y from basept to target on the double cover.

    The straight path is tried first; when it arrives on the other sheet a loop around q1 is prepended.
    """
    basept = SheetedPoint(basept.x, basept.y)
    if target.x == basept.x and target.y == basept.y:
        return AbelIntegral(0j, IntegrationPath((basept.x,), basept, branch.margin), detoured=False, end=basept)

    for detour in (False, True):
        path = abel_path(branch, basept, target.x, detour=detour)
        value, end = track_integral(curve, branch, path)
        if _same_sheet(curve, branch, end, target):
            if detour:
                _LOGGER.debug("Sheet detour around q1 inserted for target %s", target)
            return AbelIntegral(value, path, detour, end)
    raise SheetMismatchError


def abel_to_point(curve: Biquadratic, branch: BranchData, basept: SheetedPoint, target: ProjPoint) -> complex:
    return abel_integral(curve, branch, basept, target).value


def abel_to_infinity(curve: Biquadratic, branch: BranchData, basept: SheetedPoint, target: ProjPoint) -> complex:
    if target.x is not INFINITY:
        msg = f"Target {target} is not over x = inf"
        raise ValueError(msg)
    return abel_integral(curve, branch, basept, target).value


def invariant_residual(lattice: Lattice, quartic: QuarticPoly) -> float:
    """Relative mismatch between the Eisenstein series of the lattice and the invariants of the quartic."""
    g2, g3 = lattice_invariants_eisenstein(lattice)
    expected_g2, expected_g3, _ = eisenstein_invariants(quartic)
    scale = max(abs(expected_g2), abs(expected_g3) ** (2 / 3))
    return max(abs(g2 - expected_g2) / scale, abs(g3 - expected_g3) / scale**1.5)


def _cut_pairs() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    others = [
        (a, b)
        for a, b in itertools.combinations(itertools.combinations(range(4), 2), 2)
        if len(set(a) & set(b)) == 1 and (a, b) != _PREFERRED_CUTS
    ]
    return [_PREFERRED_CUTS, *others]


def period_lattice(curve: Biquadratic, branch: BranchData) -> PeriodResult:
    """Reduced period lattice of dx / P_y from twice the integrals along two cuts sharing a branch point."""
    quartic = branch.quartic
    integrals: dict[tuple[int, int], tuple[complex, IntegrationPath]] = {}

    def cut_integral(cut: tuple[int, int]) -> tuple[complex, IntegrationPath]:
        if cut not in integrals:
            path = cut_path(curve, branch, *cut)
            value, _ = track_integral(curve, branch, path)
            integrals[cut] = (2 * value, path)
        return integrals[cut]

    for first, second in _cut_pairs():
        w1, path1 = cut_integral(first)
        w2, path2 = cut_integral(second)
        try:
            lattice = build_lattice(w1, w2)
        except DegenerateLatticeError:
            continue
        residual = invariant_residual(lattice, quartic)
        if residual > PERIOD_TOLERANCE:
            _LOGGER.debug("Cuts %s, %s give invariant residual %.3g", first, second, residual)
            continue
        if (first, second) != _PREFERRED_CUTS:
            _LOGGER.warning("Periods taken from fallback cuts %s and %s", first, second)
        _LOGGER.debug("Periods %s, %s from cuts %s, %s (residual %.3g)", w1, w2, first, second, residual)
        return PeriodResult(lattice, (first, second), {"delta1": path1, "delta2": path2}, residual)
    raise PeriodLatticeError


def compute_periods(curve: Biquadratic, branch: BranchData) -> Lattice:
    return period_lattice(curve, branch).lattice
