# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass

import numpy as np

from ..const import DEFAULT_MARGIN_FRACTION, INDETERMINATE_TOLERANCE, INFINITY, LOGGER  # noqa: TID252
from ..pencil import QuarticPoly  # noqa: TID252
from ..projective import Coordinate, ProjPoint  # noqa: TID252
from ..qrt import Biquadratic, power_vector  # noqa: TID252
from .errors import ChartDegenerateError, DegenerateQuarticError, PoleOfQuadraticError

_LOGGER = LOGGER.getChild(__name__)

_ROOT_SEPARATION = 1e-8
_SEPARATION_SHARE = 0.3
_NEWTON_STEPS = 3


@dataclass(frozen=True, slots=True)
class SheetedPoint(ProjPoint):
    """Curve point over the x-line; y selects the sheet of the double cover."""


@dataclass(frozen=True, eq=False)
class BranchData:
    """Roots q1..q4 of the discriminant, ordered by (Re, Im), and its leading coefficient."""

    roots: tuple[complex, complex, complex, complex]
    leading: complex
    margin: float
    cuts: tuple[tuple[int, int], tuple[int, int]]

    @property
    def diameter(self) -> float:
        return max(abs(a - b) for a, b in itertools.combinations(self.roots, 2))

    @property
    def min_separation(self) -> float:
        return min(abs(a - b) for a, b in itertools.combinations(self.roots, 2))

    @property
    def radius(self) -> float:
        return max(abs(q) for q in self.roots)

    @property
    def quartic(self) -> QuarticPoly:
        return QuarticPoly.from_descending(self.leading * np.poly(np.array(self.roots)))

    def delta(self, x: np.ndarray | complex) -> np.ndarray | complex:
        value = self.leading
        for q in self.roots:
            value = value * (x - q)
        return value

    def delta_without(self, index: int, x: np.ndarray | complex) -> np.ndarray | complex:
        value = self.leading
        for k, q in enumerate(self.roots):
            if k != index:
                value = value * (x - q)
        return value

    def chart_delta(self, x_inv: np.ndarray | complex) -> np.ndarray | complex:
        """X^4 delta(1/X), the discriminant in the chart X = 1/x."""
        value = self.leading
        for q in self.roots:
            value = value * (1 - q * x_inv)
        return value

    def index_of(self, x: Coordinate) -> int | None:
        if x is INFINITY:
            return None
        for k, q in enumerate(self.roots):
            if abs(x - q) <= _ROOT_SEPARATION * max(self.radius, 1.0):
                return k
        return None


def _newton(coefficients: np.ndarray, root: complex) -> complex:
    derivative = np.polyder(coefficients)
    for _ in range(_NEWTON_STEPS):
        slope = np.polyval(derivative, root)
        if slope == 0:
            break
        step = np.polyval(coefficients, root) / slope
        if not cmath.isfinite(step):
            break
        root -= step
    return complex(root)


def _segments_cross(a: complex, b: complex, c: complex, d: complex) -> bool:
    def orientation(p: complex, q: complex, r: complex) -> float:
        return ((q - p).conjugate() * (r - p)).imag

    return (orientation(a, b, c) * orientation(a, b, d) < 0) and (orientation(c, d, a) * orientation(c, d, b) < 0)


def _choose_cuts(roots: tuple[complex, ...]) -> tuple[tuple[int, int], tuple[int, int]]:
    pairings = [((0, 1), (2, 3)), ((1, 2), (0, 3)), ((0, 2), (1, 3))]
    disjoint = [
        pairing
        for pairing in pairings
        if not _segments_cross(roots[pairing[0][0]], roots[pairing[0][1]], roots[pairing[1][0]], roots[pairing[1][1]])
    ]
    return disjoint[0]


def branch_points(q: QuarticPoly, *, margin_fraction: float = DEFAULT_MARGIN_FRACTION) -> BranchData:
    if abs(q.c4) <= INDETERMINATE_TOLERANCE * q.scale:
        raise ChartDegenerateError
    coefficients = q.descending()
    roots = sorted((_newton(coefficients, r) for r in np.roots(coefficients)), key=lambda r: (r.real, r.imag))
    radius = max(abs(r) for r in roots)
    separation = min(abs(a - b) for a, b in itertools.combinations(roots, 2))
    if separation <= _ROOT_SEPARATION * max(radius, 1.0):
        raise DegenerateQuarticError
    diameter = max(abs(a - b) for a, b in itertools.combinations(roots, 2))
    margin = min(margin_fraction * diameter, _SEPARATION_SHARE * separation)
    branch = BranchData(tuple(roots), q.c4, margin, _choose_cuts(tuple(roots)))
    _LOGGER.debug("Branch points %s, margin %.3g, cuts %s", branch.roots, margin, branch.cuts)
    return branch


def y_branches(curve: Biquadratic, x: complex) -> tuple[complex, complex]:
    y2, y1, y0 = curve.y_coefficients(x)
    if abs(y2) <= INDETERMINATE_TOLERANCE * curve.scale * float(np.max(np.abs(power_vector(x)))):
        raise PoleOfQuadraticError(x)
    root = cmath.sqrt(y1 * y1 - 4 * y2 * y0)
    return (-y1 + root) / (2 * y2), (-y1 - root) / (2 * y2)


def sheet_value(curve: Biquadratic, p: ProjPoint) -> complex:
    """P_y at p, in the chart X = 1/x when x is infinite; its square is the discriminant."""
    y2, y1, _ = curve.y_coefficients(p.x)
    if p.y is INFINITY:
        return complex(-y1)
    return complex(2 * y2 * p.y + y1)


def point_on_sheet(curve: Biquadratic, x: Coordinate, s: complex) -> SheetedPoint:
    """The curve point over x whose sheet value is s."""
    y2, y1, y0 = curve.y_coefficients(x)
    if abs(y2) <= INDETERMINATE_TOLERANCE * curve.scale * float(np.max(np.abs(power_vector(x)))):
        if abs(s + y1) <= abs(s - y1):
            return SheetedPoint(x, INFINITY)
        return SheetedPoint(x, -y0 / y1)
    return SheetedPoint(x, (s - y1) / (2 * y2))
