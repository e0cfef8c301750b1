# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from ..const import INFINITY  # noqa: TID252
from .branch import BranchData, SheetedPoint, point_on_sheet

if TYPE_CHECKING:
    from collections.abc import Iterable

    from ..projective import Coordinate  # noqa: TID252
    from ..qrt import Biquadratic  # noqa: TID252

# detour arcs run on a circle slightly outside the margin
_DETOUR_FACTOR = 1.1
_ARC_SEGMENTS = 16
# endpoints closer than this many margins to a branch point shrink the margin
_ENDPOINT_CLEARANCE = 2.5
_SWAP_FACTOR = 4.0


@dataclass(frozen=True)
class IntegrationPath:
    """Polyline in x starting at a sheeted point; a trailing inf is reached through the chart X = 1/x."""

    waypoints: tuple[Coordinate, ...]
    start: SheetedPoint
    margin: float

    def reversed(self, start: SheetedPoint) -> IntegrationPath:
        return IntegrationPath(tuple(reversed(self.waypoints)), start, self.margin)

    @property
    def finite_waypoints(self) -> list[complex]:
        return [w for w in self.waypoints if w is not INFINITY]


def segment_distance(a: complex, b: complex, q: complex) -> float:
    d = b - a
    if d == 0:
        return abs(q - a)
    t = min(max(((q - a) * d.conjugate()).real / abs(d) ** 2, 0.0), 1.0)
    return abs(a + t * d - q)


def local_margin(branch: BranchData, points: Iterable[Coordinate], margin: float, skip: Iterable[int] = ()) -> float:
    """Shrink margin so that no endpoint sits inside a detour circle."""
    skipped = set(skip)
    for p in points:
        if p is INFINITY:
            continue
        for k, q in enumerate(branch.roots):
            if k not in skipped and abs(p - q) < _ENDPOINT_CLEARANCE * margin:
                margin = abs(p - q) / _ENDPOINT_CLEARANCE
    return margin


def _arc(q: complex, radius: float, entry: complex, exit_: complex, side: complex) -> list[complex]:
    start = cmath.phase(entry - q)
    sweep = (cmath.phase(exit_ - q) - start) % (2 * math.pi)
    if abs(side) > 0:
        middle = (cmath.phase(side) - start) % (2 * math.pi)
        if middle > sweep:
            sweep -= 2 * math.pi
    steps = max(2, math.ceil(abs(sweep) / (2 * math.pi / _ARC_SEGMENTS)))
    return [q + radius * cmath.exp(1j * (start + sweep * s / steps)) for s in range(steps + 1)]


def route(branch: BranchData, start: complex, end: complex, margin: float, skip: Iterable[int] = ()) -> list[complex]:
    """Straight segment from start to end, bent around every branch point it would pass within margin of."""
    skipped = set(skip)
    d = end - start
    if d == 0:
        return [start, end]
    radius = _DETOUR_FACTOR * margin
    hits = []
    for k, q in enumerate(branch.roots):
        if k in skipped:
            continue
        t = ((q - start) * d.conjugate()).real / abs(d) ** 2
        closest = start + t * d
        if 0 < t < 1 and abs(closest - q) < margin:
            hits.append((t, q, closest))
    waypoints = [start]
    for t, q, closest in sorted(hits, key=lambda hit: hit[0]):
        half = math.sqrt(radius**2 - abs(closest - q) ** 2) / abs(d)
        waypoints.extend(_arc(q, radius, start + (t - half) * d, start + (t + half) * d, closest - q))
    waypoints.append(end)
    return waypoints


def loop_around(branch: BranchData, index: int, start: complex, margin: float) -> list[complex]:
    """Closed polyline from start that winds once counterclockwise around one branch point."""
    q = branch.roots[index]
    radius = _DETOUR_FACTOR * margin
    direction = (start - q) / abs(start - q)
    entry = q + radius * direction
    approach = route(branch, start, entry, margin, skip=(index,))
    phase = cmath.phase(direction)
    circle = [q + radius * cmath.exp(1j * (phase + 2 * math.pi * s / _ARC_SEGMENTS)) for s in range(_ARC_SEGMENTS + 1)]
    circle[-1] = entry
    return approach + circle[1:] + list(reversed(approach))[1:]


def cut_path(curve: Biquadratic, branch: BranchData, i: int, j: int) -> IntegrationPath:
    """Path from q_i to q_j; twice its integral is the period of the loop around both."""
    a, b = branch.roots[i], branch.roots[j]
    waypoints = route(branch, a, b, branch.margin, skip=(i, j))
    return IntegrationPath(tuple(waypoints), point_on_sheet(curve, a, 0j), branch.margin)


def swap_point(branch: BranchData, start: complex) -> complex:
    """Where a path to x = inf changes to the chart X = 1/x."""
    radius = max(_SWAP_FACTOR * branch.radius, 2 * abs(start), 1.0)
    direction = start / abs(start) if start != 0 else 1
    return radius * direction


def abel_path(
    branch: BranchData, start: SheetedPoint, target_x: Coordinate, *, detour: bool = False
) -> IntegrationPath:
    """Admissible path from start to target_x, optionally opening with one loop around q1."""
    skip = [k for k in (branch.index_of(start.x), branch.index_of(target_x)) if k is not None]
    end = swap_point(branch, start.x) if target_x is INFINITY else target_x
    margin = local_margin(branch, (start.x, end), branch.margin, skip)
    waypoints = route(branch, start.x, end, margin, skip)
    if detour:
        waypoints = loop_around(branch, 0, start.x, margin) + waypoints[1:]
    if target_x is INFINITY:
        waypoints.append(INFINITY)
    return IntegrationPath(tuple(waypoints), start, margin)
