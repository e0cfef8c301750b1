# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..const import INFINITY, LOGGER, QUADRATURE_TOLERANCE  # noqa: TID252
from .branch import BranchData, SheetedPoint, point_on_sheet, sheet_value
from .errors import PathTooCloseToBranchPointError, StepCollapseError
from .paths import IntegrationPath, segment_distance

if TYPE_CHECKING:
    from collections.abc import Callable

    from ..qrt import Biquadratic  # noqa: TID252

_LOGGER = LOGGER.getChild(__name__)

_GAUSS_LOW = np.polynomial.legendre.leggauss(10)
_GAUSS_HIGH = np.polynomial.legendre.leggauss(20)
_INITIAL_STEPS = 64
_MIN_STEP = 2.0**-20
# halve while the two square roots are closer than this many step drifts
_DRIFT_RATIO = 10.0


def _gauss(
    rule: tuple[np.ndarray, np.ndarray], t0: float, t1: float, integrand: Callable[[np.ndarray], np.ndarray]
) -> complex:
    nodes, weights = rule
    half = (t1 - t0) / 2
    return complex(half * np.sum(weights * integrand((t0 + t1) / 2 + half * nodes)))


def _panel(
    square: Callable[[np.ndarray], np.ndarray],
    jacobian: complex,
    interval: tuple[float, float],
    states: tuple[complex, complex],
) -> tuple[complex, complex]:
    """10- and 20-node Gauss sums over one panel; node roots follow the linear interpolation of the end states."""
    t0, t1 = interval
    s0, s1 = states

    def integrand(nodes: np.ndarray) -> np.ndarray:
        reference = s0 + (s1 - s0) * (nodes - t0) / (t1 - t0)
        roots = np.sqrt(np.asarray(square(nodes), dtype=complex))
        roots = np.where(np.abs(roots - reference) <= np.abs(roots + reference), roots, -roots)
        return jacobian / roots

    return _gauss(_GAUSS_LOW, t0, t1, integrand), _gauss(_GAUSS_HIGH, t0, t1, integrand)


def continue_integral(
    square: Callable[[np.ndarray], np.ndarray],
    jacobian: complex,
    state: complex,
    t0: float = 0.0,
    t1: float = 1.0,
) -> tuple[complex, complex, int]:
    """
    Integrate jacobian / g(t) dt from t0 to t1, where g^2 = square(t) and g is continued from g(t0) = state.

    Returns the integral, g(t1) and the number of accepted panels.
    """
    span = abs(t1 - t0)
    direction = 1.0 if t1 >= t0 else -1.0
    h_max = span / _INITIAL_STEPS
    h_min = span * _MIN_STEP
    h = h_max
    t = t0
    total = 0j
    panels = 0
    previous: tuple[complex, float] | None = None
    while direction * (t1 - t) > span * 1e-15:
        h = min(h, abs(t1 - t))
        t_next = t + direction * h
        predicted = state if previous is None else state + (state - previous[0]) * h / previous[1]
        root = complex(np.sqrt(complex(square(np.array([t_next]))[0])))
        candidate = root if abs(root - predicted) <= abs(root + predicted) else -root
        drift = abs(candidate - state)

        accepted = 2 * abs(root) >= _DRIFT_RATIO * drift
        if accepted:
            low, high = _panel(square, jacobian, (t, t_next), (state, candidate))
            floor = abs(jacobian) * h / max(abs(state), abs(candidate))
            accepted = abs(high - low) <= QUADRATURE_TOLERANCE * max(abs(high), floor)

        if not accepted:
            h /= 2
            if h < h_min:
                raise StepCollapseError(t)
            continue

        total += high
        previous = (state, h)
        state = candidate
        t = t_next
        panels += 1
        h = min(2 * h, h_max)
    return total, state, panels


def _check_margin(branch: BranchData, path: IntegrationPath, start_index: int | None, end_index: int | None) -> None:
    """Every finite segment keeps the path margin from the branch points it is not anchored at."""
    points = path.waypoints
    last = len(points) - 2
    for i, (a, b) in enumerate(zip(points, points[1:], strict=False)):
        if a is INFINITY or b is INFINITY:
            continue
        for k, q in enumerate(branch.roots):
            if (i == 0 and k == start_index) or (i == last and k == end_index):
                continue
            distance = segment_distance(a, b, q)
            if distance < path.margin * (1 - 1e-9):
                raise PathTooCloseToBranchPointError(k, distance, path.margin)


def _regular(branch: BranchData, a: complex, b: complex, state: complex) -> tuple[complex, complex, int]:
    return continue_integral(lambda t: branch.delta(a + (b - a) * t), b - a, state)


def _from_branch_point(branch: BranchData, index: int, b: complex) -> tuple[complex, complex, int]:
    # x = q + (b - q) t^2 removes the square-root singularity at t = 0
    q = branch.roots[index]

    def square(t: np.ndarray) -> np.ndarray:
        return (b - q) * branch.delta_without(index, q + (b - q) * t * t)

    initial = complex(np.sqrt(complex(square(np.array([0.0]))[0])))
    return continue_integral(square, 2 * (b - q), initial)


def _to_branch_point(branch: BranchData, a: complex, index: int, state: complex) -> tuple[complex, complex, int]:
    q = branch.roots[index]

    def square(t: np.ndarray) -> np.ndarray:
        return (a - q) * branch.delta_without(index, q + (a - q) * t * t)

    return continue_integral(square, 2 * (a - q), state, 1.0, 0.0)


def _to_infinity(branch: BranchData, a: complex, state: complex) -> tuple[complex, complex, int]:
    # dx / s = -dX / S with X = 1/x and S = X^2 s
    x_inv = 1 / a
    return continue_integral(lambda t: branch.chart_delta(x_inv * (1 - t)), x_inv, state * x_inv * x_inv)


def track_integral(curve: Biquadratic, branch: BranchData, path: IntegrationPath) -> tuple[complex, SheetedPoint]:
    """Integral of dx / P_y along the path with the sheet continued from its start."""
    points = list(path.waypoints)
    segments = list(zip(points, points[1:], strict=False))
    start_index = branch.index_of(points[0])
    end_index = branch.index_of(points[-1])
    _check_margin(branch, path, start_index, end_index)

    state = 0j if start_index is not None else sheet_value(curve, path.start)
    total = 0j
    panels = 0
    for i, (a, b) in enumerate(segments):
        first = i == 0 and start_index is not None
        last = i == len(segments) - 1 and end_index is not None
        if b is INFINITY:
            value, state, count = _to_infinity(branch, a, state)
            total += value
            panels += count
            _LOGGER.debug("Integrated %d segments to inf with %d panels", len(segments), panels)
            return total, point_on_sheet(curve, INFINITY, state)
        if a == b:
            continue
        pieces: list[tuple[complex, complex, int]] = []
        if first and last:
            middle = (a + b) / 2
            pieces.append(_from_branch_point(branch, start_index, middle))
            state = pieces[-1][1]
            pieces.append(_to_branch_point(branch, middle, end_index, state))
        elif first:
            pieces.append(_from_branch_point(branch, start_index, b))
        elif last:
            pieces.append(_to_branch_point(branch, a, end_index, state))
        else:
            pieces.append(_regular(branch, a, b, state))
        for value, end_state, count in pieces:
            total += value
            state = end_state
            panels += count
    _LOGGER.debug("Integrated %d segments with %d panels", len(segments), panels)
    end_x = points[-1]
    if end_index is not None:
        return total, point_on_sheet(curve, end_x, 0j)
    return total, point_on_sheet(curve, end_x, state)
