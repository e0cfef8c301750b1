# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import TYPE_CHECKING

import numpy as np

from .const import INDETERMINATE_TOLERANCE, INFINITY, LOGGER
from .errors import (
    DegeneratePencilError,
    DegeneratePointError,
    IndeterminatePointError,
    InfiniteKError,
    InvalidMapError,
)
from .projective import (
    Coordinate,
    ProjPoint,
    chordal_distance,
    from_homogeneous,
    monomials,
    point_distance,
    quadratic_roots,
    to_homogeneous,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

_LOGGER = LOGGER.getChild(__name__)

# base points closer than this (chordal) are one point
_BASE_POINT_MERGE = 1e-6
# resolvent roots of a cluster spread like eps**(1/m)
_ROOT_CLUSTER = 1e-4


def power_vector(c: Coordinate) -> np.ndarray:
    """(c^2, c, 1) for finite c; the leading-term selector (1, 0, 0) at infinity."""
    if c is INFINITY:
        return np.array([1, 0, 0], dtype=complex)
    return np.array([c * c, c, 1], dtype=complex)


def _as_matrix(value: Sequence[Sequence[complex]] | np.ndarray, name: str) -> np.ndarray:
    matrix = np.array(value, dtype=complex)
    if matrix.shape != (3, 3):
        msg = f"{name} must be a 3x3 matrix, got shape {matrix.shape}"
        raise ValueError(msg)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class Biquadratic:
    """Curve sum C[i][j] x^(2-i) y^(2-j) = 0."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coefficients = _as_matrix(self.coefficients, "coefficients")
        if not np.any(coefficients):
            msg = "Biquadratic coefficients vanish identically"
            raise ValueError(msg)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coefficients)))

    def __call__(self, x: Coordinate, y: Coordinate) -> complex:
        return complex(power_vector(x) @ self.coefficients @ power_vector(y))

    def y_coefficients(self, x: Coordinate) -> np.ndarray:
        """Coefficients (Y2, Y1, Y0) of the quadratic in y over x (leading-term chart at x = inf)."""
        return power_vector(x) @ self.coefficients

    def x_coefficients(self, y: Coordinate) -> np.ndarray:
        return self.coefficients @ power_vector(y)

    def y_roots(self, x: Coordinate) -> tuple[Coordinate, Coordinate]:
        return quadratic_roots(*self.y_coefficients(x))

    def residual(self, p: ProjPoint) -> float:
        """|P| at p in normalized homogeneous coordinates, relative to the coefficient scale."""
        value = monomials(p.x) @ self.coefficients @ monomials(p.y)
        return float(abs(value)) / self.scale

    def transposed(self) -> Biquadratic:
        return Biquadratic(self.coefficients.T)

    def in_x_chart(self) -> Biquadratic:
        """The same curve in the coordinate X = 1/x."""
        return Biquadratic(self.coefficients[::-1, :])

    def in_y_chart(self) -> Biquadratic:
        return Biquadratic(self.coefficients[:, ::-1])

    def __repr__(self) -> str:
        return f"Biquadratic({self.coefficients.tolist()!r})"


@dataclass(frozen=True, eq=False)
class QrtMap:
    A: np.ndarray
    B: np.ndarray
    check_pencil: InitVar[bool] = True

    def __post_init__(self, check_pencil: bool) -> None:  # noqa: FBT001
        a = _as_matrix(self.A, "A")
        b = _as_matrix(self.B, "B")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
        if scale == 0:
            msg = "A and B vanish identically"
            raise InvalidMapError(msg)
        if check_pencil and self.is_single_curve:
            msg = "A and B are proportional, the pencil is a single curve"
            raise InvalidMapError(msg)

    @property
    def is_single_curve(self) -> bool:
        stacked = np.vstack([self.A.ravel(), self.B.ravel()])
        scale = float(np.max(np.abs(stacked)))
        return int(np.linalg.matrix_rank(stacked, tol=INDETERMINATE_TOLERANCE * scale)) < 2  # noqa: PLR2004

    @property
    def scale(self) -> float:
        return float(max(np.max(np.abs(self.A)), np.max(np.abs(self.B))))

    def transposed(self) -> QrtMap:
        """The map with the roles of x and y exchanged."""
        return QrtMap(self.A.T, self.B.T, check_pencil=False)


def eval_pencil(qrt_map: QrtMap, p: ProjPoint, k: complex) -> complex:
    """x^T A y + K x^T B y; an infinite coordinate selects the leading term in that variable."""
    vx, vy = power_vector(p.x), power_vector(p.y)
    return complex(vx @ qrt_map.A @ vy + k * (vx @ qrt_map.B @ vy))


def compute_K(qrt_map: QrtMap, p0: ProjPoint) -> complex:  # noqa: N802
    """Value of K whose pencil member passes through p0."""
    vx, vy = monomials(p0.x), monomials(p0.y)
    on_a = complex(vx @ qrt_map.A @ vy)
    on_b = complex(vx @ qrt_map.B @ vy)
    if abs(on_b) <= INDETERMINATE_TOLERANCE * np.max(np.abs(qrt_map.B)):
        if abs(on_a) <= INDETERMINATE_TOLERANCE * np.max(np.abs(qrt_map.A)):
            raise DegeneratePointError
        raise InfiniteKError
    return -on_a / on_b


def fix_curve(qrt_map: QrtMap, k0: complex) -> Biquadratic:
    if k0 is INFINITY:
        return Biquadratic(qrt_map.B)
    return Biquadratic(qrt_map.A + k0 * qrt_map.B)


def snap_to_curve(curve: Biquadratic, p: ProjPoint) -> ProjPoint:
    """Keep x and replace y by the nearest root of P(x, .) = 0."""
    roots = curve.y_roots(p.x)
    y = min(roots, key=lambda r: chordal_distance(r, p.y))
    _LOGGER.debug("Snapped %s onto the curve (moved y by %.3g)", p, chordal_distance(y, p.y))
    return ProjPoint(p.x, y)


def _switch(first: np.ndarray, second: np.ndarray, c: Coordinate, scale: float, name: str) -> Coordinate:
    f = np.cross(first, second)
    c1, c0 = to_homogeneous(c)
    norm = max(abs(c1), abs(c0))
    c1, c0 = c1 / norm, c0 / norm
    num = f[0] * c0 - f[1] * c1
    den = f[1] * c0 - f[2] * c1
    if max(abs(num), abs(den)) <= INDETERMINATE_TOLERANCE * scale:
        raise IndeterminatePointError(name)
    return from_homogeneous(num, den)


def horizontal_switch(qrt_map: QrtMap, p: ProjPoint) -> ProjPoint:
    """Exchange x for the other intersection of the horizontal line through p with its pencil member."""
    vy = monomials(p.y)
    scale = float(np.max(np.abs(qrt_map.A)) * np.max(np.abs(qrt_map.B)))
    x = _switch(qrt_map.A @ vy, qrt_map.B @ vy, p.x, scale, "horizontal")
    return ProjPoint(x, p.y)


def vertical_switch(qrt_map: QrtMap, p: ProjPoint) -> ProjPoint:
    vx = monomials(p.x)
    scale = float(np.max(np.abs(qrt_map.A)) * np.max(np.abs(qrt_map.B)))
    y = _switch(qrt_map.A.T @ vx, qrt_map.B.T @ vx, p.y, scale, "vertical")
    return ProjPoint(p.x, y)


def qrt_step(qrt_map: QrtMap, p: ProjPoint) -> ProjPoint:
    return vertical_switch(qrt_map, horizontal_switch(qrt_map, p))


def qrt_step_inverse(qrt_map: QrtMap, p: ProjPoint) -> ProjPoint:
    return horizontal_switch(qrt_map, vertical_switch(qrt_map, p))


def iterate(qrt_map: QrtMap, p0: ProjPoint, n: int) -> list[ProjPoint]:
    """Orbit p0, p1, ..., p_n; negative n walks backwards with the inverse map."""
    step = qrt_step if n >= 0 else qrt_step_inverse
    orbit = [p0]
    for _ in range(abs(n)):
        orbit.append(step(qrt_map, orbit[-1]))
    return orbit


@dataclass(frozen=True)
class BasePoint:
    point: ProjPoint
    multiplicity: int


def _polynomial_rows(matrix: np.ndarray) -> list[np.ndarray]:
    # row i of matrix @ (y^2, y, 1) as a descending polynomial in y
    return [np.array(row, dtype=complex) for row in matrix]


def _cross_polynomials(u: list[np.ndarray], v: list[np.ndarray]) -> list[np.ndarray]:
    return [
        np.polysub(np.polymul(u[1], v[2]), np.polymul(u[2], v[1])),
        np.polysub(np.polymul(u[2], v[0]), np.polymul(u[0], v[2])),
        np.polysub(np.polymul(u[0], v[1]), np.polymul(u[1], v[0])),
    ]


def _padded(poly: np.ndarray, degree: int) -> np.ndarray:
    return np.concatenate([np.zeros(degree + 1 - len(poly), dtype=complex), poly])


def _resolvent_roots(a: np.ndarray, b: np.ndarray) -> list[Coordinate]:
    """Roots on CP^1 of f2^2 - f1 f3 with f = (A y) x (B y), counted with multiplicity (eight in all)."""
    f = _cross_polynomials(_polynomial_rows(a), _polynomial_rows(b))
    resolvent = _padded(np.polysub(np.polymul(f[1], f[1]), np.polymul(f[0], f[2])), 8)
    scale = float(np.max(np.abs(a)) * np.max(np.abs(b))) ** 2
    magnitude = np.abs(resolvent)
    if np.max(magnitude) <= INDETERMINATE_TOLERANCE * scale:
        msg = "Base-point resolvent vanishes identically"
        raise DegeneratePencilError(msg)
    nonzero = np.flatnonzero(magnitude > INDETERMINATE_TOLERANCE * np.max(magnitude))
    leading = int(nonzero[0])
    roots: list[Coordinate] = [complex(r) for r in np.roots(resolvent[leading:])]
    return roots + [INFINITY] * leading


def _cluster(values: list[Coordinate]) -> list[tuple[Coordinate, int]]:
    clusters: list[list[Coordinate]] = []
    for value in values:
        for cluster in clusters:
            if chordal_distance(cluster[0], value) < _ROOT_CLUSTER:
                cluster.append(value)
                break
        else:
            clusters.append([value])
    result = []
    for cluster in clusters:
        finite = [c for c in cluster if c is not INFINITY]
        if len(finite) == len(cluster) and finite:
            result.append((complex(np.mean(finite)), len(cluster)))
        elif not finite:
            result.append((INFINITY, len(cluster)))
        else:
            result.append((cluster[0], len(cluster)))
    return result


def _points_over(a: np.ndarray, b: np.ndarray, y: Coordinate) -> list[Coordinate]:
    """x-coordinates of base points over a resolvent root y."""
    vy = monomials(y)
    ay, by = a @ vy, b @ vy
    relative_a = np.linalg.norm(ay) / np.linalg.norm(a)
    relative_b = np.linalg.norm(by) / np.linalg.norm(b)
    f = np.cross(ay, by)
    transversal = np.linalg.norm(f) > _ROOT_CLUSTER * np.linalg.norm(ay) * np.linalg.norm(by)
    if min(relative_a, relative_b) > _ROOT_CLUSTER and transversal:
        if abs(f[2]) >= abs(f[0]):
            return [from_homogeneous(f[1], f[2])]
        return [from_homogeneous(f[0], f[1])]
    # A y and B y are parallel or one vanishes on the line: one quadratic condition on x remains
    row = ay if relative_a >= relative_b else by
    if max(relative_a, relative_b) <= _ROOT_CLUSTER:
        msg = "Pencil contains a whole line of base points"
        raise DegeneratePencilError(msg)
    return list(quadratic_roots(*row))


def _chart(c: Coordinate) -> tuple[complex, bool]:
    # work in 1/c when |c| > 1
    if c is INFINITY:
        return 0j, True
    if abs(c) > 1:
        return 1 / c, True
    return complex(c), False


def _uncharted(value: complex, flipped: bool) -> Coordinate:  # noqa: FBT001
    if not flipped:
        return value
    return INFINITY if value == 0 else 1 / value


def _polish(qrt_map: QrtMap, p: ProjPoint, iterations: int = 8) -> ProjPoint:
    """Newton on (x^T A y, x^T B y) = 0 in the chart where both coordinates are bounded."""
    x, flip_x = _chart(p.x)
    y, flip_y = _chart(p.y)
    a = qrt_map.A[::-1, :] if flip_x else qrt_map.A
    b = qrt_map.B[::-1, :] if flip_x else qrt_map.B
    if flip_y:
        a, b = a[:, ::-1], b[:, ::-1]

    def residual(x: complex, y: complex) -> np.ndarray:
        vx, vy = power_vector(x), power_vector(y)
        return np.array([vx @ a @ vy, vx @ b @ vy])

    best = residual(x, y)
    for _ in range(iterations):
        vx, vy = power_vector(x), power_vector(y)
        dvx = np.array([2 * x, 1, 0], dtype=complex)
        dvy = np.array([2 * y, 1, 0], dtype=complex)
        jacobian = np.array([[dvx @ a @ vy, vx @ a @ dvy], [dvx @ b @ vy, vx @ b @ dvy]])
        if np.linalg.cond(jacobian) > 1 / INDETERMINATE_TOLERANCE:
            break
        dx, dy = np.linalg.solve(jacobian, -best)
        trial = residual(x + dx, y + dy)
        if np.linalg.norm(trial) >= np.linalg.norm(best):
            break
        x, y, best = x + dx, y + dy, trial
    return ProjPoint(_uncharted(x, flip_x), _uncharted(y, flip_y))


def _side_candidates(
    a: np.ndarray, b: np.ndarray
) -> tuple[list[tuple[Coordinate, int]], list[tuple[Coordinate, Coordinate]]]:
    clusters = _cluster(_resolvent_roots(a, b))
    pairs = [(x, y) for y, _ in clusters for x in _points_over(a, b, y)]
    return clusters, pairs


def find_base_points(qrt_map: QrtMap) -> list[BasePoint]:
    """Points common to every member of the pencil, with multiplicities summing to eight."""
    y_clusters, y_pairs = _side_candidates(qrt_map.A, qrt_map.B)
    x_clusters, x_pairs = _side_candidates(qrt_map.A.T, qrt_map.B.T)

    points: list[ProjPoint] = []
    candidates = [ProjPoint(x, y) for x, y in y_pairs] + [ProjPoint(x, y) for y, x in x_pairs]
    for candidate in candidates:
        polished = _polish(qrt_map, candidate)
        if all(point_distance(polished, known) >= _BASE_POINT_MERGE for known in points):
            points.append(polished)

    constraints = [
        ([i for i, p in enumerate(points) if chordal_distance(p.y, y) < _ROOT_CLUSTER], count)
        for y, count in y_clusters
    ] + [
        ([i for i, p in enumerate(points) if chordal_distance(p.x, x) < _ROOT_CLUSTER], count)
        for x, count in x_clusters
    ]
    multiplicity: dict[int, int] = {}
    progress = True
    while progress:
        progress = False
        for members, count in constraints:
            unknown = [i for i in members if i not in multiplicity]
            if len(unknown) == 1:
                multiplicity[unknown[0]] = max(count - sum(multiplicity.get(i, 0) for i in members), 1)
                progress = True
    for i in range(len(points)):
        if i not in multiplicity:
            _LOGGER.debug("Multiplicity of base point %s not determined by clustering", points[i])
            multiplicity[i] = 1

    result = [BasePoint(p, multiplicity[i]) for i, p in enumerate(points)]
    _LOGGER.debug(
        "Found %d distinct base points, total multiplicity %d",
        len(result),
        sum(bp.multiplicity for bp in result),
    )
    return result


def pencil_residuals(qrt_map: QrtMap, p: ProjPoint) -> tuple[float, float]:
    """|x^T A y| and |x^T B y| in normalized homogeneous coordinates."""
    vx, vy = monomials(p.x), monomials(p.y)
    return float(abs(vx @ qrt_map.A @ vy)), float(abs(vx @ qrt_map.B @ vy))

