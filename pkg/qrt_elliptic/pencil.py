# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .const import (
    DEFAULT_MAX_MARKED_TRIALS,
    INDETERMINATE_TOLERANCE,
    INFINITY,
    LOGGER,
    ON_CURVE_TOLERANCE,
    SMOOTHNESS_TOLERANCE,
)
from .errors import DegenerateTransformError, ExhaustedSearchError, NotBiquadraticInYError
from .projective import Coordinate, ProjPoint, chordal_distance, from_homogeneous, to_homogeneous
from .qrt import Biquadratic

_LOGGER = LOGGER.getChild(__name__)

# coefficients below this fraction of the scale are exact zeros after normalization
_NORMALIZED_ZERO = 1e-9
# interpolation nodes: 2 * cube roots of unity
_NODES = 2 * np.exp(2j * np.pi * np.arange(3) / 3)
_SAMPLE_RADIUS = 2.0
_MIN_SEPARATION = 1e-3


@dataclass(frozen=True)
class QuarticPoly:
    """c0 + c1 x + c2 x^2 + c3 x^3 + c4 x^4."""

    c0: complex
    c1: complex
    c2: complex
    c3: complex
    c4: complex

    @classmethod
    def from_descending(cls, coefficients: np.ndarray) -> QuarticPoly:
        padded = np.concatenate([np.zeros(5 - len(coefficients), dtype=complex), coefficients])
        return cls(*(complex(c) for c in padded[::-1]))

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex, complex]:
        return (self.c0, self.c1, self.c2, self.c3, self.c4)

    def descending(self) -> np.ndarray:
        return np.array(self.coefficients[::-1], dtype=complex)

    @property
    def scale(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def __call__(self, x: complex) -> complex:
        return complex(np.polyval(self.descending(), x))


def partial_discriminant(curve: Biquadratic) -> QuarticPoly:
    """Discriminant in y of the curve, a quartic in x."""
    c = curve.coefficients
    y2, y1, y0 = c[:, 0], c[:, 1], c[:, 2]
    if not np.any(y2):
        raise NotBiquadraticInYError
    delta = np.polysub(np.polymul(y1, y1), 4 * np.polymul(y2, y0))
    return QuarticPoly.from_descending(delta)


def eisenstein_invariants(q: QuarticPoly) -> tuple[complex, complex, complex]:
    c0, c1, c2, c3, c4 = q.coefficients
    g2 = c0 * c4 - c1 * c3 / 4 + c2 * c2 / 12
    g3 = -(c0 * c3 * c3 / 16 + c1 * c1 * c4 / 16 - c0 * c2 * c4 / 6 - c1 * c2 * c3 / 48 + c2**3 / 216)
    return g2, g3, g2**3 - 27 * g3 * g3


def smoothness_ratio(q: QuarticPoly) -> float:
    """|g2^3 - 27 g3^2| / (|g2|^3 + 27 |g3|^2), unchanged by scaling and by Moebius maps of x."""
    g2, g3, discriminant = eisenstein_invariants(q)
    denominator = abs(g2) ** 3 + 27 * abs(g3) ** 2
    if denominator == 0:
        return 0.0
    return abs(discriminant) / denominator


def is_smooth(curve: Biquadratic) -> bool:
    ratio = smoothness_ratio(partial_discriminant(curve))
    _LOGGER.debug("Smoothness ratio %.3g (tolerance %.3g)", ratio, SMOOTHNESS_TOLERANCE)
    return ratio > SMOOTHNESS_TOLERANCE


@dataclass(frozen=True)
class MoebiusPair:
    """Marked points p1 = (a1, b1) and p2 = (a2, b2); rho sends p1 to (inf, inf) and p2 to (0, 0)."""

    a1: Coordinate
    b1: Coordinate
    a2: complex
    b2: complex

    def __post_init__(self) -> None:
        if self.a2 is INFINITY or self.b2 is INFINITY:
            msg = "Second marked point must be finite"
            raise ValueError(msg)
        if min(chordal_distance(self.a1, self.a2), chordal_distance(self.b1, self.b2)) < ON_CURVE_TOLERANCE:
            msg = "Marked points must differ in both coordinates"
            raise ValueError(msg)

    @classmethod
    def identity(cls) -> MoebiusPair:
        return cls(INFINITY, INFINITY, 0j, 0j)

    @property
    def is_identity(self) -> bool:
        return self.a1 is INFINITY and self.b1 is INFINITY and self.a2 == 0 and self.b2 == 0

    @property
    def first(self) -> ProjPoint:
        return ProjPoint(self.a1, self.b1)

    @property
    def second(self) -> ProjPoint:
        return ProjPoint(self.a2, self.b2)


def _forward_matrix(pole: Coordinate, zero: complex) -> np.ndarray:
    # t -> (t - zero) / (t - pole) acting on homogeneous pairs
    if pole is INFINITY:
        return np.array([[1, -zero], [0, 1]], dtype=complex)
    return np.array([[1, -zero], [1, -pole]], dtype=complex)


def _inverse_matrix(pole: Coordinate, zero: complex) -> np.ndarray:
    m = _forward_matrix(pole, zero)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)


def _apply(matrix: np.ndarray, c: Coordinate) -> Coordinate:
    num, den = matrix @ np.array(to_homogeneous(c))
    return from_homogeneous(num, den)


def apply_rho(pair: MoebiusPair, p: ProjPoint) -> ProjPoint:
    return ProjPoint(_apply(_forward_matrix(pair.a1, pair.a2), p.x), _apply(_forward_matrix(pair.b1, pair.b2), p.y))


def apply_rho_inv(pair: MoebiusPair, p: ProjPoint) -> ProjPoint:
    return ProjPoint(_apply(_inverse_matrix(pair.a1, pair.a2), p.x), _apply(_inverse_matrix(pair.b1, pair.b2), p.y))


def _vandermonde(nodes: np.ndarray) -> np.ndarray:
    return np.vander(nodes, 3)


def _pulled_back(inverse: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Rows (n^2, n d, d^2) for the homogeneous preimages (n, d) of the nodes."""
    pairs = inverse @ np.vstack([nodes, np.ones_like(nodes)])
    num, den = pairs
    return np.stack([num * num, num * den, den * den], axis=1)


def moebius_normalize(curve: Biquadratic, pair: MoebiusPair) -> tuple[Biquadratic, MoebiusPair]:
    """Coefficients of the curve in the coordinates of rho, cleared of denominators."""
    for point in (pair.first, pair.second):
        residual = curve.residual(point)
        if residual > ON_CURVE_TOLERANCE:
            msg = f"Marked point {point} is not on the curve (residual {residual:.3g})"
            raise DegenerateTransformError(msg)

    rows_x = _pulled_back(_inverse_matrix(pair.a1, pair.a2), _NODES)
    rows_y = _pulled_back(_inverse_matrix(pair.b1, pair.b2), _NODES)
    values = rows_x @ curve.coefficients @ rows_y.T
    vandermonde = _vandermonde(_NODES)
    partial = np.linalg.solve(vandermonde, values)
    coefficients = np.linalg.solve(vandermonde, partial.T).T

    scale = float(np.max(np.abs(coefficients)))
    for corner in ((0, 0), (2, 2)):
        if abs(coefficients[corner]) > _NORMALIZED_ZERO * scale:
            msg = f"Normalized curve keeps coefficient {corner} = {coefficients[corner]}"
            raise DegenerateTransformError(msg)
        coefficients[corner] = 0
    normalized = Biquadratic(coefficients)
    _check_guards(normalized)
    return normalized, pair


_GUARDS = {"a21": (0, 1), "a12": (1, 0), "a20": (0, 2), "a02": (2, 0), "a10": (1, 2), "a01": (2, 1)}


def _check_guards(normalized: Biquadratic) -> None:
    c = normalized.coefficients
    for name, index in _GUARDS.items():
        if abs(c[index]) <= ON_CURVE_TOLERANCE * normalized.scale:
            msg = f"Normalized coefficient {name} vanishes"
            raise DegenerateTransformError(msg)


def is_normalized(curve: Biquadratic) -> bool:
    c = curve.coefficients
    tolerance = INDETERMINATE_TOLERANCE * curve.scale
    return abs(c[0, 0]) <= tolerance and abs(c[2, 2]) <= tolerance


@dataclass(frozen=True)
class MarkedPoints:
    """Second intersections of a normalized curve with the lines x = inf, y = inf, x = 0, y = 0."""

    y1: complex
    x1: complex
    x2: complex
    y2: complex


def marked_points(normalized: Biquadratic) -> MarkedPoints:
    c = normalized.coefficients
    return MarkedPoints(
        y1=complex(-c[0, 2] / c[0, 1]),
        x1=complex(-c[2, 0] / c[1, 0]),
        x2=complex(-c[1, 2] / c[0, 2]),
        y2=complex(-c[2, 1] / c[2, 0]),
    )


def sample_points(curve: Biquadratic, seed: int, count: int, *, stream: int = 0) -> list[ProjPoint]:
    """Curve points over a seeded Halton sample of x in a disc around the root centroid of the discriminant."""
    quartic = partial_discriminant(curve)
    center = -quartic.c3 / (4 * quartic.c4) if quartic.c4 != 0 else 0j
    sampler = qmc.Halton(d=2, scramble=True, seed=np.random.default_rng([seed, stream]))
    points = []
    for radial, angular in sampler.random(count):
        x = center + _SAMPLE_RADIUS * math.sqrt(radial) * cmath.exp(2j * math.pi * angular)
        y2, y1, y0 = curve.y_coefficients(x)
        discriminant = y1 * y1 - 4 * y2 * y0
        if abs(y2) <= ON_CURVE_TOLERANCE * curve.scale or abs(discriminant) <= ON_CURVE_TOLERANCE * curve.scale**2:
            continue
        points.extend(ProjPoint(x, y) for y in curve.y_roots(x))
    return points


def _admissible(curve: Biquadratic, pair: MoebiusPair) -> bool:
    try:
        normalized, _ = moebius_normalize(curve, pair)
    except DegenerateTransformError:
        return False
    return partial_discriminant(normalized).c4 != 0


def choose_marked_points(
    curve: Biquadratic, seed: int, *, max_trials: int = DEFAULT_MAX_MARKED_TRIALS
) -> MoebiusPair:
    if is_normalized(curve):
        identity = MoebiusPair.identity()
        if _admissible(curve, identity):
            _LOGGER.debug("Curve already passes through (inf, inf) and (0, 0)")
            return identity

    candidates = sample_points(curve, seed, max_trials)
    trials = 0
    for i, first in enumerate(candidates):
        for second in candidates[i + 1 : i + 9]:
            trials += 1
            if min(chordal_distance(first.x, second.x), chordal_distance(first.y, second.y)) < _MIN_SEPARATION:
                continue
            pair = MoebiusPair(first.x, first.y, complex(second.x), complex(second.y))
            if _admissible(curve, pair):
                _LOGGER.debug("Marked points %s and %s after %d trials", pair.first, pair.second, trials)
                return pair
            if trials >= max_trials:
                raise ExhaustedSearchError(trials)
    raise ExhaustedSearchError(trials)
