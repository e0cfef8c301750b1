# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeAlias

import numpy as np

from .const import INFINITY, Infinity

if TYPE_CHECKING:
    from collections.abc import Iterator

Coordinate: TypeAlias = complex | Infinity

# |den| below this fraction of |num| is read as a pole
_POLE_RATIO = 1e-16


def is_infinite(c: Coordinate) -> bool:
    return c is INFINITY


def as_coordinate(value: complex | float | Infinity | None) -> Coordinate:
    if value is None or value is INFINITY:
        return INFINITY
    c = complex(value)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        return INFINITY
    return c


def to_homogeneous(c: Coordinate) -> tuple[complex, complex]:
    if c is INFINITY:
        return 1 + 0j, 0j
    return complex(c), 1 + 0j


def from_homogeneous(num: complex, den: complex) -> Coordinate:
    if den == 0 or abs(den) <= _POLE_RATIO * abs(num):
        return INFINITY
    return num / den


def monomials(c: Coordinate) -> np.ndarray:
    """(c1^2, c1 c0, c0^2) for the homogeneous pair of c, scaled so the largest of |c1|, |c0| is one."""
    c1, c0 = to_homogeneous(c)
    scale = max(abs(c1), abs(c0))
    c1, c0 = c1 / scale, c0 / scale
    return np.array([c1 * c1, c1 * c0, c0 * c0], dtype=complex)


def chordal_distance(a: Coordinate, b: Coordinate) -> float:
    a1, a0 = to_homogeneous(a)
    b1, b0 = to_homogeneous(b)
    return abs(a1 * b0 - a0 * b1) / (math.hypot(abs(a1), abs(a0)) * math.hypot(abs(b1), abs(b0)))


def quadratic_roots(a: complex, b: complex, c: complex, *, rtol: float = 1e-14) -> tuple[Coordinate, Coordinate]:
    """Both roots of a t^2 + b t + c on CP^1; a vanishing leading coefficient puts roots at infinity."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0:
        msg = "Quadratic vanishes identically"
        raise ValueError(msg)
    if abs(a) <= rtol * scale:
        if abs(b) <= rtol * scale:
            return INFINITY, INFINITY
        return -c / b, INFINITY
    disc = np.sqrt(complex(b * b - 4 * a * c))
    plus, minus = b + disc, b - disc
    q = -0.5 * (plus if abs(plus) >= abs(minus) else minus)
    if q == 0:
        return 0j, 0j
    return q / a, c / q


def format_coordinate(c: Coordinate, digits: int = 6) -> str:
    if c is INFINITY:
        return "inf"
    return f"{c.real:.{digits}g}{c.imag:+.{digits}g}i"


@dataclass(frozen=True, slots=True)
class ProjPoint:
    """A point of CP^1 x CP^1."""

    x: Coordinate
    y: Coordinate

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", as_coordinate(self.x))
        object.__setattr__(self, "y", as_coordinate(self.y))

    def __iter__(self) -> Iterator[Coordinate]:
        yield self.x
        yield self.y

    @property
    def is_finite(self) -> bool:
        return self.x is not INFINITY and self.y is not INFINITY

    def __str__(self) -> str:
        return f"({format_coordinate(self.x)}, {format_coordinate(self.y)})"


def point_distance(p: ProjPoint, q: ProjPoint) -> float:
    return max(chordal_distance(p.x, q.x), chordal_distance(p.y, q.y))
