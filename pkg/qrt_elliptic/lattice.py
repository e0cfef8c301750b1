# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import cmath
import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLatticeError

_DEGENERATE = 1e-10


def _oriented_area(w1: complex, w2: complex) -> float:
    return (w1.conjugate() * w2).imag


@dataclass(frozen=True)
class Lattice:
    """Period lattice Z w1 + Z w2 with the quasi-period constants of its sigma function."""

    w1: complex
    w2: complex
    eta1: complex | None = None
    eta2: complex | None = None

    def __post_init__(self) -> None:
        if abs(_oriented_area(self.w1, self.w2)) <= _DEGENERATE * abs(self.w1) * abs(self.w2):
            raise DegenerateLatticeError

    @property
    def tau(self) -> complex:
        return self.w2 / self.w1

    @property
    def q_nome(self) -> complex:
        return cmath.exp(1j * cmath.pi * self.tau)

    @property
    def is_oriented(self) -> bool:
        return self.tau.imag > 0

    def coordinates(self, u: complex) -> tuple[float, float]:
        """Real (a, b) with u = a w1 + b w2."""
        area = _oriented_area(self.w1, self.w2)
        return _oriented_area(u, self.w2) / area, _oriented_area(self.w1, u) / area

    def reduce(self, u: complex) -> tuple[complex, tuple[int, int]]:
        a, b = self.coordinates(u)
        m, n = round(a), round(b)
        return u - m * self.w1 - n * self.w2, (m, n)

    def distance_to_lattice(self, u: complex) -> float:
        """|u - L| for the nearest lattice vector among the rounded coordinates and their neighbours."""
        a, b = self.coordinates(u)
        m, n = round(a), round(b)
        return min(
            abs(u - (m + i) * self.w1 - (n + j) * self.w2) for i in (-1, 0, 1) for j in (-1, 0, 1)
        )

    def change_of_basis(self, v1: complex, v2: complex) -> np.ndarray:
        """Matrix whose rows are the coordinates of v1 and v2 in this basis."""
        return np.array([self.coordinates(v1), self.coordinates(v2)])

    def generated_by(self, v1: complex, v2: complex, *, tol: float = 1e-3) -> bool:
        matrix = self.change_of_basis(v1, v2)
        integral = np.all(np.abs(matrix - np.round(matrix)) < tol)
        return bool(integral) and abs(round(float(np.linalg.det(np.round(matrix))))) == 1

    def scaled(self, factor: complex) -> Lattice:
        return Lattice(
            self.w1 * factor,
            self.w2 * factor,
            None if self.eta1 is None else self.eta1 / factor,
            None if self.eta2 is None else self.eta2 / factor,
        )

    def with_eta(self, eta1: complex, eta2: complex) -> Lattice:
        return dataclasses.replace(self, eta1=eta1, eta2=eta2)


def reduce_mod_lattice(u: complex, lattice: Lattice) -> tuple[complex, tuple[int, int]]:
    return lattice.reduce(u)


def reduce_basis(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Lagrange-Gauss reduced basis of the same lattice with Im(w2/w1) > 0."""
    if abs(_oriented_area(w1, w2)) <= _DEGENERATE * abs(w1) * abs(w2):
        raise DegenerateLatticeError
    while True:
        if abs(w2) < abs(w1):
            w1, w2 = w2, w1
        m = round((w2 / w1).real)
        if m == 0:
            break
        w2 -= m * w1
    if abs(w2) < abs(w1):
        w1, w2 = w2, w1
    if (w2 / w1).imag < 0:
        w2 = -w2
    return w1, w2
