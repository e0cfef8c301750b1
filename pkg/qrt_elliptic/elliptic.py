# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from .const import LOGGER
from .errors import PoleAtUError, TauNotInUpperHalfPlaneError
from .lattice import Lattice, reduce_basis

_LOGGER = LOGGER.getChild(__name__)

_SERIES_TOLERANCE = 1e-17
_MAX_TERMS = 400
_POLE_TOLERANCE = 1e-10
_BALANCE_TOLERANCE = 1e-10


class Bracket(StrEnum):
    """Quasi-periodic building block [u] of the elliptic factors."""

    SIGMA = "sigma"
    THETA = "theta"


def _check_tau(tau: complex) -> None:
    if not tau.imag > 0:
        raise TauNotInUpperHalfPlaneError(tau)


def _theta_series(z: complex, tau: complex) -> complex:
    if z == 0:
        return 0j
    total = 0j
    largest = 0.0
    growth = abs(z.imag)
    for n in range(_MAX_TERMS):
        nome_power = cmath.exp(1j * cmath.pi * tau * (n + 0.5) ** 2)
        term = (-1) ** n * nome_power * cmath.sin((2 * n + 1) * z)
        total += term
        largest = max(largest, abs(term))
        bound = abs(nome_power) * math.exp((2 * n + 1) * growth)
        if n > 1 and bound < _SERIES_TOLERANCE * largest:
            break
    return 2 * total


def _reduce_argument(z: complex, tau: complex) -> tuple[complex, int, int]:
    """z = z0 + k pi + j pi tau with z0 in the fundamental cell."""
    j = round(z.imag / (math.pi * tau.imag))
    shifted = z - j * math.pi * tau
    k = round(shifted.real / math.pi)
    return shifted - k * math.pi, k, j


def theta1(z: complex, tau: complex) -> complex:
    """Odd theta function 2 sum (-1)^n q^((n+1/2)^2) sin((2n+1) z) with q = exp(i pi tau)."""
    _check_tau(tau)
    z0, k, j = _reduce_argument(complex(z), complex(tau))
    factor = (-1) ** (j + k) * cmath.exp(-1j * math.pi * tau * j * j - 2j * j * z0)
    return factor * _theta_series(z0, tau)


def _log_theta1(z: complex, tau: complex) -> complex:
    z0, k, j = _reduce_argument(complex(z), complex(tau))
    return 1j * math.pi * (j + k) - 1j * math.pi * tau * j * j - 2j * j * z0 + cmath.log(_theta_series(z0, tau))


def theta1_derivatives_at_zero(tau: complex) -> tuple[complex, complex]:
    """First and third z-derivatives of theta1 at z = 0."""
    _check_tau(tau)
    first = third = 0j
    for n in range(_MAX_TERMS):
        nome_power = (-1) ** n * cmath.exp(1j * cmath.pi * tau * (n + 0.5) ** 2)
        first += nome_power * (2 * n + 1)
        third += nome_power * (2 * n + 1) ** 3
        if n > 1 and abs(nome_power) * (2 * n + 1) ** 3 < _SERIES_TOLERANCE * abs(third):
            break
    return 2 * first, -2 * third


def _oriented(lattice: Lattice) -> tuple[complex, complex, int]:
    sign = 1 if lattice.is_oriented else -1
    return lattice.w1, sign * lattice.w2, sign


def eta_constants(lat: Lattice) -> tuple[complex, complex]:
    """Quasi-periods eta_j = zeta(w_j / 2) of the lattice basis."""
    w1, w2, sign = _oriented(lat)
    first, third = theta1_derivatives_at_zero(w2 / w1)
    eta1 = -(math.pi**2) * third / (6 * w1 * first)
    # Legendre relation eta1 w2 - eta2 w1 = pi i for Im(w2 / w1) > 0
    eta2 = (eta1 * lat.w2 - sign * 1j * math.pi) / w1
    return eta1, eta2


def build_lattice(w1: complex, w2: complex) -> Lattice:
    """Reduced, oriented lattice with its quasi-periods."""
    w1, w2 = reduce_basis(w1, w2)
    lattice = Lattice(w1, w2)
    eta1, eta2 = eta_constants(lattice)
    lattice = lattice.with_eta(eta1, eta2)
    _LOGGER.debug("Lattice w1=%s w2=%s tau=%s", w1, w2, lattice.tau)
    return lattice


def legendre_residual(lat: Lattice) -> float:
    eta1, eta2 = (lat.eta1, lat.eta2) if lat.eta1 is not None else eta_constants(lat)
    sign = 1 if lat.is_oriented else -1
    return abs(eta1 * lat.w2 - eta2 * lat.w1 - sign * 1j * math.pi)


def lattice_invariants_eisenstein(lat: Lattice) -> tuple[complex, complex]:
    """g2 = 60 sum' L^-4 and g3 = 140 sum' L^-6 through the q-expansions of E4 and E6."""
    w1, w2, _ = _oriented(lat)
    q2 = cmath.exp(2j * math.pi * w2 / w1)
    e4 = e6 = 0j
    for n in range(1, 10 * _MAX_TERMS):
        power = q2**n
        ratio = power / (1 - power)
        e4 += n**3 * ratio
        e6 += n**5 * ratio
        if abs(n**5 * ratio) < _SERIES_TOLERANCE * max(abs(e6), 1.0):
            break
    g2 = 4 * math.pi**4 / (3 * w1**4) * (1 + 240 * e4)
    g3 = 8 * math.pi**6 / (27 * w1**6) * (1 - 504 * e6)
    return g2, g3


def sigma_product(u: complex, lattice: Lattice, n_max: int = 60) -> complex:
    """Weierstrass product over |m|, |n| <= n_max; slow, kept as a reference."""
    m, n = np.meshgrid(np.arange(-n_max, n_max + 1), np.arange(-n_max, n_max + 1))
    mask = (m != 0) | (n != 0)
    periods = m[mask] * lattice.w1 + n[mask] * lattice.w2
    ratio = u / periods
    return complex(u * np.exp(np.sum(np.log1p(-ratio) + ratio + ratio * ratio / 2)))


class SigmaEvaluator:
    """Weierstrass sigma of a lattice through its theta connection; immutable after construction."""

    def __init__(self, lattice: Lattice, bracket: Bracket = Bracket.SIGMA) -> None:
        self._logger = LOGGER.getChild(self.__class__.__name__)
        self.swapped = not lattice.is_oriented
        if self.swapped:
            lattice = Lattice(lattice.w2, lattice.w1)
        if lattice.eta1 is None or self.swapped:
            lattice = lattice.with_eta(*eta_constants(lattice))
        self.lattice = lattice
        self.bracket = Bracket(bracket)
        self.tau = lattice.tau
        _check_tau(self.tau)
        self.q_nome = lattice.q_nome
        product = 0j
        for n in range(1, _MAX_TERMS):
            term = cmath.log(1 - self.q_nome ** (2 * n))
            product += term
            if abs(term) < _SERIES_TOLERANCE:
                break
        self.series_terms = n
        self._log_prefactor = (
            cmath.log(lattice.w1 / math.pi) + math.log(0.5) - 1j * math.pi * self.tau / 4 - 3 * product
        )
        self._logger.debug("Sigma evaluator for tau=%s (%d product terms)", self.tau, self.series_terms)

    def _log_sigma_reduced(self, u: complex) -> complex:
        lat = self.lattice
        return self._log_prefactor + lat.eta1 * u * u / lat.w1 + _log_theta1(math.pi * u / lat.w1, self.tau)

    def log_sigma(self, u: complex) -> complex:
        """log sigma(u) on some branch; u must not lie on the lattice."""
        lat = self.lattice
        reduced, (m, n) = lat.reduce(u)
        shift = m * lat.w1 + n * lat.w2
        return (
            self._log_sigma_reduced(reduced)
            + 1j * math.pi * (m + n + m * n)
            + 2 * (m * lat.eta1 + n * lat.eta2) * (reduced + shift / 2)
        )

    def sigma(self, u: complex) -> complex:
        lat = self.lattice
        reduced, (m, n) = lat.reduce(u)
        if reduced == 0:
            return 0j
        shift = m * lat.w1 + n * lat.w2
        value = cmath.exp(self._log_prefactor + lat.eta1 * reduced * reduced / lat.w1)
        value *= theta1(math.pi * reduced / lat.w1, self.tau)
        return value * (-1) ** (m + n + m * n) * cmath.exp(2 * (m * lat.eta1 + n * lat.eta2) * (reduced + shift / 2))

    def log_bracket(self, u: complex) -> complex:
        if self.bracket is Bracket.SIGMA:
            return self.log_sigma(u)
        return _log_theta1(math.pi * u / self.lattice.w1, self.tau)

    def on_lattice(self, u: complex) -> bool:
        lat = self.lattice
        return lat.distance_to_lattice(u) <= _POLE_TOLERANCE * min(abs(lat.w1), abs(lat.w2))


def sigma(u: complex, ev: SigmaEvaluator) -> complex:
    return ev.sigma(u)


def F_factor(  # noqa: N802, PLR0913
    u: complex,
    alpha: complex,
    beta: complex,
    gamma: complex,
    delta: complex,
    ev: SigmaEvaluator,
) -> complex:
    """[u-alpha][u-beta] / ([u-gamma][u-delta]), elliptic when alpha + beta = gamma + delta."""
    imbalance = abs(alpha + beta - gamma - delta)
    if imbalance > _BALANCE_TOLERANCE * max(abs(alpha), abs(beta), abs(gamma), abs(delta), 1.0):
        msg = f"Unbalanced elliptic factor (alpha + beta - gamma - delta = {imbalance:.3g})"
        raise ValueError(msg)
    if ev.on_lattice(u - gamma) or ev.on_lattice(u - delta):
        raise PoleAtUError(u)
    if ev.on_lattice(u - alpha) or ev.on_lattice(u - beta):
        return 0j
    return cmath.exp(
        ev.log_bracket(u - alpha) + ev.log_bracket(u - beta) - ev.log_bracket(u - gamma) - ev.log_bracket(u - delta)
    )


@dataclass(frozen=True)
class EmbeddingParams:
    e1: complex
    e2: complex
    h_x: complex
    h_y: complex
    c1: complex = 1
    c2: complex = 1


def F12(u: complex, p: EmbeddingParams, ev: SigmaEvaluator) -> complex:  # noqa: N802
    return F_factor(u, p.e2, p.h_x - p.e2, p.e1, p.h_x - p.e1, ev)


def G12(u: complex, p: EmbeddingParams, ev: SigmaEvaluator) -> complex:  # noqa: N802
    return F_factor(u, p.e2, p.h_y - p.e2, p.e1, p.h_y - p.e1, ev)
