# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from qrt_elliptic.elliptic import (
    F12,
    G12,
    Bracket,
    EmbeddingParams,
    F_factor,
    SigmaEvaluator,
    build_lattice,
    eta_constants,
    lattice_invariants_eisenstein,
    legendre_residual,
    sigma_product,
    theta1,
)
from qrt_elliptic.errors import DegenerateLatticeError, PoleAtUError, TauNotInUpperHalfPlaneError
from qrt_elliptic.lattice import Lattice, reduce_basis, reduce_mod_lattice

TAU = 0.3 + 1.1j
Z = 0.4 - 0.25j


@pytest.fixture
def lattice() -> Lattice:
    return build_lattice(1 + 0j, TAU)


@pytest.fixture
def evaluator(lattice: Lattice) -> SigmaEvaluator:
    return SigmaEvaluator(lattice)


def test_theta1_is_odd() -> None:
    assert theta1(-Z, TAU) == pytest.approx(-theta1(Z, TAU), rel=1e-12)


def test_theta1_quasi_periodicity() -> None:
    value = theta1(Z, TAU)
    assert theta1(Z + math.pi, TAU) == pytest.approx(-value, rel=1e-12)
    shifted = -cmath.exp(-1j * math.pi * TAU - 2j * Z) * value
    assert theta1(Z + math.pi * TAU, TAU) == pytest.approx(shifted, rel=1e-10)


def test_theta1_needs_upper_half_plane() -> None:
    with pytest.raises(TauNotInUpperHalfPlaneError):
        theta1(Z, 0.3 - 1j)


def test_sigma_is_odd_and_normalized(evaluator: SigmaEvaluator) -> None:
    u = 0.13 + 0.07j
    assert evaluator.sigma(-u) == pytest.approx(-evaluator.sigma(u), rel=1e-12)
    assert evaluator.sigma(1e-4) == pytest.approx(1e-4, rel=1e-12)
    assert evaluator.sigma(0j) == 0


def test_sigma_laurent_expansion(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    g2, g3 = lattice_invariants_eisenstein(lattice)
    u = 0.05 + 0.02j
    expected = u - g2 * u**5 / 240 - g3 * u**7 / 840
    assert evaluator.sigma(u) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("which", [0, 1])
def test_sigma_quasi_periodicity(evaluator: SigmaEvaluator, lattice: Lattice, which: int) -> None:
    w = (lattice.w1, lattice.w2)[which]
    eta = (lattice.eta1, lattice.eta2)[which]
    u = 0.21 - 0.33j
    expected = -cmath.exp(2 * eta * (u + w / 2)) * evaluator.sigma(u)
    assert evaluator.sigma(u + w) == pytest.approx(expected, rel=1e-10)


def test_sigma_matches_weierstrass_product(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    u = 0.2 + 0.1j
    assert sigma_product(u, lattice, n_max=100) == pytest.approx(evaluator.sigma(u), rel=1e-6)


def test_sigma_does_not_depend_on_the_basis(lattice: Lattice, evaluator: SigmaEvaluator) -> None:
    u = 0.37 + 0.11j
    for basis in ((lattice.w2, lattice.w1), (lattice.w1, lattice.w1 + lattice.w2), (-lattice.w1, lattice.w2)):
        other = SigmaEvaluator(Lattice(*basis))
        assert other.sigma(u) == pytest.approx(evaluator.sigma(u), rel=1e-10)


def test_log_sigma_agrees_with_sigma(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    u = 0.3 + 0.2j + 2 * lattice.w1 - lattice.w2
    assert cmath.exp(evaluator.log_sigma(u)) == pytest.approx(evaluator.sigma(u), rel=1e-10)


def test_legendre_relation(lattice: Lattice) -> None:
    assert legendre_residual(lattice) < 1e-10
    assert lattice.eta1 * lattice.w2 - lattice.eta2 * lattice.w1 == pytest.approx(1j * math.pi)


def test_eta_scales_inversely(lattice: Lattice) -> None:
    factor = 0.7 - 1.3j
    scaled = build_lattice(lattice.w1 * factor, lattice.w2 * factor)
    assert scaled.eta1 == pytest.approx(lattice.eta1 / factor, rel=1e-10)
    assert eta_constants(lattice.scaled(factor))[1] == pytest.approx(lattice.eta2 / factor, rel=1e-10)


def test_square_lattice_has_no_g3() -> None:
    g2, g3 = lattice_invariants_eisenstein(build_lattice(1 + 0j, 1j))
    assert abs(g3) < 1e-10 * abs(g2)
    assert g2.real > 0


def test_invariants_are_homogeneous(lattice: Lattice) -> None:
    factor = 1.5 + 0.5j
    g2, g3 = lattice_invariants_eisenstein(lattice)
    s2, s3 = lattice_invariants_eisenstein(lattice.scaled(factor))
    assert s2 == pytest.approx(g2 / factor**4, rel=1e-10)
    assert s3 == pytest.approx(g3 / factor**6, rel=1e-10)


def test_elliptic_factor_is_periodic(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    alpha, beta, gamma = 0.1 + 0.05j, -0.2 + 0.3j, 0.33 - 0.1j
    delta = alpha + beta - gamma
    u = 0.17 + 0.41j
    value = F_factor(u, alpha, beta, gamma, delta, evaluator)
    for w in (lattice.w1, lattice.w2, lattice.w1 - 2 * lattice.w2):
        assert F_factor(u + w, alpha, beta, gamma, delta, evaluator) == pytest.approx(value, rel=1e-9)


def test_elliptic_factor_with_shifted_divisor_is_constant(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    gamma, delta = 0.12 - 0.08j, -0.25 + 0.2j
    alpha, beta = gamma + lattice.w1, delta - lattice.w1
    first = F_factor(0.3 + 0.1j, alpha, beta, gamma, delta, evaluator)
    second = F_factor(-0.05 + 0.27j, alpha, beta, gamma, delta, evaluator)
    assert first == pytest.approx(second, rel=1e-9)
    assert first == pytest.approx(cmath.exp(2 * lattice.eta1 * (gamma - delta + lattice.w1)), rel=1e-9)


def test_theta_bracket_differs_by_a_constant(lattice: Lattice, evaluator: SigmaEvaluator) -> None:
    theta = SigmaEvaluator(lattice, Bracket.THETA)
    args = (0.1 + 0.05j, -0.2 + 0.3j, 0.33 - 0.1j, -0.43 + 0.45j)
    ratios = [
        F_factor(u, *args, theta) / F_factor(u, *args, evaluator) for u in (0.17 + 0.41j, -0.3 + 0.02j, 0.5 - 0.2j)
    ]
    assert ratios[1] == pytest.approx(ratios[0], rel=1e-9)
    assert ratios[2] == pytest.approx(ratios[0], rel=1e-9)


def test_elliptic_factor_zeros_and_poles(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    alpha, beta, gamma, delta = 0.1 + 0.05j, -0.2 + 0.3j, 0.33 - 0.1j, -0.43 + 0.45j
    assert F_factor(alpha + lattice.w2, alpha, beta, gamma, delta, evaluator) == 0
    with pytest.raises(PoleAtUError):
        F_factor(gamma, alpha, beta, gamma, delta, evaluator)
    with pytest.raises(ValueError, match="Unbalanced"):
        F_factor(0.2j, alpha, beta, gamma, delta + 0.1, evaluator)


def test_lattice_reduction() -> None:
    lat = Lattice(1 + 0j, TAU)
    u = 0.2 + 0.1j + 3 * lat.w1 - 2 * lat.w2
    reduced, (m, n) = reduce_mod_lattice(u, lat)
    assert reduced == pytest.approx(0.2 + 0.1j)
    assert (m, n) == (3, -2)
    assert lat.distance_to_lattice(lat.w1 + lat.w2 + 1e-3) == pytest.approx(1e-3)


def test_generated_by_recognizes_a_change_of_basis() -> None:
    lat = Lattice(1 + 0j, TAU)
    assert lat.generated_by(2 * lat.w1 + lat.w2, lat.w1 + lat.w2)
    assert not lat.generated_by(2 * lat.w1, lat.w2)


def test_reduce_basis() -> None:
    w1, w2 = reduce_basis(1 + 0j, 5 + TAU)
    assert w1 == pytest.approx(1)
    assert w2 == pytest.approx(TAU)
    w1, w2 = reduce_basis(TAU, 1 + 0j)
    assert (w2 / w1).imag > 0


def test_degenerate_lattice() -> None:
    with pytest.raises(DegenerateLatticeError):
        Lattice(1 + 1j, 2 + 2j)
    with pytest.raises(DegenerateLatticeError):
        build_lattice(1 + 0j, -3 + 0j)


def test_embedding_factors(evaluator: SigmaEvaluator, lattice: Lattice) -> None:
    p = EmbeddingParams(e1=-0.37 - 0.17j, e2=0.03 + 0.027j, h_x=-0.376 + 0.119j, h_y=-0.21 - 0.31j)
    assert F12(p.e2, p, evaluator) == 0
    assert G12(p.h_y - p.e2, p, evaluator) == 0
    with pytest.raises(PoleAtUError):
        F12(p.e1 + lattice.w1, p, evaluator)
    u = 0.21 + 0.08j
    assert G12(u + lattice.w2, p, evaluator) == pytest.approx(G12(u, p, evaluator), rel=1e-9)


def random_arguments(rng: np.random.Generator, count: int = 20) -> list[complex]:
    return [complex(re, im) for re, im in rng.uniform(-0.6, 0.6, size=(count, 2))]


def test_sigma_identities_at_random_points(
    evaluator: SigmaEvaluator, lattice: Lattice, rng: np.random.Generator
) -> None:
    for u in random_arguments(rng):
        value = evaluator.sigma(u)
        assert evaluator.sigma(-u) == pytest.approx(-value, rel=1e-10)
        for w, eta in ((lattice.w1, lattice.eta1), (lattice.w2, lattice.eta2)):
            expected = -cmath.exp(2 * eta * (u + w / 2)) * value
            assert evaluator.sigma(u + w) == pytest.approx(expected, rel=1e-10)


def test_theta1_quasi_periodicity_at_random_points(rng: np.random.Generator) -> None:
    for z in random_arguments(rng):
        value = theta1(z, TAU)
        assert theta1(z + math.pi, TAU) == pytest.approx(-value, rel=1e-12)
        shifted = -cmath.exp(-1j * math.pi * TAU - 2j * z) * value
        assert theta1(z + math.pi * TAU, TAU) == pytest.approx(shifted, rel=1e-10)


def test_elliptic_factor_at_random_points(
    evaluator: SigmaEvaluator, lattice: Lattice, rng: np.random.Generator
) -> None:
    alpha, beta, gamma = 0.1 + 0.05j, -0.2 + 0.3j, 0.33 - 0.1j
    delta = alpha + beta - gamma
    # F(2u | 2L; 2 alpha, ...) = F(u | L; alpha, ...)
    doubled = SigmaEvaluator(build_lattice(2 * lattice.w1, 2 * lattice.w2))
    for u in random_arguments(rng):
        value = F_factor(u, alpha, beta, gamma, delta, evaluator)
        for w in (lattice.w1, lattice.w2):
            assert F_factor(u + w, alpha, beta, gamma, delta, evaluator) == pytest.approx(value, rel=1e-9)
        scaled = F_factor(2 * u, 2 * alpha, 2 * beta, 2 * gamma, 2 * delta, doubled)
        assert scaled == pytest.approx(value, rel=1e-9)
