# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from qrt_elliptic.problem import Problem, load_problem
from qrt_elliptic.solver import SolutionParams, solve

FIXTURES = Path(__file__).parent.parent / "qrt_elliptic" / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def phi1_problem() -> Problem:
    return load_problem(FIXTURES / "phi1.json")


@pytest.fixture(scope="session")
def phi2_problem() -> Problem:
    return load_problem(FIXTURES / "phi2.json")


@pytest.fixture(scope="session")
def phi1_params(phi1_problem: Problem) -> SolutionParams:
    return solve(phi1_problem.qrt_map, phi1_problem.initial_point, phi1_problem.config)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
