# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    CONF_BASEPOINT,
    CONF_BRACKET,
    CONF_CONFIG,
    CONF_DESCRIPTION,
    CONF_INITIAL_POINT,
    CONF_K,
    CONF_MARGIN_FRACTION,
    CONF_MARKED_POINTS,
    CONF_MATRIX_A,
    CONF_MATRIX_B,
    CONF_MAX_MARKED_TRIALS,
    CONF_N_MAX,
    CONF_NAME,
    CONF_SEED,
    CONF_TOL_INTERMEDIATE,
    CONF_TOL_ORBIT,
    INFINITY,
    INFINITY_TOKEN,
    LOGGER,
)
from .elliptic import Bracket
from .errors import ProblemFileError, QrtMapError
from .pencil import MoebiusPair
from .projective import Coordinate, ProjPoint
from .qrt import QrtMap, fix_curve, snap_to_curve
from .solver import SolverConfig

_LOGGER = LOGGER.getChild(__name__)


def complex_number(value: Any) -> complex:
    """[re, im] pair or a bare real number."""
    if isinstance(value, bool):
        msg = "expected a number or [re, im]"
        raise vol.Invalid(msg)
    if isinstance(value, int | float):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(  # noqa: PLR2004
        isinstance(part, int | float) and not isinstance(part, bool) for part in value
    ):
        return complex(value[0], value[1])
    msg = "expected a number or [re, im]"
    raise vol.Invalid(msg)


def coordinate(value: Any) -> Coordinate:
    if value == INFINITY_TOKEN:
        return INFINITY
    return complex_number(value)


def _to_point(value: list[Coordinate]) -> ProjPoint:
    return ProjPoint(value[0], value[1])


def _to_pair(value: list[Coordinate]) -> MoebiusPair:
    try:
        return MoebiusPair(*value)
    except ValueError as e:
        raise vol.Invalid(str(e)) from e


MATRIX = vol.All([vol.All([complex_number], vol.Length(min=3, max=3))], vol.Length(min=3, max=3))
POINT = vol.All([coordinate], vol.Length(min=2, max=2), _to_point)
POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_SEED): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_N_MAX): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_TOL_ORBIT): POSITIVE_FLOAT,
        vol.Optional(CONF_TOL_INTERMEDIATE): POSITIVE_FLOAT,
        vol.Optional(CONF_MARGIN_FRACTION): vol.All(vol.Coerce(float), vol.Range(min=0, max=0.5, min_included=False)),
        vol.Optional(CONF_BASEPOINT): POINT,
        vol.Optional(CONF_MARKED_POINTS): vol.All([coordinate], vol.Length(min=4, max=4), _to_pair),
        vol.Optional(CONF_BRACKET): vol.All(str, vol.Coerce(Bracket)),
        vol.Optional(CONF_MAX_MARKED_TRIALS): vol.All(int, vol.Range(min=1)),
    }
)

PROBLEM_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_NAME): str,
        vol.Optional(CONF_DESCRIPTION): str,
        vol.Required(CONF_MATRIX_A): MATRIX,
        vol.Required(CONF_MATRIX_B): MATRIX,
        vol.Required(CONF_INITIAL_POINT): POINT,
        vol.Optional(CONF_K): coordinate,
        vol.Optional(CONF_CONFIG, default={}): CONFIG_SCHEMA,
    }
)


@dataclass(frozen=True)
class Problem:
    """A validated problem file: the map, the initial point and the solver configuration."""

    name: str
    qrt_map: QrtMap
    initial_point: ProjPoint
    config: SolverConfig
    k: Coordinate | None = None
    description: str = ""

    def with_overrides(self, **overrides: Any) -> Problem:
        """Replace config fields by the given values, skipping None."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        if not changes:
            return self
        return dataclasses.replace(self, config=dataclasses.replace(self.config, **changes))


def parse_problem(data: Any, name: str = "problem") -> Problem:
    try:
        validated = PROBLEM_SCHEMA(data)
    except vol.Invalid as e:
        msg = f"{name}: {e}"
        raise ProblemFileError(msg) from e

    try:
        qrt_map = QrtMap(validated[CONF_MATRIX_A], validated[CONF_MATRIX_B])
    except QrtMapError as e:
        msg = f"{name}: {e}"
        raise ProblemFileError(msg) from e

    initial_point = validated[CONF_INITIAL_POINT]
    config = SolverConfig(**validated[CONF_CONFIG])
    k = validated.get(CONF_K)
    if k is not None:
        # printed data carries few digits: move the points onto the intended curve
        curve = fix_curve(qrt_map, k)
        initial_point = snap_to_curve(curve, initial_point)
        if config.basepoint is not None:
            config = dataclasses.replace(config, basepoint=snap_to_curve(curve, config.basepoint))

    return Problem(
        name=validated.get(CONF_NAME, name),
        qrt_map=qrt_map,
        initial_point=initial_point,
        config=config,
        k=k,
        description=validated.get(CONF_DESCRIPTION, ""),
    )


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"{path}: {e.strerror}"
        raise ProblemFileError(msg) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"{path}:{e.lineno}:{e.colno}: {e.msg}"
        raise ProblemFileError(msg) from e
    problem = parse_problem(data, path.stem)
    _LOGGER.debug("Loaded problem %s from %s", problem.name, path)
    return problem
