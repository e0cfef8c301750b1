# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

import logging


class Infinity:
    """Point at infinity of the projective line."""

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self) -> str:
        return "INFINITY"


INFINITY = Infinity()
LOGGER = logging.getLogger(__package__)

DEFAULT_SEED = 0
DEFAULT_STEPS = 50
DEFAULT_TOL_ORBIT = 1e-6
DEFAULT_TOL_INTERMEDIATE = 1e-4
DEFAULT_MARGIN_FRACTION = 0.05
DEFAULT_MAX_MARKED_TRIALS = 256

# relative thresholds shared by the pipeline stages
INDETERMINATE_TOLERANCE = 1e-12
ON_CURVE_TOLERANCE = 1e-10
SMOOTHNESS_TOLERANCE = 1e-8
QUADRATURE_TOLERANCE = 1e-11
SHEET_TOLERANCE = 1e-6

NEGATIVE_ORBIT_STEPS = 10

CONF_NAME = "name"
CONF_DESCRIPTION = "description"
CONF_MATRIX_A = "A"
CONF_MATRIX_B = "B"
CONF_INITIAL_POINT = "initial_point"
CONF_K = "K"
CONF_CONFIG = "config"

CONF_SEED = "seed"
CONF_N_MAX = "n_max"
CONF_TOL_ORBIT = "tol_orbit"
CONF_TOL_INTERMEDIATE = "tol_intermediate"
CONF_MARGIN_FRACTION = "margin_fraction"
CONF_BASEPOINT = "basepoint"
CONF_MARKED_POINTS = "marked_points"
CONF_BRACKET = "bracket"
CONF_MAX_MARKED_TRIALS = "max_marked_trials"

INFINITY_TOKEN = "inf"
