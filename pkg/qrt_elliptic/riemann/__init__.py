# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from ..lattice import Lattice, reduce_mod_lattice  # noqa: TID252
from .abel import (
    AbelIntegral,
    PeriodResult,
    abel_integral,
    abel_to_infinity,
    abel_to_point,
    compute_periods,
    invariant_residual,
    period_lattice,
)
from .branch import BranchData, SheetedPoint, branch_points, point_on_sheet, sheet_value, y_branches
from .integrate import continue_integral, track_integral
from .paths import IntegrationPath, abel_path, cut_path, loop_around

__all__ = [
    "AbelIntegral",
    "BranchData",
    "IntegrationPath",
    "Lattice",
    "PeriodResult",
    "SheetedPoint",
    "abel_integral",
    "abel_path",
    "abel_to_infinity",
    "abel_to_point",
    "branch_points",
    "compute_periods",
    "continue_integral",
    "cut_path",
    "invariant_residual",
    "loop_around",
    "period_lattice",
    "point_on_sheet",
    "reduce_mod_lattice",
    "sheet_value",
    "track_integral",
    "y_branches",
]
