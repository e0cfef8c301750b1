# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from .const import INFINITY
from .elliptic import Bracket, EmbeddingParams, SigmaEvaluator
from .errors import CurveNotSmoothError, PipelineStageError, QrtEllipticError
from .pencil import MoebiusPair
from .problem import Problem, load_problem
from .projective import ProjPoint
from .qrt import Biquadratic, QrtMap, qrt_step
from .riemann import Lattice, SheetedPoint
from .solver import SolutionParams, SolverConfig, VerificationReport, async_solve, eval_solution, solve, verify

__all__ = [
    "INFINITY",
    "Biquadratic",
    "Bracket",
    "CurveNotSmoothError",
    "EmbeddingParams",
    "Lattice",
    "MoebiusPair",
    "PipelineStageError",
    "Problem",
    "ProjPoint",
    "QrtEllipticError",
    "QrtMap",
    "SheetedPoint",
    "SigmaEvaluator",
    "SolutionParams",
    "SolverConfig",
    "VerificationReport",
    "async_solve",
    "eval_solution",
    "load_problem",
    "qrt_step",
    "solve",
    "verify",
]
