# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import asyncio
import dataclasses
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import TYPE_CHECKING

import numpy as np

from .const import (
    DEFAULT_MARGIN_FRACTION,
    DEFAULT_MAX_MARKED_TRIALS,
    DEFAULT_SEED,
    DEFAULT_STEPS,
    DEFAULT_TOL_INTERMEDIATE,
    DEFAULT_TOL_ORBIT,
    INFINITY,
    LOGGER,
    NEGATIVE_ORBIT_STEPS,
)
from .elliptic import F12, G12, Bracket, EmbeddingParams, SigmaEvaluator
from .errors import (
    CurveNotSmoothError,
    ExhaustedSearchError,
    InfiniteKError,
    NotBiquadraticInYError,
    PipelineStageError,
    PoleAtUError,
    QrtMapError,
)
from .pencil import (
    MarkedPoints,
    MoebiusPair,
    apply_rho,
    apply_rho_inv,
    choose_marked_points,
    eisenstein_invariants,
    is_smooth,
    marked_points,
    moebius_normalize,
    partial_discriminant,
    sample_points,
)
from .projective import Coordinate, ProjPoint, point_distance
from .qrt import Biquadratic, QrtMap, compute_K, fix_curve, qrt_step, qrt_step_inverse, snap_to_curve
from .riemann import (
    AbelIntegral,
    BranchData,
    IntegrationPath,
    Lattice,
    PeriodResult,
    SheetedPoint,
    abel_integral,
    branch_points,
    period_lattice,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

_LOGGER = LOGGER.getChild(__name__)

# order of the six marked-point integrals; names double as path file stems
ABEL_TARGETS = ("e1", "hx_e1", "hy_e1", "e2", "hx_e2", "hy_e2")
# basepoint candidates keep this many margins from branch and marked points
_BASEPOINT_CLEARANCE = 3.0
_BASEPOINT_CANDIDATES = 64
_BASEPOINT_STREAM = 1
_RELATION_TOLERANCE = 1e-5


class Stage(StrEnum):
    INVARIANT = "invariant"
    SMOOTHNESS = "smoothness"
    NORMALIZATION = "normalization"
    BRANCH_POINTS = "branch_points"
    PERIODS = "periods"
    ABEL = "abel"
    COEFFICIENTS = "coefficients"
    TRANSLATION = "translation"


@dataclass(frozen=True, kw_only=True)
class SolverConfig:
    """Tunable knobs of the pipeline; basepoint and marked_points are given in the coordinates of the map."""

    seed: int = DEFAULT_SEED
    n_max: int = DEFAULT_STEPS
    tol_orbit: float = DEFAULT_TOL_ORBIT
    tol_intermediate: float = DEFAULT_TOL_INTERMEDIATE
    margin_fraction: float = DEFAULT_MARGIN_FRACTION
    basepoint: ProjPoint | None = None
    marked_points: MoebiusPair | None = None
    bracket: Bracket = Bracket.SIGMA
    max_marked_trials: int = DEFAULT_MAX_MARKED_TRIALS


@dataclass(frozen=True)
class Provenance:
    """How the parameters were obtained: invariant, cuts, paths, detours and consistency residuals."""

    k0: Coordinate
    pencil_swapped: bool
    eisenstein: tuple[complex, complex, complex]
    period_cuts: tuple[tuple[int, int], tuple[int, int]]
    invariant_residual: float
    abel_values: dict[str, complex]
    paths: dict[str, IntegrationPath]
    detours: tuple[str, ...]
    chain_offsets: tuple[tuple[int, int], tuple[int, int]]
    relation_residuals: tuple[float, float]
    coefficient_residuals: tuple[float, float]
    step_flipped: bool = False


@dataclass(frozen=True)
class SolutionParams:
    """Closed-form solution x_n, y_n = rho^-1(c1 F12(u0 + n step), c2 G12(u0 + n step))."""

    rho: MoebiusPair
    lattice: Lattice
    embedding: EmbeddingParams
    u0: complex
    step: complex
    basept: SheetedPoint
    curve: Biquadratic
    marked: MarkedPoints
    branch: BranchData
    provenance: Provenance
    config: SolverConfig = field(default_factory=SolverConfig)
    evaluator: SigmaEvaluator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "evaluator", SigmaEvaluator(self.lattice, self.config.bracket))


@dataclass(frozen=True)
class OrbitRow:
    n: int
    closed: ProjPoint
    iterated: ProjPoint | None
    error: float


@dataclass(frozen=True)
class VerificationReport:
    rows: tuple[OrbitRow, ...]
    k_residuals: tuple[float, ...]
    coefficient_residuals: tuple[float, float]
    relation_residuals: tuple[float, float]
    invariant_residual: float
    tol_orbit: float
    tol_intermediate: float

    @property
    def max_error(self) -> float:
        return max((row.error for row in self.rows), default=0.0)

    @property
    def max_k_residual(self) -> float:
        return max(self.k_residuals, default=0.0)

    @property
    def orbit_passed(self) -> bool:
        return self.max_error < self.tol_orbit

    @property
    def intermediate_passed(self) -> bool:
        return (
            max(self.coefficient_residuals) < self.tol_intermediate
            and max(self.relation_residuals) < self.tol_intermediate
            and self.invariant_residual < self.tol_intermediate
            and self.max_k_residual < self.tol_intermediate
        )

    @property
    def passed(self) -> bool:
        """Orbit agreement is the binding gate; intermediates and K conservation are diagnostic."""
        return self.orbit_passed


@dataclass(frozen=True)
class _Prepared:
    k0: Coordinate
    pencil_swapped: bool
    eisenstein: tuple[complex, complex, complex]
    pair: MoebiusPair
    curve: Biquadratic
    marked: MarkedPoints
    branch: BranchData
    periods: PeriodResult
    basept: SheetedPoint
    targets: dict[str, ProjPoint]


@contextmanager
def _stage(stage: Stage) -> Iterator[None]:
    _LOGGER.debug("Entering stage %s", stage)
    try:
        yield
    except (CurveNotSmoothError, PipelineStageError):
        raise
    except Exception as e:
        raise PipelineStageError(stage) from e


def _choose_basepoint(curve: Biquadratic, branch: BranchData, marked: MarkedPoints, cfg: SolverConfig) -> SheetedPoint:
    """First seeded curve point well away from the branch points and the marked x-values."""
    clearance = _BASEPOINT_CLEARANCE * branch.margin
    avoid = [*branch.roots, 0j, marked.x1, marked.x2]
    candidates = sample_points(curve, cfg.seed, _BASEPOINT_CANDIDATES, stream=_BASEPOINT_STREAM)
    for candidate in candidates:
        if not candidate.is_finite:
            continue
        if all(abs(candidate.x - x) >= clearance for x in avoid):
            return SheetedPoint(candidate.x, candidate.y)
    raise ExhaustedSearchError(len(candidates))


def _marked_targets(marked: MarkedPoints) -> dict[str, ProjPoint]:
    return {
        "e1": ProjPoint(INFINITY, INFINITY),
        "hx_e1": ProjPoint(INFINITY, marked.y1),
        "hy_e1": ProjPoint(marked.x1, INFINITY),
        "e2": ProjPoint(0j, 0j),
        "hx_e2": ProjPoint(0j, marked.y2),
        "hy_e2": ProjPoint(marked.x2, 0j),
    }


def _prepare(qrt_map: QrtMap, p0: ProjPoint, cfg: SolverConfig) -> _Prepared:
    with _stage(Stage.INVARIANT):
        try:
            k0: Coordinate = compute_K(qrt_map, p0)
            swapped = False
        except InfiniteKError:
            _LOGGER.info("Initial point lies on x^T B y = 0, solving on that curve")
            k0, swapped = INFINITY, True
        curve = fix_curve(qrt_map, k0)
        _LOGGER.info("Invariant K0 = %s", k0)

    with _stage(Stage.SMOOTHNESS):
        try:
            quartic = partial_discriminant(curve)
        except NotBiquadraticInYError as e:
            # linear in y: a rational curve
            raise CurveNotSmoothError(0j) from e
        eisenstein = eisenstein_invariants(quartic)
        if not is_smooth(curve):
            raise CurveNotSmoothError(eisenstein[2])
        _LOGGER.info("Curve is smooth (g2=%s, g3=%s)", eisenstein[0], eisenstein[1])

    with _stage(Stage.NORMALIZATION):
        pair = cfg.marked_points or choose_marked_points(curve, cfg.seed, max_trials=cfg.max_marked_trials)
        normalized, pair = moebius_normalize(curve, pair)
        marked = marked_points(normalized)
        _LOGGER.info("Normalized with marked points %s and %s", pair.first, pair.second)

    with _stage(Stage.BRANCH_POINTS):
        branch = branch_points(partial_discriminant(normalized), margin_fraction=cfg.margin_fraction)

    with _stage(Stage.PERIODS):
        periods = period_lattice(normalized, branch)
        _LOGGER.info("Periods w1=%s w2=%s", periods.lattice.w1, periods.lattice.w2)

    with _stage(Stage.ABEL):
        if cfg.basepoint is not None:
            origin = snap_to_curve(normalized, apply_rho(pair, cfg.basepoint))
            basept = SheetedPoint(origin.x, origin.y)
        else:
            basept = _choose_basepoint(normalized, branch, marked, cfg)
        targets = _marked_targets(marked)
        targets["u0"] = apply_rho(pair, p0)
        _LOGGER.debug("Basepoint %s", basept)

    return _Prepared(k0, swapped, eisenstein, pair, normalized, marked, branch, periods, basept, targets)


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b))


def _assemble(
    prepared: _Prepared,
    integrals: dict[str, AbelIntegral],
    qrt_map: QrtMap,
    p0: ProjPoint,
    cfg: SolverConfig,
) -> SolutionParams:
    values = {name: integral.value for name, integral in integrals.items()}
    lattice = prepared.periods.lattice
    marked = prepared.marked

    with _stage(Stage.COEFFICIENTS):
        e1, e2 = values["e1"], values["e2"]
        # the e2 chain fixes h_x and h_y; the e1 chain only checks them
        h_x = e2 + values["hx_e2"]
        h_y = e2 + values["hy_e2"]
        evaluator = SigmaEvaluator(lattice, cfg.bracket)
        embedding = EmbeddingParams(e1, e2, h_x, h_y)
        c1 = marked.x2 / F12(values["hy_e2"], embedding, evaluator)
        c2 = marked.y2 / G12(values["hx_e2"], embedding, evaluator)
        c1_check = marked.x1 / F12(values["hy_e1"], embedding, evaluator)
        c2_check = marked.y1 / G12(values["hx_e1"], embedding, evaluator)
        coefficient_residuals = (_relative(c1, c1_check), _relative(c2, c2_check))

        offsets = []
        relation_residuals = []
        for chain, direct in ((e1 + values["hx_e1"], h_x), (e1 + values["hy_e1"], h_y)):
            reduced, coordinates = lattice.reduce(chain - direct)
            offsets.append(coordinates)
            relation_residuals.append(abs(reduced) / abs(lattice.w1))
        if max(coefficient_residuals) > cfg.tol_intermediate or max(relation_residuals) > _RELATION_TOLERANCE:
            _LOGGER.warning(
                "Consistency residuals above tolerance: c1/c2 %s, relations %s",
                coefficient_residuals,
                relation_residuals,
            )
        embedding = EmbeddingParams(e1, e2, h_x, h_y, c1, c2)
        _LOGGER.info("Coefficients c1=%s c2=%s", c1, c2)

    with _stage(Stage.TRANSLATION):
        params = SolutionParams(
            rho=prepared.pair,
            lattice=lattice,
            embedding=embedding,
            u0=values["u0"],
            step=h_x - h_y,
            basept=prepared.basept,
            curve=prepared.curve,
            marked=marked,
            branch=prepared.branch,
            provenance=Provenance(
                k0=prepared.k0,
                pencil_swapped=prepared.pencil_swapped,
                eisenstein=prepared.eisenstein,
                period_cuts=prepared.periods.pair,
                invariant_residual=prepared.periods.residual,
                abel_values=values,
                paths={**prepared.periods.paths, **{name: integral.path for name, integral in integrals.items()}},
                detours=tuple(name for name, integral in integrals.items() if integral.detoured),
                chain_offsets=(offsets[0], offsets[1]),
                relation_residuals=(relation_residuals[0], relation_residuals[1]),
                coefficient_residuals=coefficient_residuals,
            ),
            config=cfg,
        )
        params = _pin_step(params, qrt_map, p0)
        _LOGGER.info("Solution u0=%s step=%s", params.u0, params.step)
    return params


def _pin_step(params: SolutionParams, qrt_map: QrtMap, p0: ProjPoint) -> SolutionParams:
    """Flip the translation when the opposite direction reproduces qrt_step(p0)."""
    expected = qrt_step(qrt_map, p0)
    forward = point_distance(eval_solution(params, 1), expected)
    flipped = dataclasses.replace(
        params, step=-params.step, provenance=dataclasses.replace(params.provenance, step_flipped=True)
    )
    backward = point_distance(eval_solution(flipped, 1), expected)
    if backward < forward:
        _LOGGER.warning("Translation direction flipped by the one-step check (%.3g vs %.3g)", backward, forward)
        return flipped
    return params


def _run_integrals(prepared: _Prepared) -> dict[str, AbelIntegral]:
    with _stage(Stage.ABEL):
        return {
            name: abel_integral(prepared.curve, prepared.branch, prepared.basept, target)
            for name, target in prepared.targets.items()
        }


def solve(qrt_map: QrtMap, p0: ProjPoint, cfg: SolverConfig | None = None) -> SolutionParams:
    """Run the pipeline from the invariant K0 to the translation step."""
    cfg = cfg or SolverConfig()
    prepared = _prepare(qrt_map, p0, cfg)
    integrals = _run_integrals(prepared)
    return _assemble(prepared, integrals, qrt_map, p0, cfg)


async def async_solve(qrt_map: QrtMap, p0: ProjPoint, cfg: SolverConfig | None = None) -> SolutionParams:
    """Like solve, with the Abel integrals running concurrently in worker threads."""
    cfg = cfg or SolverConfig()
    prepared = await asyncio.to_thread(_prepare, qrt_map, p0, cfg)
    names = list(prepared.targets)
    curve, branch, basept = prepared.curve, prepared.branch, prepared.basept
    with _stage(Stage.ABEL):
        results = await asyncio.gather(
            *(asyncio.to_thread(abel_integral, curve, branch, basept, prepared.targets[name]) for name in names)
        )
    integrals = dict(zip(names, results, strict=True))
    return await asyncio.to_thread(_assemble, prepared, integrals, qrt_map, p0, cfg)


def _component(
    factor: Callable[[complex, EmbeddingParams, SigmaEvaluator], complex],
    scale: complex,
    u: complex,
    params: SolutionParams,
) -> Coordinate:
    try:
        return scale * factor(u, params.embedding, params.evaluator)
    except PoleAtUError:
        return INFINITY


def eval_solution(params: SolutionParams, n: int) -> ProjPoint:
    """The n-th iterate from the closed form; poles of F12 or G12 become infinite coordinates."""
    u = params.u0 + n * params.step
    x = _component(F12, params.embedding.c1, u, params)
    y = _component(G12, params.embedding.c2, u, params)
    return apply_rho_inv(params.rho, ProjPoint(x, y))


def _k_residual(qrt_map: QrtMap, p: ProjPoint, k0: complex) -> float:
    """|K(p) - K0| relative to the pencil member A + K0 B, so rescaling A or B leaves it unchanged."""
    try:
        k = compute_K(qrt_map, p)
    except QrtMapError:
        return math.inf
    norm_a, norm_b = np.linalg.norm(qrt_map.A), np.linalg.norm(qrt_map.B)
    return float(abs(k - k0) * norm_b / (norm_a + abs(k0) * norm_b))


def _orbit_rows(
    qrt_map: QrtMap,
    params: SolutionParams,
    p0: ProjPoint,
    steps: int,
    step: Callable[[QrtMap, ProjPoint], ProjPoint],
) -> tuple[list[OrbitRow], list[ProjPoint]]:
    direction = 1 if steps >= 0 else -1
    rows = []
    orbit = [p0]
    current: ProjPoint | None = p0
    for i in range(1, abs(steps) + 1):
        n = direction * i
        closed = eval_solution(params, n)
        if current is not None:
            try:
                current = step(qrt_map, current)
                orbit.append(current)
            except QrtMapError:
                _LOGGER.warning("Iteration stopped at n=%d", n)
                current = None
        error = math.inf if current is None else point_distance(closed, current)
        rows.append(OrbitRow(n, closed, current, error))
    return rows, orbit


def verify(params: SolutionParams, qrt_map: QrtMap, p0: ProjPoint, n_max: int) -> VerificationReport:
    """Compare the closed form against direct iteration forward to n_max and backward a few steps."""
    closed = eval_solution(params, 0)
    rows = [OrbitRow(0, closed, p0, point_distance(closed, p0))]
    forward, orbit = _orbit_rows(qrt_map, params, p0, n_max, qrt_step)
    backward, _ = _orbit_rows(qrt_map, params, p0, -min(NEGATIVE_ORBIT_STEPS, n_max), qrt_step_inverse)
    rows.extend(forward)
    rows.extend(backward)

    k_map, k0 = qrt_map, params.provenance.k0
    if k0 is INFINITY:
        k_map, k0 = QrtMap(qrt_map.B, qrt_map.A, check_pencil=False), 0j
    k_residuals = tuple(_k_residual(k_map, p, k0) for p in orbit)

    report = VerificationReport(
        rows=tuple(rows),
        k_residuals=k_residuals,
        coefficient_residuals=params.provenance.coefficient_residuals,
        relation_residuals=params.provenance.relation_residuals,
        invariant_residual=params.provenance.invariant_residual,
        tol_orbit=params.config.tol_orbit,
        tol_intermediate=params.config.tol_intermediate,
    )
    _LOGGER.info(
        "Verified %d rows: max chordal error %.3g, max K residual %.3g",
        len(rows),
        report.max_error,
        report.max_k_residual,
    )
    return report

