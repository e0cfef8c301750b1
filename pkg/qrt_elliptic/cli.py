# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import colorlog

from .const import DEFAULT_STEPS, LOGGER
from .errors import CurveNotSmoothError, PipelineStageError, ProblemFileError
from .problem import Problem, load_problem
from .report import (
    compare_orbits,
    params_text,
    params_to_dict,
    read_orbit_csv,
    verification_text,
    verification_to_dict,
    write_json,
    write_orbit_csv,
    write_paths,
)
from .solver import SolutionParams, solve, verify

_LOGGER = LOGGER.getChild(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NOT_SMOOTH = 2

DEFAULT_OUT = "qrt-out"
LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"


def _setup_logging(*, verbose: bool) -> None:
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
    LOGGER.handlers = [handler]
    LOGGER.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("problem", type=Path, help="problem file (JSON)")
    p.add_argument("--seed", type=int, default=None, help="seed for marked points and basepoint")
    p.add_argument("--out", type=Path, default=Path(DEFAULT_OUT), help=f"output directory (default: {DEFAULT_OUT})")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrt-elliptic",
        description="Closed-form solutions of QRT maps through Weierstrass sigma functions.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("solve", help="solve a problem file and verify against iteration")
    _add_common_args(p)
    p.add_argument("--steps", type=int, default=None, help=f"orbit length (default: {DEFAULT_STEPS})")
    p.add_argument("--tol-orbit", type=float, default=None, help="chordal tolerance of the orbit gate")
    p.add_argument("--tol-intermediate", type=float, default=None, help="tolerance of the intermediate checks")
    p.add_argument("--compare", type=Path, default=None, help="orbit CSV of another run to compare with")
    p.add_argument("--paths", action="store_true", help="also dump the integration paths")
    p.add_argument("--report", choices=("text", "json"), default="text", help="report format (default: text)")
    p.set_defaults(handler=run_solve)

    p = commands.add_parser("paths", help="dump integration paths and branch points as CSV")
    _add_common_args(p)
    p.set_defaults(handler=run_paths)
    return parser


def _solve(problem: Problem) -> SolutionParams:
    return solve(problem.qrt_map, problem.initial_point, problem.config)


def run_solve(args: argparse.Namespace) -> int:
    problem = load_problem(args.problem).with_overrides(
        seed=args.seed,
        n_max=args.steps,
        tol_orbit=args.tol_orbit,
        tol_intermediate=args.tol_intermediate,
    )
    params = _solve(problem)
    report = verify(params, problem.qrt_map, problem.initial_point, problem.config.n_max)

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    if args.report == "json":
        write_json(out / "params.json", params_to_dict(params))
        write_json(out / "verification.json", verification_to_dict(report))
    else:
        (out / "params.txt").write_text(params_text(params, problem.name), encoding="utf-8")
        (out / "verification.txt").write_text(verification_text(report), encoding="utf-8")
    write_orbit_csv(out / "orbit.csv", report.rows)
    if args.paths:
        write_paths(out / "paths", params)

    distance = None
    if args.compare is not None:
        distance = compare_orbits(report.rows, read_orbit_csv(args.compare))
    print(params_text(params, problem.name), end="")
    print(verification_text(report, distance), end="")

    passed = report.passed and (distance is None or distance < problem.config.tol_orbit)
    return EXIT_OK if passed else EXIT_FAILURE


def run_paths(args: argparse.Namespace) -> int:
    problem = load_problem(args.problem).with_overrides(seed=args.seed)
    params = _solve(problem)
    for path in write_paths(args.out / "paths", params):
        print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(verbose=args.verbose)
    try:
        return args.handler(args)
    except ProblemFileError as e:
        _LOGGER.error("Invalid problem file: %s", e)  # noqa: TRY400
        return EXIT_FAILURE
    except CurveNotSmoothError as e:
        _LOGGER.error("%s", e)  # noqa: TRY400
        return EXIT_NOT_SMOOTH
    except PipelineStageError as e:
        _LOGGER.error("%s: %s", e, e.__cause__)  # noqa: TRY400
        return EXIT_FAILURE
    except (OSError, ValueError) as e:
        _LOGGER.error("%s", e)  # noqa: TRY400
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
