# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations


class QrtEllipticError(Exception):
    pass


class QrtMapError(QrtEllipticError):
    pass


class InvalidMapError(QrtMapError):
    pass


class InfiniteKError(QrtMapError):
    def __init__(self) -> None:
        super().__init__("Initial point lies on the curve x^T B y = 0 (K is infinite)")


class DegeneratePointError(QrtMapError):
    def __init__(self) -> None:
        super().__init__("Initial point lies on every member of the pencil")


class IndeterminatePointError(QrtMapError):
    def __init__(self, switch: str) -> None:
        self.switch = switch
        super().__init__(f"Point is indeterminate for the {switch} switch")


class DegeneratePencilError(QrtMapError):
    pass


class PencilAnalysisError(QrtEllipticError):
    pass


class NotBiquadraticInYError(PencilAnalysisError):
    def __init__(self) -> None:
        super().__init__("Curve has no y^2 terms")


class ExhaustedSearchError(PencilAnalysisError):
    def __init__(self, trials: int) -> None:
        self.trials = trials
        super().__init__(f"No admissible pair of marked points after {trials} trials")


class DegenerateTransformError(PencilAnalysisError):
    pass


class EllipticKernelError(QrtEllipticError):
    pass


class TauNotInUpperHalfPlaneError(EllipticKernelError):
    def __init__(self, tau: complex) -> None:
        self.tau = tau
        super().__init__(f"tau={tau} is not in the upper half plane")


class DegenerateLatticeError(EllipticKernelError):
    def __init__(self) -> None:
        super().__init__("Periods are linearly dependent over the reals")


class PoleAtUError(EllipticKernelError):
    def __init__(self, u: complex) -> None:
        self.u = u
        super().__init__(f"Elliptic factor has a pole at u={u}")


class SolverError(QrtEllipticError):
    pass


class CurveNotSmoothError(SolverError):
    def __init__(self, discriminant: complex) -> None:
        self.discriminant = discriminant
        super().__init__(f"Invariant curve is singular: Eisenstein invariant g2^3-27g3^2={discriminant:.6g}")


class PipelineStageError(SolverError):
    def __init__(self, stage: str) -> None:
        self.stage = stage
        super().__init__(f"Pipeline failed in stage '{stage}'")


class ProblemFileError(QrtEllipticError):
    pass
