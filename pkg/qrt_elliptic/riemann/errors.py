# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from ..errors import QrtEllipticError  # noqa: TID252


class IntegrationError(QrtEllipticError):
    pass


class DegenerateQuarticError(IntegrationError):
    def __init__(self, message: str | None = None) -> None:
        super().__init__(message or "Discriminant quartic has colliding or missing roots")


class PoleOfQuadraticError(IntegrationError):
    def __init__(self, x: complex) -> None:
        self.x = x
        super().__init__(f"Leading y coefficient vanishes at x={x}")


class StepCollapseError(IntegrationError):
    def __init__(self, t: float) -> None:
        self.t = t
        super().__init__(f"Square-root continuation step collapsed at t={t:.6g}")


class PathTooCloseToBranchPointError(IntegrationError):
    def __init__(self, index: int, distance: float, margin: float) -> None:
        self.index = index
        super().__init__(f"Path passes {distance:.3g} from branch point q{index + 1} (margin {margin:.3g})")


class SheetMismatchError(IntegrationError):
    def __init__(self) -> None:
        super().__init__("Tracked sheet does not match the target after a detour loop")


class ChartDegenerateError(DegenerateQuarticError):
    def __init__(self) -> None:
        super().__init__("x = inf is a branch point of the double cover")


class PeriodLatticeError(IntegrationError):
    def __init__(self) -> None:
        super().__init__("No pair of cut integrals reproduces the invariants of the quartic")
