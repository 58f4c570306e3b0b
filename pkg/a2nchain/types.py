import cmath
from dataclasses import dataclass, replace
from enum import Enum
from typing import List

import numpy as np
import numpy.typing as npt
from typing_extensions import TypedDict

from a2nchain.errors import InvalidParameterError

# Dense complex operator; site 1 is the slowest-varying tensor factor.
Operator = npt.NDArray[np.complex128]

REFERENCE_ETA = complex(0.0, -0.1)


class BoundarySet(str, Enum):
    I = "I"  # noqa: E741
    II = "II"


class Algebra(str, Enum):
    B = "B"
    C = "C"


@dataclass(frozen=True)
class ModelParams:
    """Rank, chain length, anisotropy and boundary set of the open chain."""

    n: int
    N: int
    eta: complex = REFERENCE_ETA
    boundary: BoundarySet = BoundarySet.I

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParameterError(f"rank n must be >= 1, got {self.n}")
        if self.N < 1:
            raise InvalidParameterError(f"chain length N must be >= 1, got {self.N}")
        if not cmath.isfinite(complex(self.eta)):
            raise InvalidParameterError(f"eta must be finite, got {self.eta}")
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "boundary", BoundarySet(self.boundary))

    @property
    def rho(self) -> complex:
        return -1j * cmath.pi - 2 * (2 * self.n + 1) * self.eta

    @property
    def q(self) -> complex:
        return cmath.exp(2 * self.eta)

    @property
    def d(self) -> int:
        """Local Hilbert-space dimension 2n+1."""
        return 2 * self.n + 1

    @property
    def dim(self) -> int:
        return int(self.d**self.N)

    @property
    def algebra(self) -> Algebra:
        """The quantum-group symmetry carried by the active boundary set."""
        return Algebra.B if self.boundary == BoundarySet.I else Algebra.C

    def with_sites(self, N: int) -> "ModelParams":
        return replace(self, N=N)


class Residual(TypedDict):
    name: str
    residual: float
    tolerance: float
    passed: bool


class ResidualReport(TypedDict):
    residuals: List[Residual]
    passed: bool


def residual(name: str, value: float, tolerance: float) -> Residual:
    value = float(value)
    return {
        "name": name,
        "residual": value,
        "tolerance": tolerance,
        "passed": bool(np.isfinite(value) and value < tolerance),
    }


def collect(residuals: List[Residual]) -> ResidualReport:
    return {"residuals": residuals, "passed": all(r["passed"] for r in residuals)}
