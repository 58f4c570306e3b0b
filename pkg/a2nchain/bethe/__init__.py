from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from a2nchain.reps import IrrepLabel


@dataclass(frozen=True)
class RootConfiguration:
    """Bethe roots grouped by nesting level; level l holds m_l roots."""

    levels: Tuple[Tuple[complex, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "levels",
            tuple(tuple(complex(u) for u in level) for level in self.levels),
        )

    @classmethod
    def empty(cls, n: int) -> "RootConfiguration":
        return cls(tuple(() for _ in range(n)))

    @classmethod
    def from_flat(
        cls, values: Iterable[complex], m: Sequence[int]
    ) -> "RootConfiguration":
        flat = list(values)
        levels, start = [], 0
        for count in m:
            levels.append(tuple(flat[start : start + count]))
            start += count
        return cls(tuple(levels))

    @property
    def n(self) -> int:
        return len(self.levels)

    @property
    def m(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    def flat(self) -> npt.NDArray[np.complex128]:
        return np.array(
            [u for level in self.levels for u in level], dtype=np.complex128
        )

    def is_empty(self) -> bool:
        return sum(self.m) == 0


@dataclass(frozen=True)
class ProbeValue:
    point: complex
    value: complex


@dataclass(frozen=True)
class BetheSolution:
    roots: RootConfiguration
    residual: float
    dynkin: IrrepLabel
    dimension: int
    energy: complex
    probes: Tuple[ProbeValue, ...]
    iterations: int = 0

    @property
    def m(self) -> Tuple[int, ...]:
        return self.roots.m

    @property
    def lambda_at_probe(self) -> complex:
        return self.probes[0].value


@dataclass(frozen=True)
class SolveFailure:
    """Why a Newton run produced no admissible solution."""

    reason: str
    residual: float
    iterations: int


from a2nchain.bethe.equations import (  # noqa: E402
    bethe_residual,
    canonical_root,
    canonicalize,
    chi_fn,
    configurations_match,
    e_fn,
    equation_residuals,
    root_distance,
)
from a2nchain.bethe.labels import (  # noqa: E402
    cartan_weights,
    dynkin_label,
    enumerate_admissible,
    expected_multiplicity,
)
from a2nchain.bethe.eigenvalue import (  # noqa: E402
    energy,
    probe_eigenvalue,
    transfer_eigenvalue,
)

__all__ = [
    "RootConfiguration",
    "ProbeValue",
    "BetheSolution",
    "SolveFailure",
    "bethe_residual",
    "canonical_root",
    "canonicalize",
    "chi_fn",
    "configurations_match",
    "e_fn",
    "equation_residuals",
    "root_distance",
    "cartan_weights",
    "dynkin_label",
    "enumerate_admissible",
    "expected_multiplicity",
    "energy",
    "probe_eigenvalue",
    "transfer_eigenvalue",
]
