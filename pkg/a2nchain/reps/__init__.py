from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from a2nchain.errors import InadmissibleConfigurationError
from a2nchain.types import Algebra

# Orthogonal-basis coordinates; half-integers only occur for B_n spinor weights.
Weight = Tuple[Fraction, ...]


@dataclass(frozen=True, order=True)
class IrrepLabel:
    algebra: Algebra
    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "algebra", Algebra(self.algebra))
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        if not self.labels:
            raise InadmissibleConfigurationError("a Dynkin label needs rank >= 1")
        if any(a < 0 for a in self.labels):
            raise InadmissibleConfigurationError(
                f"Dynkin label {list(self.labels)} has a negative entry"
            )

    @property
    def n(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.labels) + "]"


@dataclass
class Decomposition:
    """Irreducible content of a representation, label -> multiplicity."""

    algebra: Algebra
    n: int
    entries: Dict[IrrepLabel, int] = field(default_factory=dict)

    def add(self, label: IrrepLabel, count: int = 1) -> None:
        self.entries[label] = self.entries.get(label, 0) + count

    def multiplicity(self, label: IrrepLabel) -> int:
        return self.entries.get(label, 0)

    def total_dimension(self) -> int:
        return sum(c * weyl_dimension(label) for label, c in self.entries.items())

    def items(self) -> List[Tuple[IrrepLabel, int]]:
        """Entries sorted by dimension, then label."""
        return sorted(
            self.entries.items(), key=lambda kv: (weyl_dimension(kv[0]), kv[0].labels)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Decomposition):
            return NotImplemented
        mine = {k: v for k, v in self.entries.items() if v}
        theirs = {k: v for k, v in other.entries.items() if v}
        return self.algebra == other.algebra and mine == theirs

    def __str__(self) -> str:
        parts = [f"{c}{label}" if c > 1 else str(label) for label, c in self.items()]
        return " + ".join(parts) if parts else "0"


from a2nchain.reps.weights import (  # noqa: E402
    fundamental_weights,
    label_to_weight,
    positive_roots,
    site_weights,
    weight_cache,
    weight_system,
    weight_to_label,
    weyl_dimension,
)
from a2nchain.reps.decompose import (  # noqa: E402
    tensor_power_decompose,
    tensor_power_weights,
)

__all__ = [
    "Weight",
    "IrrepLabel",
    "Decomposition",
    "fundamental_weights",
    "label_to_weight",
    "positive_roots",
    "site_weights",
    "weight_cache",
    "weight_system",
    "weight_to_label",
    "weyl_dimension",
    "tensor_power_decompose",
    "tensor_power_weights",
]
