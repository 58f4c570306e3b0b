from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from typing_extensions import TypedDict

from a2nchain.bethe import BetheSolution
from a2nchain.reps import Decomposition, Weight
from a2nchain.types import Algebra, ModelParams, Operator


class Ambiguity(TypedDict):
    first: int
    second: int
    gap: float


@dataclass
class Cluster:
    """Eigenvalues of H merged within tolerance, with their eigenvectors kept
    per weight sector."""

    index: int
    eigenvalue: complex
    degeneracy: int
    weight_sectors: Dict[Weight, int]
    invariant_residual: float
    highest_weights: Dict[Weight, int] = field(default_factory=dict)
    matched: List[int] = field(default_factory=list)
    # Eigenvalues of t(u) restricted to the cluster, keyed by probe point.
    transfer_values: Dict[complex, np.ndarray] = field(
        default_factory=dict, repr=False, compare=False
    )
    sector_vectors: Dict[Weight, Operator] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def highest_weight_count(self) -> int:
        return sum(self.highest_weights.values())

    def vectors(self) -> Operator:
        return np.hstack([self.sector_vectors[w] for w in sorted(self.sector_vectors)])


@dataclass
class SpectrumReport:
    params: ModelParams
    algebra: Algebra
    clusters: List[Cluster]
    ambiguities: List[Ambiguity] = field(default_factory=list)
    decomposition_observed: Optional[Decomposition] = None
    decomposition_predicted: Optional[Decomposition] = None
    # Labels of the supplied Bethe solutions, counted.
    decomposition_bethe: Optional[Decomposition] = None
    solutions: List[BetheSolution] = field(default_factory=list)
    unmatched_clusters: List[int] = field(default_factory=list)
    unmatched_solutions: List[int] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    reconciled: bool = False

    def total_degeneracy(self) -> int:
        return sum(c.degeneracy for c in self.clusters)

    @property
    def passed(self) -> bool:
        if self.failures:
            return False
        if not self.reconciled:
            return True
        if self.unmatched_clusters or self.unmatched_solutions:
            return False
        return self.decomposition_bethe == self.decomposition_predicted


from a2nchain.spectrum.analyzer import (  # noqa: E402
    SpectrumAnalyzer,
    cartan_eigen_check,
    check_prediction,
    cross_commutation_residual,
    observed_decomposition,
)

__all__ = [
    "Ambiguity",
    "Cluster",
    "SpectrumReport",
    "SpectrumAnalyzer",
    "cartan_eigen_check",
    "check_prediction",
    "cross_commutation_residual",
    "observed_decomposition",
]
