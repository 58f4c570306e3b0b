import logging
from collections import Counter
from fractions import Fraction
from typing import Dict

from a2nchain.errors import DecompositionError, ResourceCapExceededError
from a2nchain.linalg import DEFAULT_EIG_CAP
from a2nchain.reps import Decomposition, Weight
from a2nchain.reps.weights import (
    DEFAULT_IRREP_CAP,
    site_weights,
    weight_system,
    weight_to_label,
)
from a2nchain.types import Algebra, ModelParams

logger = logging.getLogger(__name__)


def tensor_power_weights(p: ModelParams, algebra: Algebra) -> Dict[Weight, int]:
    """Weight multiset of the N-fold tensor power of the site representation."""
    single = Counter(site_weights(p, algebra))
    total: Counter = Counter({tuple(Fraction(0) for _ in range(p.n)): 1})
    for _ in range(p.N):
        grown: Counter = Counter()
        for w, c in total.items():
            for s, k in single.items():
                grown[tuple(x + y for x, y in zip(w, s))] += c * k
        total = grown
    return dict(total)


def tensor_power_decompose(
    p: ModelParams,
    algebra: Algebra,
    cap: int = DEFAULT_EIG_CAP,
    irrep_cap: int = DEFAULT_IRREP_CAP,
) -> Decomposition:
    """Peel irreps off the weight multiset, highest (lexicographic) weight first."""
    if p.dim > cap:
        raise ResourceCapExceededError(
            f"tensor power of dimension {p.dim} exceeds cap {cap}"
        )
    remaining = Counter(tensor_power_weights(p, algebra))
    result = Decomposition(algebra=algebra, n=p.n)

    while remaining:
        top = max(remaining)
        count = remaining[top]
        label = weight_to_label(top, algebra)
        result.add(label, count)
        for w, m in weight_system(label, irrep_cap).items():
            left = remaining.get(w, 0) - count * m
            if left < 0:
                raise DecompositionError(
                    f"peeling {count}x{label} leaves weight {[str(x) for x in w]} "
                    f"with multiplicity {left}"
                )
            if left == 0:
                remaining.pop(w, None)
            else:
                remaining[w] = left

    logger.info(f"{algebra.value}{p.n}, N={p.N}: V^(x)N = {result}")
    return result
