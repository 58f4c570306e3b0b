import math
from abc import abstractmethod
from typing import List, Sequence, Tuple

import numpy as np
from overrides import override

from a2nchain.bethe import RootConfiguration
from a2nchain.config import Component, System
from a2nchain.types import ModelParams


class SeedStrategy(Component):
    """Interface for producing Newton starting points for a given cardinality"""

    @abstractmethod
    def generate(
        self, m: Sequence[int], p: ModelParams, count: int, seed: int
    ) -> List[RootConfiguration]:
        """Return `count` starting configurations. The same (m, p, count, seed)
        must always give the same list."""
        pass


# (shape, weight) pairs; the shapes are the root patterns seen in solved chains.
_SHAPES: Tuple[Tuple[str, float], ...] = (
    ("real", 0.4),
    ("pair", 0.25),
    ("imaginary", 0.25),
    ("pi_line", 0.1),
)


class StratifiedSeedStrategy(SeedStrategy):
    """Random seeds drawn per shape: near-real roots, conjugate pairs, roots near
    the imaginary axis, and roots near the Im u = pi line."""

    def __init__(self, system: System):
        super().__init__(system)
        self._max_re = 3.0

    def _level(self, count: int, rng: np.random.Generator) -> List[complex]:
        names = [s for s, _ in _SHAPES]
        weights = np.array([w for _, w in _SHAPES])
        roots: List[complex] = []
        while len(roots) < count:
            left = count - len(roots)
            probs = weights.copy()
            if left < 2:
                probs[names.index("pair")] = 0.0
            shape = names[rng.choice(len(names), p=probs / probs.sum())]
            if shape == "real":
                x = rng.uniform(0.05, self._max_re)
                roots.append(complex(x, rng.uniform(0, 0.2)))
            elif shape == "pair":
                x, y = rng.uniform(0.05, 1.8), rng.uniform(0.1, 1.6)
                roots += [complex(x, y), complex(x, -y)]
            elif shape == "imaginary":
                roots.append(complex(rng.uniform(0.0, 0.05), rng.uniform(0.2, 3.0)))
            else:
                roots.append(
                    complex(rng.uniform(0.05, 1.5), math.pi + rng.uniform(-0.2, 0.2))
                )
        return roots

    @override
    def generate(
        self, m: Sequence[int], p: ModelParams, count: int, seed: int
    ) -> List[RootConfiguration]:
        rng = np.random.default_rng([seed, p.n, p.N, *m])
        return [
            RootConfiguration(tuple(tuple(self._level(k, rng)) for k in m))
            for _ in range(count)
        ]
