from typing import List, Sequence, Tuple

import numpy as np

from a2nchain.linalg import commutator, elementary_matrix
from a2nchain.qgroup import GeneratorSet
from a2nchain.types import Algebra, ModelParams, Operator


def _cartan(p: ModelParams) -> List[Operator]:
    d = p.d
    return [
        elementary_matrix(d, a, a) - elementary_matrix(d, d + 1 - a, d + 1 - a)
        for a in range(1, p.n + 1)
    ]


def _bulk_raising(p: ModelParams, alpha: int) -> Operator:
    d = p.d
    return elementary_matrix(d, alpha, alpha + 1) + elementary_matrix(
        d, d - alpha, d + 1 - alpha
    )


def bn_generators(p: ModelParams) -> GeneratorSet:
    raising = [_bulk_raising(p, a) for a in range(1, p.n + 1)]
    return GeneratorSet(
        algebra=Algebra.B,
        n=p.n,
        cartan=_cartan(p),
        raising=raising,
        lowering=[E.T.copy() for E in raising],
    )


def cn_generators(p: ModelParams) -> GeneratorSet:
    d, n = p.d, p.n
    raising = [_bulk_raising(p, a) for a in range(1, n)]
    raising.append(elementary_matrix(d, n, n + 2))
    E0 = elementary_matrix(d, 1, d)
    return GeneratorSet(
        algebra=Algebra.C,
        n=n,
        cartan=_cartan(p),
        raising=raising,
        lowering=[E.T.copy() for E in raising],
        extra_raising=E0,
        extra_lowering=E0.T.copy(),
    )


def generators_for(p: ModelParams, algebra: Algebra) -> GeneratorSet:
    return bn_generators(p) if algebra == Algebra.B else cn_generators(p)


def simple_roots(algebra: Algebra, n: int) -> List[Tuple[int, ...]]:
    roots = []
    for j in range(n - 1):
        r = [0] * n
        r[j], r[j + 1] = 1, -1
        roots.append(tuple(r))
    last = [0] * n
    last[n - 1] = 1 if algebra == Algebra.B else 2
    roots.append(tuple(last))
    return roots


def ladder(E0: Operator, steps: Sequence[Operator]) -> Operator:
    """(-1/2)^{k} [[...[[E0, F_1], F_1]..., F_k], F_k] for steps F_1..F_k."""
    X = E0
    for F in steps:
        X = commutator(commutator(X, F), F)
    return (-0.5) ** len(steps) * X


def root_relation_residual(g: GeneratorSet) -> float:
    """Max deviation from [H_i, E_j^{+-}] = +-alpha_i^{(j)} E_j^{+-}."""
    roots = simple_roots(g.algebra, g.n)
    worst = 0.0
    for i, H in enumerate(g.cartan):
        for j, (Ep, Em) in enumerate(zip(g.raising, g.lowering)):
            a = roots[j][i]
            worst = max(worst, float(np.max(np.abs(commutator(H, Ep) - a * Ep))))
            worst = max(worst, float(np.max(np.abs(commutator(H, Em) + a * Em))))
    return worst


def ladder_residual(g: GeneratorSet) -> float:
    """Both signs of the C_n ladder that builds E_n^{+-} from E_0^{+-}."""
    if g.algebra != Algebra.C:
        return 0.0
    assert g.extra_raising is not None and g.extra_lowering is not None
    up = ladder(g.extra_raising, g.lowering[: g.n - 1])
    down = ladder(g.extra_lowering, g.raising[: g.n - 1])
    return max(
        float(np.max(np.abs(up - g.raising[-1]))),
        float(np.max(np.abs(down - g.lowering[-1]))),
    )


def u_commutation_residual(g: GeneratorSet) -> float:
    d = 2 * g.n + 1
    U = elementary_matrix(d, g.n + 1, g.n + 1)
    gens = [*g.cartan, *g.raising, *g.lowering]
    if g.extra_raising is not None and g.extra_lowering is not None:
        gens += [g.extra_raising, g.extra_lowering]
    return max(float(np.max(np.abs(commutator(X, U)))) for X in gens)
