"""Weights, Weyl dimensions and weight systems of B_n and C_n irreps.

Everything here is exact rational arithmetic. Roots and weights live in the
orthogonal basis e_1..e_n, where the invariant form is the plain dot product.
"""
import logging
from collections import deque
from fractions import Fraction
from typing import Dict, List, Sequence

import numpy as np

from a2nchain.errors import (
    InadmissibleConfigurationError,
    InvalidParameterError,
    ResourceCapExceededError,
)
from a2nchain.qgroup.generators import generators_for
from a2nchain.reps import IrrepLabel, Weight
from a2nchain.types import Algebra, ModelParams
from a2nchain.utils.lru_cache import MemoCache

logger = logging.getLogger(__name__)

DEFAULT_IRREP_CAP = 10_000

weight_cache: "MemoCache[IrrepLabel, Dict[Weight, int]]" = MemoCache(256)

_HALF = Fraction(1, 2)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _add(a: Weight, b: Weight, k: int = 1) -> Weight:
    return tuple(x + k * y for x, y in zip(a, b))


def _zero(n: int) -> Weight:
    return tuple(Fraction(0) for _ in range(n))


def fundamental_weights(algebra: Algebra, n: int) -> List[Weight]:
    last = _HALF if algebra == Algebra.B else Fraction(1)
    out: List[Weight] = []
    for j in range(1, n):
        out.append(tuple(Fraction(1) if i < j else Fraction(0) for i in range(n)))
    out.append(tuple(last for _ in range(n)))
    return out


def simple_roots(algebra: Algebra, n: int) -> List[Weight]:
    roots: List[Weight] = []
    for j in range(n - 1):
        r = [Fraction(0)] * n
        r[j], r[j + 1] = Fraction(1), Fraction(-1)
        roots.append(tuple(r))
    r = [Fraction(0)] * n
    r[n - 1] = Fraction(1) if algebra == Algebra.B else Fraction(2)
    roots.append(tuple(r))
    return roots


def positive_roots(algebra: Algebra, n: int) -> List[Weight]:
    roots: List[Weight] = []
    for i in range(n):
        for j in range(i + 1, n):
            for sign in (-1, 1):
                r = [Fraction(0)] * n
                r[i], r[j] = Fraction(1), Fraction(sign)
                roots.append(tuple(r))
        r = [Fraction(0)] * n
        r[i] = Fraction(1) if algebra == Algebra.B else Fraction(2)
        roots.append(tuple(r))
    return roots


def _weyl_vector(algebra: Algebra, n: int) -> Weight:
    total = _zero(n)
    for r in positive_roots(algebra, n):
        total = _add(total, r)
    return tuple(x * _HALF for x in total)


def _height_functional(algebra: Algebra, n: int) -> Weight:
    """h with <alpha_i, h> = 1 on every simple root."""
    if algebra == Algebra.B:
        return tuple(Fraction(n - i) for i in range(n))
    return tuple(Fraction(n - i) - _HALF for i in range(n))


def label_to_weight(label: IrrepLabel) -> Weight:
    weight = _zero(label.n)
    for a, omega in zip(label.labels, fundamental_weights(label.algebra, label.n)):
        weight = _add(weight, omega, a)
    return weight


def weight_to_label(weight: Sequence[Fraction], algebra: Algebra) -> IrrepLabel:
    """Dynkin label of a dominant weight; raises for anything else."""
    h = [Fraction(x) for x in weight]
    n = len(h)
    if n == 0:
        raise InvalidParameterError("empty weight")
    raw = [h[i] - h[i + 1] for i in range(n - 1)]
    raw.append(2 * h[-1] if algebra == Algebra.B else h[-1])
    if any(a < 0 or a.denominator != 1 for a in raw):
        raise InadmissibleConfigurationError(
            f"weight {[str(x) for x in h]} is not dominant integral for {algebra.value}{n}"
        )
    return IrrepLabel(algebra, tuple(int(a) for a in raw))


def weyl_dimension(label: IrrepLabel) -> int:
    n = label.n
    rho = _weyl_vector(label.algebra, n)
    shifted = _add(label_to_weight(label), rho)
    dim = Fraction(1)
    for alpha in positive_roots(label.algebra, n):
        dim *= _dot(shifted, alpha) / _dot(rho, alpha)
    if dim.denominator != 1:
        raise ArithmeticError(f"non-integral Weyl dimension {dim} for {label}")
    return int(dim)


def _freudenthal(label: IrrepLabel) -> Dict[Weight, int]:
    algebra, n = label.algebra, label.n
    top = label_to_weight(label)
    rho = _weyl_vector(algebra, n)
    roots = positive_roots(algebra, n)
    simple = simple_roots(algebra, n)
    height = _height_functional(algebra, n)
    top_rho = _add(top, rho)
    norm_top = _dot(top_rho, top_rho)

    def depth(mu: Weight) -> Fraction:
        return _dot(_add(top, mu, -1), height)

    mults: Dict[Weight, int] = {top: 1}
    layer = [top]
    while layer:
        candidates = sorted(
            {_add(mu, alpha, -1) for mu in layer for alpha in simple} - set(mults)
        )
        next_layer = []
        for mu in candidates:
            mu_rho = _add(mu, rho)
            denom = norm_top - _dot(mu_rho, mu_rho)
            if denom == 0:
                continue
            acc = Fraction(0)
            for alpha in roots:
                k = 1
                while True:
                    nu = _add(mu, alpha, k)
                    if depth(nu) < 0:
                        break
                    m = mults.get(nu, 0)
                    if m:
                        acc += m * _dot(nu, alpha)
                    k += 1
            value = 2 * acc / denom
            if value.denominator != 1:
                raise ArithmeticError(f"non-integral multiplicity {value} at {mu}")
            if value > 0:
                mults[mu] = int(value)
                next_layer.append(mu)
        layer = next_layer
    return mults


def weight_system(label: IrrepLabel, cap: int = DEFAULT_IRREP_CAP) -> Dict[Weight, int]:
    """All weights of the irrep with their multiplicities."""
    dim = weyl_dimension(label)
    if dim > cap:
        raise ResourceCapExceededError(
            f"irrep {label.algebra.value}{label.n}{label} has dimension {dim}, cap is {cap}"
        )
    system = weight_cache.get_or_compute(label, lambda: _freudenthal(label))
    logger.debug(f"Weight system of {label.algebra.value}{label.n}{label}: {dim} states")
    return dict(system)


def site_weights(p: ModelParams, algebra: Algebra) -> List[Weight]:
    """Weight of each single-site basis vector, read off the Cartan diagonals."""
    cartan = generators_for(p, algebra).cartan
    diagonals = np.array([np.diag(H).real for H in cartan])
    return [
        tuple(Fraction(int(round(x))) for x in diagonals[:, a]) for a in range(p.d)
    ]
