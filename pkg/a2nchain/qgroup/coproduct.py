"""Coproducts of the U_q(B_n) and U_q(C_n) generators.

Every generator other than C_n's E_n^{+-} is twisted-primitive,
Delta(X) = X (x) K_R + K_L (x) X with group-like K_L, K_R, so iterated
coproducts are kept as sums of elementary tensor terms and only turned into
matrices at the end. E_n^{+-} of C_n has no such form and is rebuilt at each
site count from the commutator ladder.
"""
import cmath
import logging
from dataclasses import dataclass
from typing import Dict, List, Literal, Sequence, Tuple, Union

import numpy as np

from a2nchain.errors import InvalidParameterError, ResourceCapExceededError
from a2nchain.linalg import DEFAULT_EIG_CAP, kron, relative_residual
from a2nchain.qgroup import CoproductSet, GeneratorSet
from a2nchain.qgroup.generators import ladder
from a2nchain.types import (
    Algebra,
    ModelParams,
    Operator,
    Residual,
    ResidualReport,
    collect,
    residual,
)

logger = logging.getLogger(__name__)

Nesting = Literal["left", "right"]


@dataclass(frozen=True)
class _Twisted:
    element: Operator
    left: Operator
    right: Operator


_Factor = Union[_Twisted, Operator]
_Term = Tuple[_Factor, ...]


def _diag_exp(X: Operator, c: complex) -> Operator:
    return np.diag(np.exp(c * np.diag(X))).astype(np.complex128)


def _split(f: _Factor) -> List[Tuple[_Factor, _Factor]]:
    if isinstance(f, _Twisted):
        return [(f, f.right), (f.left, f)]
    return [(f, f)]


def _nest(x: _Twisted, N: int, nesting: Nesting) -> List[_Term]:
    terms: List[_Term] = [(x,)]
    for _ in range(N - 1):
        grown: List[_Term] = []
        for term in terms:
            if nesting == "left":
                grown.extend((a, b, *term[1:]) for a, b in _split(term[0]))
            else:
                grown.extend((*term[:-1], a, b) for a, b in _split(term[-1]))
        terms = grown
    return terms


def _materialize(terms: Sequence[_Term]) -> Operator:
    def matrix(f: _Factor) -> Operator:
        return f.element if isinstance(f, _Twisted) else f

    return sum(kron(*(matrix(f) for f in term)) for term in terms)  # type: ignore


class _Coalgebra:
    """The twisted-primitive data of one generator set."""

    def __init__(self, g: GeneratorSet, p: ModelParams):
        self.g = g
        self.p = p
        I = np.eye(p.d, dtype=np.complex128)
        eta = p.eta
        H = g.cartan
        n = g.n

        def H_at(j: int) -> Operator:
            # H_{n+1} is zero
            return H[j - 1] if j <= n else np.zeros_like(I)

        self.cartan = [_Twisted(h, I, I) for h in H]
        self.raising: List[_Twisted] = []
        self.lowering: List[_Twisted] = []
        self.extra: List[_Twisted] = []

        if g.algebra == Algebra.B:
            for j in range(1, n + 1):
                diff = H_at(j) - H_at(j + 1)
                right = _diag_exp(H_at(j), 1j * cmath.pi) @ _diag_exp(diff, eta)
                left = _diag_exp(H_at(j), -1j * cmath.pi) @ _diag_exp(diff, -eta)
                self.raising.append(_Twisted(g.raising[j - 1], left, right))
                self.lowering.append(_Twisted(g.lowering[j - 1], left, right))
        else:
            for j in range(1, n):
                diff = H_at(j) - H_at(j + 1)
                right = _diag_exp(H_at(j + 1), 1j * cmath.pi)
                left = right @ _diag_exp(diff, -2 * eta)
                self.raising.append(_Twisted(g.raising[j - 1], left, right))
                self.lowering.append(_Twisted(g.lowering[j - 1], left, right))
            assert g.extra_raising is not None and g.extra_lowering is not None
            boost = _diag_exp(H[0], 4 * eta)
            self.extra = [
                _Twisted(g.extra_raising, boost, I),
                _Twisted(g.extra_lowering, boost, I),
            ]

    def coproduct(self, x: _Twisted, N: int, nesting: Nesting) -> Operator:
        return _materialize(_nest(x, N, nesting))

    def top_pair(self, N: int, nesting: Nesting) -> Tuple[Operator, Operator]:
        """C_n's E_n^+ and E_n^- on N sites via the commutator ladder."""
        E0p, E0m = (self.coproduct(x, N, nesting) for x in self.extra)
        n = self.g.n
        ups = [self.coproduct(x, N, nesting) for x in self.raising[: n - 1]]
        downs = [self.coproduct(x, N, nesting) for x in self.lowering[: n - 1]]
        return ladder(E0p, downs), ladder(E0m, ups)


def nfold_coproduct(
    g: GeneratorSet,
    p: ModelParams,
    N: int,
    nesting: Nesting = "left",
    cap: int = DEFAULT_EIG_CAP,
) -> CoproductSet:
    if N < 1:
        raise InvalidParameterError(f"site count must be >= 1, got {N}")
    if p.d**N > cap:
        raise ResourceCapExceededError(
            f"{N}-site coproducts have dimension {p.d ** N}, cap is {cap}"
        )
    co = _Coalgebra(g, p)
    cartan = [co.coproduct(x, N, nesting) for x in co.cartan]
    raising = [co.coproduct(x, N, nesting) for x in co.raising]
    lowering = [co.coproduct(x, N, nesting) for x in co.lowering]
    extra_raising = extra_lowering = None
    if g.algebra == Algebra.C:
        top_up, top_down = co.top_pair(N, nesting)
        raising.append(top_up)
        lowering.append(top_down)
        extra_raising = co.coproduct(co.extra[0], N, nesting)
        extra_lowering = co.coproduct(co.extra[1], N, nesting)
    logger.debug(f"Built {nesting}-nested {g.algebra.value}{g.n} coproducts on {N} sites")
    return CoproductSet(
        site_count=N,
        algebra=g.algebra,
        cartan=cartan,
        raising=raising,
        lowering=lowering,
        extra_raising=extra_raising,
        extra_lowering=extra_lowering,
    )


def coproduct_two_site(g: GeneratorSet, p: ModelParams) -> CoproductSet:
    return nfold_coproduct(g, p, 2)


def coassociativity_residuals(g: GeneratorSet, p: ModelParams) -> Dict[str, float]:
    """(Delta (x) I)Delta(X) against (I (x) Delta)Delta(X) for every generator."""
    co = _Coalgebra(g, p)
    named: List[Tuple[str, _Twisted]] = []
    named += [(f"H{j + 1}", x) for j, x in enumerate(co.cartan)]
    named += [(f"E{j + 1}+", x) for j, x in enumerate(co.raising)]
    named += [(f"E{j + 1}-", x) for j, x in enumerate(co.lowering)]
    if g.algebra == Algebra.C:
        named += [("E0+", co.extra[0]), ("E0-", co.extra[1])]

    out: Dict[str, float] = {}
    for name, x in named:
        out[name] = relative_residual(
            co.coproduct(x, 3, "left"), co.coproduct(x, 3, "right")
        )
    if g.algebra == Algebra.C:
        left = co.top_pair(3, "left")
        right = co.top_pair(3, "right")
        out[f"E{g.n}+"] = relative_residual(left[0], right[0])
        out[f"E{g.n}-"] = relative_residual(left[1], right[1])
    return out


def ladder_agreement_residual(g: GeneratorSet, p: ModelParams, N: int) -> float:
    """C_n only: the N-site ladder on left- and right-nested coproducts agree."""
    if g.algebra != Algebra.C:
        return 0.0
    co = _Coalgebra(g, p)
    left = co.top_pair(N, "left")
    right = co.top_pair(N, "right")
    return max(relative_residual(a, b) for a, b in zip(left, right))


def relation_report(
    g: GeneratorSet, p: ModelParams, tol: float = 1e-9
) -> ResidualReport:
    """The two-site q-deformed commutation relations of the active algebra."""
    cop = coproduct_two_site(g, p)
    n, eta = g.n, p.eta
    I2 = np.eye(p.d**2, dtype=np.complex128)
    zero = np.zeros_like(I2)

    def dH(j: int) -> Operator:
        return cop.cartan[j - 1] if j <= n else zero

    def omega(i: int, j: int) -> Operator:
        if abs(i - j) == 1:
            site = _diag_exp(g.cartan[max(i, j) - 1], 1j * cmath.pi)
            return kron(site, np.eye(p.d))
        return I2

    Ep, Em = cop.raising, cop.lowering
    worst: Dict[str, float] = {}

    def record(name: str, value: float) -> None:
        worst[name] = max(worst.get(name, 0.0), value)

    if g.algebra == Algebra.B:
        q = p.q
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                Om = omega(i, j)
                lhs = Om @ Ep[i - 1] @ Em[j - 1] - Em[j - 1] @ Ep[i - 1] @ Om
                rhs = zero
                if i == j:
                    X = dH(i) - dH(i + 1)
                    rhs = (_diag_exp(X, 2 * eta) - _diag_exp(X, -2 * eta)) / (q - 1 / q)
                record("q_commutator", relative_residual(lhs, rhs))
    else:
        for i in range(1, n):
            for j in range(1, n):
                if i == j:
                    X = dH(i) - dH(i + 1)
                    up, down = Ep[i - 1], Em[i - 1]
                    lhs = up @ down - cmath.exp(4 * eta) * down @ up
                    rhs = (_diag_exp(X, -4 * eta) - I2) / (cmath.exp(-4 * eta) - 1)
                    record("q_commutator_diagonal", relative_residual(lhs, rhs))
                elif abs(i - j) == 1:
                    Om = omega(i, j)
                    lhs = cmath.exp(2 * eta) * Om @ Ep[i - 1] @ Em[j - 1]
                    rhs = Em[j - 1] @ Ep[i - 1] @ Om
                    record("q_commutator_adjacent", relative_residual(lhs, rhs))
                else:
                    lhs = Ep[i - 1] @ Em[j - 1]
                    rhs = Em[j - 1] @ Ep[i - 1]
                    record("q_commutator_distant", relative_residual(lhs, rhs))

    residuals: List[Residual] = [residual(k, v, tol) for k, v in worst.items()]
    return collect(residuals)
