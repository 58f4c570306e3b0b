import itertools
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from a2nchain.errors import InadmissibleConfigurationError, InvalidParameterError
from a2nchain.reps import Decomposition, IrrepLabel, Weight, tensor_power_decompose
from a2nchain.reps.weights import DEFAULT_IRREP_CAP
from a2nchain.types import Algebra, ModelParams


def _check_rank(m: Sequence[int], p: ModelParams) -> Tuple[int, ...]:
    m = tuple(int(x) for x in m)
    if len(m) != p.n:
        raise InvalidParameterError(f"cardinalities {list(m)} do not match rank {p.n}")
    if any(x < 0 for x in m):
        raise InadmissibleConfigurationError(f"negative cardinality in {list(m)}")
    return m


def _raw_labels(m: Tuple[int, ...], p: ModelParams, algebra: Algebra) -> List[int]:
    n, N = p.n, p.N
    if n == 1:
        return [2 * (N - m[0]) if algebra == Algebra.B else N - m[0]]
    ext = (N,) + m + (0,)
    labels = [ext[i - 1] - 2 * ext[i] + ext[i + 1] for i in range(1, n)]
    tail = m[n - 2] - m[n - 1]
    labels.append(2 * tail if algebra == Algebra.B else tail)
    return labels


def dynkin_label(m: Sequence[int], p: ModelParams, algebra: Algebra) -> IrrepLabel:
    m = _check_rank(m, p)
    labels = _raw_labels(m, p, algebra)
    if any(a < 0 for a in labels):
        raise InadmissibleConfigurationError(
            f"cardinalities {list(m)} give Dynkin label {labels} at N={p.N}"
        )
    return IrrepLabel(algebra, tuple(labels))


def cartan_weights(m: Sequence[int], p: ModelParams) -> Weight:
    """h_1 = N - m_1 and h_i = m_{i-1} - m_i."""
    m = _check_rank(m, p)
    ext = (p.N,) + m
    return tuple(Fraction(ext[i] - ext[i + 1]) for i in range(p.n))


def enumerate_admissible(p: ModelParams, algebra: Algebra) -> List[Tuple[int, ...]]:
    """All cardinality tuples with nonnegative Dynkin labels.

    Nonnegative labels force N >= m_1 >= m_2 >= ... >= m_n >= 0, so the
    search box [0, N]^n is exhaustive.
    """
    out = []
    for m in itertools.product(range(p.N + 1), repeat=p.n):
        if all(a >= 0 for a in _raw_labels(m, p, algebra)):
            out.append(m)
    return out


def expected_multiplicity(
    m: Sequence[int],
    p: ModelParams,
    algebra: Algebra,
    decomposition: Optional[Decomposition] = None,
    cap: int = DEFAULT_IRREP_CAP,
) -> int:
    """How many Bethe solutions the tensor-power decomposition predicts for m."""
    if decomposition is None:
        decomposition = tensor_power_decompose(p, algebra, cap=cap)
    return decomposition.multiplicity(dynkin_label(m, p, algebra))
