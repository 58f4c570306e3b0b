import logging
from functools import reduce
from typing import Callable, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg

from a2nchain.errors import (
    ConvergenceError,
    DimensionMismatchError,
    InvalidParameterError,
    ResourceCapExceededError,
)
from a2nchain.types import Operator

logger = logging.getLogger(__name__)

DEFAULT_EIG_CAP = 1024


def kron(*ops: Operator) -> Operator:
    """Kronecker product, left factor slowest-varying."""
    if not ops:
        raise InvalidParameterError("kron needs at least one operand")
    return reduce(np.kron, ops).astype(np.complex128)


def identity(d: int) -> Operator:
    return np.eye(d, dtype=np.complex128)


def elementary_matrix(d: int, a: int, b: int) -> Operator:
    """The matrix unit e_{ab} with one-based indices."""
    if not (1 <= a <= d and 1 <= b <= d):
        raise InvalidParameterError(f"index ({a}, {b}) out of range for d={d}")
    e = np.zeros((d, d), dtype=np.complex128)
    e[a - 1, b - 1] = 1.0
    return e


def permutation_operator(d: int) -> Operator:
    if d < 1:
        raise InvalidParameterError(f"local dimension must be >= 1, got {d}")
    P = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            P[b * d + a, a * d + b] = 1.0
    return P


def _square_dims(M: Operator, d: int, slots: int) -> None:
    expected = d**slots
    if M.shape != (expected, expected):
        raise InvalidParameterError(
            f"operator of shape {M.shape} does not factor as {slots} sites of dim {d}"
        )


def partial_transpose(M: Operator, which: int, d: int) -> Operator:
    """Transpose the indices of one factor of an operator on V (x) V."""
    _square_dims(M, d, 2)
    t = M.reshape(d, d, d, d)
    if which == 1:
        t = t.transpose(2, 1, 0, 3)
    elif which == 2:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise InvalidParameterError(f"factor must be 1 or 2, got {which}")
    return np.ascontiguousarray(t).reshape(d * d, d * d)


def trace_out(M: Operator, slot: int, d: int, slots: int) -> Operator:
    """Trace over one factor (1-based) of an operator on `slots` sites."""
    _square_dims(M, d, slots)
    if not 1 <= slot <= slots:
        raise InvalidParameterError(f"slot {slot} out of range 1..{slots}")
    t = M.reshape((d,) * (2 * slots))
    reduced = np.trace(t, axis1=slot - 1, axis2=slots + slot - 1)
    rest = d ** (slots - 1)
    return np.ascontiguousarray(reduced).reshape(rest, rest)


def partial_trace(M: Operator, which: int, d: int) -> Operator:
    if which not in (1, 2):
        raise InvalidParameterError(f"factor must be 1 or 2, got {which}")
    return trace_out(M, which, d, 2)


def site_embed(op: Operator, sites: Sequence[int], N: int, d: int) -> Operator:
    """Act with `op` on the listed sites of an N-site chain, identity elsewhere.

    The order of `sites` is the order of op's own tensor factors, so
    site_embed(R, [3, 1], ...) realizes R_{31}.
    """
    k = len(sites)
    if k == 0:
        raise InvalidParameterError("at least one site is required")
    if len(set(sites)) != k:
        raise InvalidParameterError(f"overlapping sites {list(sites)}")
    if any(s < 1 or s > N for s in sites):
        raise InvalidParameterError(f"sites {list(sites)} out of range 1..{N}")
    _square_dims(op, d, k)

    rest = [s for s in range(1, N + 1) if s not in sites]
    full = np.kron(op, np.eye(d ** (N - k), dtype=np.complex128))
    order = list(sites) + rest
    perm = [order.index(s) for s in range(1, N + 1)]
    t = full.reshape((d,) * (2 * N)).transpose(perm + [N + p for p in perm])
    return np.ascontiguousarray(t).reshape(d**N, d**N)


def commutator(A: Operator, B: Operator) -> Operator:
    if A.shape != B.shape:
        raise DimensionMismatchError(f"cannot commute {A.shape} with {B.shape}")
    return A @ B - B @ A


def frobenius(M: npt.ArrayLike) -> float:
    return float(np.linalg.norm(M))


def relative_residual(lhs: Operator, rhs: Operator) -> float:
    """Frobenius distance relative to max(1, size of the operands)."""
    if lhs.shape != rhs.shape:
        raise DimensionMismatchError(f"cannot compare {lhs.shape} with {rhs.shape}")
    scale = max(1.0, frobenius(lhs), frobenius(rhs))
    return frobenius(lhs - rhs) / scale


def is_finite(M: Operator) -> bool:
    return bool(np.all(np.isfinite(M)))


def eig(
    M: Operator, cap: int = DEFAULT_EIG_CAP, tol: float = 1e-8
) -> Tuple[npt.NDArray[np.complex128], Operator]:
    """General (non-Hermitian) eigendecomposition with a per-pair residual check."""
    dim = M.shape[0]
    if M.shape != (dim, dim):
        raise DimensionMismatchError(f"eig needs a square matrix, got {M.shape}")
    if dim > cap:
        raise ResourceCapExceededError(f"eig of dimension {dim} exceeds cap {cap}")
    if dim == 0:
        return np.zeros(0, dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128)
    try:
        w, V = scipy.linalg.eig(M)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise ConvergenceError(f"eigensolver failed: {e}") from e

    scale = max(1.0, float(np.linalg.norm(M, 2)))
    worst = float(np.max(np.linalg.norm(M @ V - V * w, axis=0))) / scale
    if not np.isfinite(worst) or worst > tol:
        raise ConvergenceError(
            f"eigenpairs of a {dim}x{dim} matrix have residual {worst:.3e}", worst
        )
    return w.astype(np.complex128), V.astype(np.complex128)


def num_derivative(
    f: Callable[[complex], Operator], u0: complex, step: float = 1e-5
) -> Operator:
    """Central difference at h and h/2, combined by one Richardson step."""

    def central(h: float) -> Operator:
        return (f(u0 + h) - f(u0 - h)) / (2 * h)

    coarse = central(step)
    fine = central(step / 2)
    return (4 * fine - coarse) / 3
