import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from a2nchain.errors import ConvergenceError, DimensionMismatchError
from a2nchain.linalg import commutator, frobenius
from a2nchain.qgroup import CoproductSet
from a2nchain.types import Operator

logger = logging.getLogger(__name__)

MAX_BASIS_CONDITION = 1e8


def symmetry_residual(cop: CoproductSet, H: Operator) -> float:
    """Largest ||[Delta_N(X), H]|| / (||Delta_N(X)|| ||H||) over the generators."""
    gens = cop.generators()
    if gens and gens[0].shape != H.shape:
        raise DimensionMismatchError(
            f"coproducts act on {gens[0].shape}, operator has shape {H.shape}"
        )
    h_norm = frobenius(H)
    if h_norm == 0.0:
        return 0.0
    worst = 0.0
    for X in gens:
        x_norm = frobenius(X)
        if x_norm == 0.0:
            continue
        worst = max(worst, frobenius(commutator(X, H)) / (x_norm * h_norm))
    return worst


def highest_weight_vectors(
    cop: CoproductSet, basis: npt.NDArray[np.complex128], rel_tol: float = 1e-7
) -> Operator:
    """Vectors in span(basis) annihilated by every Delta_N(E_i^+).

    basis holds one vector per column. Singular values of the stacked
    Delta_N(E_i^+) images below rel_tol times max(1, largest ||Delta_N(E_i^+)||)
    count as zero.
    """
    basis = np.atleast_2d(np.asarray(basis, dtype=np.complex128))
    if basis.shape[0] != cop.cartan[0].shape[0]:
        raise DimensionMismatchError(
            f"basis vectors have length {basis.shape[0]}, "
            f"coproducts act on {cop.cartan[0].shape[0]}"
        )
    s = scipy.linalg.svdvals(basis)
    cond = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    if cond > MAX_BASIS_CONDITION:
        raise ConvergenceError(
            f"eigenbasis of dimension {basis.shape[1]} is ill-conditioned "
            f"(condition number {cond:.3e})",
            cond,
        )
    logger.debug(f"Eigenbasis of dimension {basis.shape[1]} has condition {cond:.3e}")

    Q, _ = np.linalg.qr(basis)
    stacked = np.vstack([E @ Q for E in cop.raising])
    _, s, Vh = scipy.linalg.svd(stacked, full_matrices=False)
    scale = max([1.0, *(frobenius(E) for E in cop.raising)])
    rank = int(np.count_nonzero(s > rel_tol * scale))
    return Q @ Vh[rank:].conj().T


def highest_weight_count(
    cop: CoproductSet, basis: npt.NDArray[np.complex128], rel_tol: float = 1e-7
) -> int:
    return int(highest_weight_vectors(cop, basis, rel_tol).shape[1])
