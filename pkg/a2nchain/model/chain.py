import cmath
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from a2nchain.errors import InvalidParameterError, ResourceCapExceededError
from a2nchain.linalg import (
    frobenius,
    kron,
    partial_trace,
    permutation_operator,
    site_embed,
    trace_out,
)
from a2nchain.model.k_matrix import (
    boundary_data,
    k_minus,
    k_minus_prime_zero,
    k_plus,
)
from a2nchain.model.r_matrix import m_matrix, r_matrix, r_prime_zero, xi
from a2nchain.types import BoundarySet, ModelParams, Operator

logger = logging.getLogger(__name__)

DEFAULT_ASSEMBLY_CAP = 2401


@dataclass(frozen=True)
class ChainOperators:
    """The local pieces every chain-level check starts from."""

    params: ModelParams
    h2: Operator
    h2tilde: Optional[Operator]
    c1: complex
    c2: complex


def two_site_h(p: ModelParams) -> Operator:
    return permutation_operator(p.d) @ r_prime_zero(p) / xi(0, p)


def two_site_h_tilde(p: ModelParams) -> Operator:
    if p.boundary != BoundarySet.II:
        raise InvalidParameterError("h-tilde is defined for the second boundary set")
    bd = boundary_data(p)
    Kp = k_minus_prime_zero(p)
    I = np.eye(p.d)
    return two_site_h(p) + (kron(Kp, I) - kron(I, Kp)) / (2 * bd.kappa)


def hamiltonian(p: ModelParams) -> Operator:
    """Sum of two-site terms; for set II the bond term is h-tilde plus a U_N field.

    N=1 is accepted: set I gives the zero operator, set II the bare U_1 field.
    """
    d, N = p.d, p.N
    H = np.zeros((p.dim, p.dim), dtype=np.complex128)
    if p.boundary == BoundarySet.I:
        bond = two_site_h(p)
    else:
        bond = two_site_h_tilde(p)
    for k in range(1, N):
        H += site_embed(bond, [k, k + 1], N, d)
    if p.boundary == BoundarySet.II:
        bd = boundary_data(p)
        H += bd.mu / (2 * bd.kappa) * site_embed(bd.U, [N], N, d)
    return H


def sklyanin_hamiltonian(p: ModelParams) -> Operator:
    """The unreduced Hamiltonian with both boundary terms kept explicitly."""
    d, N = p.d, p.N
    bd = boundary_data(p)
    h = two_site_h(p)
    H = np.zeros((p.dim, p.dim), dtype=np.complex128)
    for k in range(1, N):
        H += site_embed(h, [k, k + 1], N, d)
    H += site_embed(k_minus_prime_zero(p), [1], N, d) / (2 * bd.kappa)

    Kp0 = k_plus(0, p)
    right = partial_trace(kron(np.eye(d), Kp0) @ h, 2, d) / np.trace(Kp0)
    H += site_embed(right, [N], N, d)
    return H


def boundary_term_check(p: ModelParams) -> Tuple[float, float]:
    """Off-diagonal max and diagonal spread of tr_0 M_0 h_{N0}, relative to its size."""
    d = p.d
    X = partial_trace(kron(np.eye(d), m_matrix(p)) @ two_site_h(p), 2, d)
    scale = max(1.0, frobenius(X))
    off = X - np.diag(np.diag(X))
    diag = np.diag(X)
    return (
        float(np.max(np.abs(off))) / scale,
        float(np.max(np.abs(diag - diag[0]))) / scale,
    )


def transfer_matrix(
    u: complex, p: ModelParams, cap: int = DEFAULT_ASSEMBLY_CAP
) -> Operator:
    """Double-row transfer matrix; the auxiliary space is slot N+1."""
    d, N = p.d, p.N
    slots = N + 1
    if d**slots > cap:
        raise ResourceCapExceededError(
            f"transfer-matrix assembly needs dimension {d ** slots}, cap is {cap}"
        )
    a = slots
    R = r_matrix(u, p)

    T = np.eye(d**slots, dtype=np.complex128)
    for k in range(N, 0, -1):
        T = T @ site_embed(R, [a, k], slots, d)
    T_hat = np.eye(d**slots, dtype=np.complex128)
    for k in range(1, N + 1):
        T_hat = T_hat @ site_embed(R, [k, a], slots, d)

    Kp = site_embed(k_plus(u, p), [a], slots, d)
    Km = site_embed(k_minus(u, p), [a], slots, d)
    return trace_out(Kp @ T @ Km @ T_hat, a, d, slots)


def transfer_symmetry_residual(u: complex, p: ModelParams) -> float:
    t = transfer_matrix(u, p)
    return frobenius(t - t.T) / max(1.0, frobenius(t))


def normalization_constants(p: ModelParams) -> Tuple[complex, complex]:
    n, N, eta = p.n, p.N, p.eta
    sinh, cosh = cmath.sinh, cmath.cosh
    if p.boundary == BoundarySet.I:
        c1 = (
            4 ** (N + 1)
            * sinh((2 * n + 1) * eta)
            * cosh((2 * n - 1) * eta)
            * sinh(2 * eta) ** (2 * N - 1)
            * cosh((2 * n + 1) * eta) ** (2 * N)
        )
        c2 = cosh((6 * n + 1) * eta) / (
            2 * sinh((4 * n + 2) * eta) * cosh((2 * n - 1) * eta)
        )
        return c1, c2
    g = cosh(eta) + 1j * sinh(2 * n * eta)
    c1 = (
        2 ** (2 * N + 1)
        * g**2
        * sinh((4 * n + 2) * eta)
        * cosh((2 * n + 3) * eta)
        * (sinh(2 * eta) * cosh((2 * n + 1) * eta)) ** (2 * N - 1)
    )
    c2 = cosh((6 * n + 5) * eta) / (
        2 * sinh((4 * n + 2) * eta) * cosh((2 * n + 3) * eta)
    ) + 1j * cosh(2 * n * eta) / g
    return c1, c2


def chain_operators(p: ModelParams) -> ChainOperators:
    c1, c2 = normalization_constants(p)
    tilde = two_site_h_tilde(p) if p.boundary == BoundarySet.II else None
    return ChainOperators(params=p, h2=two_site_h(p), h2tilde=tilde, c1=c1, c2=c2)
