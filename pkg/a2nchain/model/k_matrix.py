import cmath
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from a2nchain.errors import DegenerateIdentityError, InvalidParameterError
from a2nchain.linalg import (
    elementary_matrix,
    frobenius,
    kron,
    num_derivative,
    partial_trace,
    partial_transpose,
    permutation_operator,
    relative_residual,
)
from a2nchain.model.r_matrix import m_matrix, r21, r_matrix, v_matrix, xi
from a2nchain.types import (
    BoundarySet,
    ModelParams,
    Operator,
    Residual,
    ResidualReport,
    collect,
    residual,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryData:
    boundary: BoundarySet
    kappa: complex
    mu: complex
    nu: complex
    U: Operator


def kappa(p: ModelParams) -> complex:
    if p.boundary == BoundarySet.I:
        return 1.0 + 0j
    return 1j * cmath.cosh(p.eta) - cmath.sinh(2 * p.n * p.eta)


def boundary_data(p: ModelParams) -> BoundaryData:
    U = elementary_matrix(p.d, p.n + 1, p.n + 1)
    if p.boundary == BoundarySet.I:
        return BoundaryData(p.boundary, 1.0 + 0j, 0j, 0j, U)
    mu = 2 * (1j * cmath.sinh(p.eta) - cmath.cosh(2 * p.n * p.eta))
    nu = 2 * cmath.cosh(2 * p.n * p.eta)
    return BoundaryData(p.boundary, kappa(p), mu, nu, U)


def _k_diagonal(u: complex, p: ModelParams) -> np.ndarray:
    n, eta = p.n, p.eta
    bulk = 1j * cmath.cosh(eta) + cmath.sinh(u - 2 * n * eta)
    middle = 1j * cmath.cosh(u + eta) - cmath.sinh(2 * n * eta)
    return np.array(
        [cmath.exp(-u) * bulk] * n + [middle] + [cmath.exp(u) * bulk] * n,
        dtype=np.complex128,
    )


def k_minus(u: complex, p: ModelParams) -> Operator:
    if p.boundary == BoundarySet.I:
        return np.eye(p.d, dtype=np.complex128)
    return np.diag(_k_diagonal(complex(u), p))


def k_minus_prime_zero(p: ModelParams) -> Operator:
    """Analytic dK^-/du at u=0."""
    if p.boundary == BoundarySet.I:
        return np.zeros((p.d, p.d), dtype=np.complex128)
    n, eta = p.n, p.eta
    kap = kappa(p)
    c = cmath.cosh(2 * n * eta)
    diag = [c - kap] * n + [1j * cmath.sinh(eta)] + [c + kap] * n
    return np.diag(np.array(diag, dtype=np.complex128))


def k_plus(u: complex, p: ModelParams) -> Operator:
    """K^+(u) = K^-(-u-rho)^t M."""
    return k_minus(-complex(u) - p.rho, p).T @ m_matrix(p)


def k_plus_is_diagonal(u: complex, p: ModelParams) -> bool:
    K = k_plus(u, p)
    return bool(np.count_nonzero(K - np.diag(np.diag(K))) == 0)


def bybe_residual(u: complex, v: complex, p: ModelParams) -> float:
    I = np.eye(p.d)
    K1, K2 = kron(k_minus(u, p), I), kron(I, k_minus(v, p))
    lhs = r_matrix(u - v, p) @ K1 @ r21(u + v, p) @ K2
    rhs = K2 @ r_matrix(u + v, p) @ K1 @ r21(u - v, p)
    return relative_residual(lhs, rhs)


def dual_bybe_residual(u: complex, v: complex, p: ModelParams) -> float:
    d = p.d
    I = np.eye(d)
    M = m_matrix(p)
    M1, M1inv = kron(M, I), kron(np.linalg.inv(M), I)
    K1t = partial_transpose(kron(k_plus(u, p), I), 1, d)
    K2t = partial_transpose(kron(I, k_plus(v, p)), 2, d)
    shift = -u - v - 2 * p.rho
    lhs = r_matrix(-u + v, p) @ K1t @ M1inv @ r21(shift, p) @ M1 @ K2t
    rhs = K2t @ M1 @ r_matrix(shift, p) @ M1inv @ K1t @ r21(-u + v, p)
    return relative_residual(lhs, rhs)


def boundary_identity_fit(u: complex, p: ModelParams) -> Tuple[complex, float]:
    """Fit f(u) in tr_1 K_1^+(u) P_12 R_21(2u) = f(u) V_2 K_2^-(u)^t V_2."""
    d = p.d
    V = v_matrix(p)
    P = permutation_operator(d)
    lhs = partial_trace(kron(k_plus(u, p), np.eye(d)) @ P @ r21(2 * u, p), 1, d)
    rhs = V @ k_minus(u, p).T @ V

    idx = np.unravel_index(np.argmax(np.abs(rhs)), rhs.shape)
    if abs(rhs[idx]) <= 1e-8:
        raise DegenerateIdentityError(f"right-hand side vanishes at u={u}")
    f = complex(lhs[idx] / rhs[idx])
    scale = frobenius(lhs)
    if scale == 0.0:
        raise DegenerateIdentityError(f"left-hand side vanishes at u={u}")
    return f, frobenius(lhs - f * rhs) / scale


def f_at_zero(p: ModelParams) -> complex:
    return xi(0, p) * complex(np.trace(k_plus(0, p))) / kappa(p)


def v_sandwich_check(p: ModelParams, tol: float = 1e-9) -> ResidualReport:
    if p.boundary != BoundarySet.II:
        raise InvalidParameterError("the V-conjugation identity applies to set II")
    bd = boundary_data(p)
    V = v_matrix(p)
    Kp = k_minus_prime_zero(p)
    I = np.eye(p.d)
    lhs = V @ Kp @ V
    rhs = -Kp + bd.mu * bd.U + bd.nu * I

    numeric = num_derivative(lambda x: k_minus(x, p), 0)
    extracted_mu = complex((lhs + Kp - bd.nu * I)[p.n, p.n])

    residuals: List[Residual] = [
        residual("v_conjugation", relative_residual(lhs, rhs), tol),
        residual("k_prime_finite_difference", relative_residual(Kp, numeric), 1e-8),
        residual("mu_coefficient", abs(extracted_mu - bd.mu), tol),
    ]
    return collect(residuals)
