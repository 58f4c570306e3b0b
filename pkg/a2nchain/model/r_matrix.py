"""R-matrix of the A_{2n}^{(2)} chain in the fundamental representation, its
crossing companions V and M, and numerical checks of its defining identities."""

import cmath
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from a2nchain.errors import InvalidParameterError
from a2nchain.linalg import (
    elementary_matrix,
    frobenius,
    kron,
    partial_transpose,
    permutation_operator,
    relative_residual,
    site_embed,
)
from a2nchain.types import ModelParams, Operator, Residual, ResidualReport
from a2nchain.types import collect, residual

logger = logging.getLogger(__name__)

sinh = cmath.sinh
cosh = cmath.cosh
exp = cmath.exp


def xi(u: complex, p: ModelParams) -> complex:
    return 2 * sinh(u / 2 - 2 * p.eta) * cosh(u / 2 - (2 * p.n + 1) * p.eta)


def conjugate_index(alpha: int, p: ModelParams) -> int:
    if not 1 <= alpha <= p.d:
        raise InvalidParameterError(f"index {alpha} out of range 1..{p.d}")
    return 2 * p.n + 2 - alpha


def bar_index(alpha: int, p: ModelParams) -> Fraction:
    if not 1 <= alpha <= p.d:
        raise InvalidParameterError(f"index {alpha} out of range 1..{p.d}")
    if alpha < p.n + 1:
        return Fraction(alpha) + Fraction(1, 2)
    if alpha == p.n + 1:
        return Fraction(alpha)
    return Fraction(alpha) - Fraction(1, 2)


class _Weights:
    """Boltzmann weights of the R-matrix (order=0) or their u-derivatives (order=1)."""

    def __init__(self, u: complex, p: ModelParams, order: int = 0):
        if order not in (0, 1):
            raise InvalidParameterError(f"derivative order must be 0 or 1, got {order}")
        self.u = u
        self.p = p
        self.order = order
        self.eta = p.eta
        self.n = p.n
        self.s2 = sinh(2 * p.eta)
        self.c0 = (2 * p.n + 1) * p.eta

    def c(self) -> complex:
        u, eta = self.u, self.eta
        if self.order == 0:
            return 2 * sinh(u / 2 - 2 * eta) * cosh(u / 2 - self.c0)
        return cosh(u - 2 * eta - self.c0)

    def b(self) -> complex:
        u = self.u
        if self.order == 0:
            return 2 * sinh(u / 2) * cosh(u / 2 - self.c0)
        return cosh(u - self.c0)

    def e(self) -> complex:
        u = self.u
        if self.order == 0:
            return -2 * exp(-u / 2) * self.s2 * cosh(u / 2 - self.c0)
        return self.s2 * exp(-u + self.c0)

    def ebar(self) -> complex:
        u = self.u
        if self.order == 0:
            return exp(u) * (-2 * exp(-u / 2) * self.s2 * cosh(u / 2 - self.c0))
        return -self.s2 * exp(u - self.c0)

    def a(self, alpha: int, beta: int) -> complex:
        p, u, eta, n, s2 = self.p, self.u, self.eta, self.n, self.s2
        d0 = self.order == 0
        alpha_c = conjugate_index(alpha, p)
        beta_c = conjugate_index(beta, p)
        diff = float(bar_index(alpha, p) - bar_index(beta, p))

        if alpha == beta and alpha != alpha_c:
            x = (2 * n - 1) * eta
            return sinh(u - x) + sinh(x) if d0 else cosh(u - x)
        if alpha == beta:
            if d0:
                return (
                    sinh(u - self.c0)
                    + sinh(self.c0)
                    + sinh((2 * n - 1) * eta)
                    - sinh((2 * n + 3) * eta)
                )
            return cosh(u - self.c0)
        if alpha < beta and alpha != beta_c:
            pre = exp(((2 * n + 1) + 2 * diff) * eta) * s2
            # -2 e^{-u/2} sinh(u/2) = -(1 - e^{-u})
            return -pre * (1 - exp(-u)) if d0 else -pre * exp(-u)
        if alpha < beta:
            x = (2 * n + 3 - 2 * beta) * eta
            lead = 2 * exp((2 * (2 * n + 1) - 2 * beta + 2) * eta) * sinh(x) * s2
            if not d0:
                return -lead * exp(-u)
            tail = 2 * exp(x) * cosh((2 * (2 * n + 2) - 2 * beta) * eta) * s2
            return lead * exp(-u) - tail
        if alpha != beta_c:
            pre = exp((-(2 * n + 1) + 2 * diff) * eta) * s2
            # 2 e^{u/2} sinh(u/2) = e^u - 1
            return pre * (exp(u) - 1) if d0 else pre * exp(u)
        x = ((2 * n + 1) - 2 * beta) * eta
        lead = 2 * exp(u - 2 * beta * eta) * sinh(x) * s2
        if not d0:
            return lead
        return lead - 2 * exp(x) * cosh(2 * beta * eta) * s2


def _assemble(w: _Weights) -> Operator:
    p = w.p
    d = p.d
    R = np.zeros((d * d, d * d), dtype=np.complex128)

    def add(a: int, b: int, c: int, e: int, value: complex) -> None:
        # e_{ab} (x) e_{ce}
        R[(a - 1) * d + (c - 1), (b - 1) * d + (e - 1)] += value

    c, b, e, ebar = w.c(), w.b(), w.e(), w.ebar()
    for alpha in range(1, d + 1):
        alpha_c = conjugate_index(alpha, p)
        if alpha != alpha_c:
            add(alpha, alpha, alpha, alpha, c)
        for beta in range(1, d + 1):
            beta_c = conjugate_index(beta, p)
            if alpha != beta and alpha != beta_c:
                add(alpha, alpha, beta, beta, b)
                add(alpha, beta, beta, alpha, e if alpha < beta else ebar)
            add(alpha, beta, alpha_c, beta_c, w.a(alpha, beta))
    return R


def r_matrix(u: complex, p: ModelParams) -> Operator:
    return _assemble(_Weights(complex(u), p, order=0))


def r_prime_zero(p: ModelParams) -> Operator:
    """Entrywise analytic derivative dR/du at u=0."""
    return _assemble(_Weights(0j, p, order=1))


def r21(u: complex, p: ModelParams) -> Operator:
    P = permutation_operator(p.d)
    return P @ r_matrix(u, p) @ P


def v_matrix(p: ModelParams) -> Operator:
    d, n, eta = p.d, p.n, p.eta
    V = np.zeros((d, d), dtype=np.complex128)
    for alpha in range(1, d + 1):
        alpha_c = conjugate_index(alpha, p)
        if alpha == alpha_c:
            V[alpha - 1, alpha - 1] = 1.0
        elif alpha < alpha_c:
            V[alpha - 1, alpha_c - 1] = exp((-(2 * n + 1) + 2 * alpha) * eta)
        else:
            V[alpha - 1, alpha_c - 1] = exp((2 * n + 1 - 2 * alpha_c) * eta)
    return V


def m_matrix(p: ModelParams) -> Operator:
    diag = [
        exp(4 * (p.n + 1 - float(bar_index(alpha, p))) * p.eta)
        for alpha in range(1, p.d + 1)
    ]
    return np.diag(np.array(diag, dtype=np.complex128))


def crossing_projector(p: ModelParams) -> Operator:
    """R(-rho) normalized to the rank-one projector P~^-_{12}."""
    return r_matrix(-p.rho, p) / (p.d * xi(0, p))


def sample_points(
    count: int, seed: int = 0, radius: float = 2.0
) -> List[Tuple[complex, complex]]:
    """Seeded pseudo-random (u, v) pairs in a disk of the given radius."""
    rng = np.random.default_rng(seed)
    pts = radius * np.sqrt(rng.uniform(0, 1, (count, 2))) * np.exp(
        2j * np.pi * rng.uniform(0, 1, (count, 2))
    )
    return [(complex(a), complex(b)) for a, b in pts]


def _ybe(u: complex, v: complex, p: ModelParams) -> float:
    d = p.d

    def R(x: complex, i: int, j: int) -> Operator:
        return site_embed(r_matrix(x, p), [i, j], 3, d)

    lhs = R(u - v, 1, 2) @ R(u, 1, 3) @ R(v, 2, 3)
    rhs = R(v, 2, 3) @ R(u, 1, 3) @ R(u - v, 1, 2)
    return relative_residual(lhs, rhs)


def _r13_from_swap(u: complex, p: ModelParams) -> float:
    d = p.d
    R12 = site_embed(r_matrix(u, p), [1, 2], 3, d)
    R13 = site_embed(r_matrix(u, p), [1, 3], 3, d)
    P23 = site_embed(permutation_operator(d), [2, 3], 3, d)
    return relative_residual(R13, P23 @ R12 @ P23)


def _pt_symmetry(u: complex, p: ModelParams) -> float:
    R = r_matrix(u, p)
    R21 = r21(u, p)
    full_t = partial_transpose(partial_transpose(R, 1, p.d), 2, p.d)
    return max(relative_residual(R21, full_t), relative_residual(R21, R.T))


def _unitarity(u: complex, p: ModelParams) -> float:
    lhs = r_matrix(u, p) @ r21(-u, p)
    rhs = xi(u, p) * xi(-u, p) * np.eye(p.d * p.d)
    return relative_residual(lhs, rhs)


def _crossing(u: complex, p: ModelParams) -> Tuple[float, float]:
    d = p.d
    V = v_matrix(p)
    I = np.eye(d)
    V1 = kron(V, I)
    V2t = kron(I, V.T)
    Rc = r_matrix(-u - p.rho, p)
    R = r_matrix(u, p)
    first = relative_residual(R, V1 @ partial_transpose(Rc, 2, d) @ V1)
    second = relative_residual(R, V2t @ partial_transpose(Rc, 1, d) @ V2t)
    return first, second


def _v_sandwich(u: complex, p: ModelParams) -> float:
    V = v_matrix(p)
    I = np.eye(p.d)
    V1, V2 = kron(V, I), kron(I, V)
    return relative_residual(V1 @ r_matrix(u, p) @ V1, V2 @ r21(u, p) @ V2)


def _regularity(p: ModelParams) -> float:
    return relative_residual(r_matrix(0, p), xi(0, p) * permutation_operator(p.d))


def projector_residuals(p: ModelParams, seed: int = 0) -> List[Residual]:
    """Idempotence, the two equivalent forms, rank one, the sandwich rule and
    the asymmetry between P~^-_{12} and P~^-_{21}."""
    d = p.d
    Pm = crossing_projector(p)
    V = v_matrix(p)
    V1 = kron(V, np.eye(d))
    alt = V1 @ partial_transpose(permutation_operator(d), 2, d) @ V1 / d

    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d * d, d * d)) + 1j * rng.normal(size=(d * d, d * d))
    sandwich = relative_residual(Pm @ A @ Pm, np.trace(Pm @ A) * Pm)

    s = np.linalg.svd(Pm, compute_uv=False)
    rank_defect = float(s[1] / s[0]) if len(s) > 1 else 0.0

    Pm21 = partial_transpose(partial_transpose(Pm, 1, d), 2, d)
    asymmetry = frobenius(Pm21 - Pm)

    return [
        residual("projector_idempotent", relative_residual(Pm @ Pm, Pm), 1e-10),
        residual("projector_v_form", relative_residual(Pm, alt), 1e-10),
        residual("projector_rank", rank_defect, 1e-10),
        residual("projector_sandwich", sandwich, 1e-10),
        # Passing means the two projectors differ by more than 0.1
        residual("projector_asymmetry", 0.1 / max(asymmetry, 1e-300), 1.0),
    ]


def property_report(
    p: ModelParams,
    samples: Sequence[Tuple[complex, complex]],
    tol: float = 1e-9,
    seed: Optional[int] = None,
) -> ResidualReport:
    ybe: List[float] = []
    r13: List[float] = []
    pt: List[float] = []
    unit: List[float] = []
    cross1: List[float] = []
    cross2: List[float] = []
    sandwich: List[float] = []
    for u, v in samples:
        ybe.append(_ybe(u, v, p))
        r13.append(_r13_from_swap(u, p))
        pt.append(_pt_symmetry(u, p))
        unit.append(_unitarity(u, p))
        c1, c2 = _crossing(u, p)
        cross1.append(c1)
        cross2.append(c2)
        sandwich.append(_v_sandwich(u, p))

    def worst(xs: List[float]) -> float:
        return max(xs) if xs else 0.0

    VtV = v_matrix(p).T @ v_matrix(p)
    V = v_matrix(p)
    residuals = [
        residual("yang_baxter", worst(ybe), tol),
        residual("r13_from_swap", worst(r13), tol),
        residual("pt_symmetry", worst(pt), 1e-12),
        residual("unitarity", worst(unit), tol),
        residual("regularity", _regularity(p), 1e-12),
        residual("crossing_v1", worst(cross1), tol),
        residual("crossing_v2", worst(cross2), tol),
        residual("v_sandwich", worst(sandwich), tol),
        residual("v_involution", relative_residual(V @ V, np.eye(p.d)), 1e-12),
        residual("m_from_v", relative_residual(m_matrix(p), VtV), 1e-12),
    ]
    residuals.extend(projector_residuals(p, seed=0 if seed is None else seed))
    report = collect(residuals)
    logger.info(
        f"R-matrix identities for n={p.n}: "
        f"{'pass' if report['passed'] else 'FAIL'} over {len(samples)} samples"
    )
    return report
