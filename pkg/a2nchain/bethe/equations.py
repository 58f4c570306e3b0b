"""Bethe equations of the open A_2n^(2) chain with diagonal boundaries.

Each equation is written LHS = RHS and its residual is LHS/RHS - 1. The
equations are invariant under u -> -u and u -> u + 2 pi i of any single root,
which is what canonical_root and root_distance quotient out.
"""
import cmath
import logging
import math
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

from a2nchain.bethe import RootConfiguration
from a2nchain.errors import InvalidParameterError, PoleError
from a2nchain.types import BoundarySet, ModelParams

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12
TWO_PI = 2 * math.pi
I_PI = 1j * math.pi


def _ratio(num: complex, den: complex, where: str) -> complex:
    if abs(den) < POLE_TOL:
        raise PoleError(f"pole of {where}")
    return num / den


def e_fn(k: float, u: complex, eta: complex) -> complex:
    """e_k(u) = sinh(u/2 + eta k) / sinh(u/2 - eta k)."""
    return _ratio(
        cmath.sinh(u / 2 + eta * k), cmath.sinh(u / 2 - eta * k), f"e_{k}({u})"
    )


def chi_fn(u: complex, p: ModelParams) -> complex:
    if p.boundary == BoundarySet.I:
        return 1.0 + 0j
    eta = p.eta
    r = _ratio(
        cmath.sinh((u + eta - I_PI / 2) / 2),
        cmath.sinh((u - eta + I_PI / 2) / 2),
        f"chi({u})",
    )
    return r * r


def _pair(
    k: float, u: complex, v: complex, eta: complex, shift: complex = 0
) -> complex:
    return e_fn(k, u - v + shift, eta) * e_fn(k, u + v + shift, eta)


def _equation(
    levels: Sequence[Sequence[complex]], l: int, k: int, p: ModelParams
) -> complex:
    """LHS/RHS for root k of level l (zero-based)."""
    n, eta = p.n, p.eta
    u = levels[l][k]
    own = [v for j, v in enumerate(levels[l]) if j != k]

    if n == 1:
        lhs = e_fn(1, u, eta) ** (2 * p.N) * chi_fn(u, p)
        rhs = 1.0 + 0j
        for v in own:
            rhs *= _pair(2, u, v, eta) * _pair(-1, u, v, eta, I_PI)
        return _ratio(lhs, rhs, "Bethe equation right-hand side")

    rhs = 1.0 + 0j
    if l > 0:
        for v in levels[l - 1]:
            rhs *= _pair(-1, u, v, eta)
    if l < n - 1:
        for v in levels[l + 1]:
            rhs *= _pair(-1, u, v, eta)

    if l == 0:
        lhs = e_fn(1, u, eta) ** (2 * p.N)
        for v in own:
            rhs *= _pair(2, u, v, eta)
    elif l < n - 1:
        lhs = 1.0 + 0j
        for v in own:
            rhs *= _pair(2, u, v, eta)
    else:
        lhs = chi_fn(u, p)
        for v in own:
            rhs *= _pair(2, u, v, eta) * _pair(-1, u, v, eta, I_PI)
    return _ratio(lhs, rhs, "Bethe equation right-hand side")


def equation_residuals(
    levels: Sequence[Sequence[complex]], p: ModelParams
) -> npt.NDArray[np.complex128]:
    """Raw residual vector in level order; raises PoleError."""
    if len(levels) != p.n:
        raise InvalidParameterError(
            f"expected {p.n} levels of roots, got {len(levels)}"
        )
    out: List[complex] = []
    for l, level in enumerate(levels):
        for k in range(len(level)):
            out.append(_equation(levels, l, k, p) - 1)
    return np.array(out, dtype=np.complex128)


def bethe_residual(
    r: RootConfiguration, p: ModelParams
) -> Optional[npt.NDArray[np.complex128]]:
    """Residual vector, one entry per root, or None when a pole is hit.

    Each root's own equation is evaluated at its canonical representative,
    so the vector does not change under u -> -u or u -> u + 2 pi i.
    """
    levels = [[canonical_root(u) for u in level] for level in r.levels]
    try:
        return equation_residuals(levels, p)
    except (PoleError, OverflowError, ZeroDivisionError) as e:
        logger.debug(f"Configuration {r.m} is infeasible: {e}")
        return None


def canonical_root(u: complex, tol: float = 1e-9) -> complex:
    """Representative of {+-u + 2 pi i k} with Re >= 0 and Im in [0, 2 pi)."""
    u = complex(u)
    if u.real < -tol:
        u = -u
    wrapped = complex(u.real, u.imag % TWO_PI)
    if abs(u.real) <= tol:
        mirror = complex(-u.real, (-u.imag) % TWO_PI)
        if mirror.imag < wrapped.imag:
            wrapped = mirror
    return wrapped


def canonicalize(r: RootConfiguration, tol: float = 1e-9) -> RootConfiguration:
    return RootConfiguration(
        tuple(
            tuple(sorted((canonical_root(u, tol) for u in level), key=_sort_key))
            for level in r.levels
        )
    )


def _sort_key(u: complex) -> tuple:
    return (round(u.real, 9), round(u.imag, 9))


def root_distance(a: complex, b: complex) -> float:
    """Distance between the orbits of a and b under reflection and 2 pi i shifts."""
    best = math.inf
    for s in (1, -1):
        d = complex(a) - s * complex(b)
        im = (d.imag + math.pi) % TWO_PI - math.pi
        best = min(best, math.hypot(d.real, im))
    return best


def configurations_match(
    a: RootConfiguration, b: RootConfiguration, tol: float = 1e-6
) -> bool:
    if a.m != b.m:
        return False
    for la, lb in zip(a.levels, b.levels):
        if not la:
            continue
        cost = np.array([[root_distance(x, y) for y in lb] for x in la])
        rows, cols = linear_sum_assignment(cost)
        if float(cost[rows, cols].max()) > tol:
            return False
    return True


def has_collision(r: RootConfiguration, tol: float = 1e-8) -> bool:
    for level in r.levels:
        for i in range(len(level)):
            for j in range(i + 1, len(level)):
                if root_distance(level[i], level[j]) < tol:
                    return True
    return False


def at_fixed_point(r: RootConfiguration, tol: float = 1e-6) -> bool:
    """True if some root sits at 0 or i pi, where u and -u coincide."""
    return any(
        min(root_distance(u, 0), root_distance(u, I_PI)) < tol
        for level in r.levels
        for u in level
    )
