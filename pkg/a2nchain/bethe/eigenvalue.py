"""Transfer-matrix eigenvalue and energy of a Bethe state.

Crossed quantities (C, B-tilde, z-tilde, psi-tilde) are never written out;
they are the uncrossed ones evaluated at -u - rho.
"""
import cmath
import logging
from typing import Callable, Sequence

from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from a2nchain.bethe import ProbeValue, RootConfiguration
from a2nchain.errors import InvalidParameterError, PoleError
from a2nchain.types import BoundarySet, ModelParams

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12
# Deterministic offset applied to a probe point each time it lands on a pole.
PROBE_NUDGE = complex(0.0137, 0.0071)

sinh, cosh = cmath.sinh, cmath.cosh


def _div(num: complex, den: complex, where: str) -> complex:
    if abs(den) < POLE_TOL:
        raise PoleError(f"pole of {where}")
    return num / den


def _product(
    u: complex, roots: Sequence[complex], term: Callable[[complex], complex]
) -> complex:
    out = 1.0 + 0j
    for v in roots:
        out *= term((u - v) / 2) * term((u + v) / 2)
    return out


class _Eigenvalue:
    def __init__(self, r: RootConfiguration, p: ModelParams):
        if r.n != p.n:
            raise InvalidParameterError(f"expected {p.n} levels of roots, got {r.n}")
        self.levels = r.levels
        self.p = p
        self.n = p.n
        self.eta = p.eta
        self.c_branch = p.boundary == BoundarySet.II

    def A(self, u: complex) -> complex:
        eta = self.eta
        return _product(
            u,
            self.levels[0],
            lambda x: _div(sinh(x + eta), sinh(x - eta), "A"),
        )

    def B(self, l: int, u: complex) -> complex:
        """B_l for l = 1..n-1."""
        eta = self.eta
        first = _product(
            u,
            self.levels[l - 1],
            lambda x: _div(sinh(x - (l + 2) * eta), sinh(x - l * eta), f"B_{l}"),
        )
        second = _product(
            u,
            self.levels[l],
            lambda x: _div(sinh(x - (l - 1) * eta), sinh(x - (l + 1) * eta), f"B_{l}"),
        )
        return first * second

    def B_top(self, u: complex) -> complex:
        n, eta = self.n, self.eta

        def term(x: complex) -> complex:
            return _div(sinh(x - (n + 2) * eta), sinh(x - n * eta), "B_n") * _div(
                cosh(x - (n - 1) * eta), cosh(x - (n + 1) * eta), "B_n"
            )

        return _product(u, self.levels[n - 1], term)

    def z(self, l: int, u: complex) -> complex:
        n, eta = self.n, self.eta
        num = sinh(u) * sinh(u - 2 * (2 * n + 1) * eta) * cosh(u - (2 * n - 1) * eta)
        den = (
            sinh(u - 2 * l * eta)
            * sinh(u - 2 * (l + 1) * eta)
            * cosh(u - (2 * n + 1) * eta)
        )
        return _div(num, den, f"z_{l}")

    def w(self, u: complex) -> complex:
        n, eta = self.n, self.eta
        num = sinh(u) * sinh(u - 2 * (2 * n + 1) * eta)
        den = sinh(u - 2 * n * eta) * sinh(u - 2 * (n + 1) * eta)
        return _div(num, den, "w")

    def psi1(self, u: complex) -> complex:
        if not self.c_branch:
            return 1.0 + 0j
        n, eta = self.n, self.eta
        g = cosh(eta) - 1j * sinh(u - 2 * n * eta)
        ratio = _div(
            cosh(u - (2 * n + 3) * eta), cosh(u - (2 * n - 1) * eta), "psi_1"
        )
        return ratio * g * g

    def psi2(self, u: complex) -> complex:
        if not self.c_branch:
            return 1.0 + 0j
        n, eta = self.n, self.eta
        return cosh(u - (2 * n + 3) * eta) * cosh(u - (2 * n - 1) * eta)

    def value(self, u: complex) -> complex:
        n, eta, N = self.n, self.eta, self.p.N
        crossed = -u - self.p.rho

        first = (
            self.A(u)
            * self.psi1(u)
            * _div(
                sinh(u - 2 * (2 * n + 1) * eta) * cosh(u - (2 * n - 1) * eta),
                sinh(u - 2 * eta) * cosh(u - (2 * n + 1) * eta),
                "first term",
            )
            * (2 * sinh(u / 2 - 2 * eta) * cosh(u / 2 - (2 * n + 1) * eta)) ** (2 * N)
        )
        second = (
            self.A(crossed)
            * self.psi1(crossed)
            * _div(
                sinh(u) * cosh(u - (2 * n + 3) * eta),
                sinh(u - 4 * n * eta) * cosh(u - (2 * n + 1) * eta),
                "second term",
            )
            * (2 * sinh(u / 2) * cosh(u / 2 - (2 * n - 1) * eta)) ** (2 * N)
        )
        bulk = self.w(u) * self.psi2(u) * self.B_top(u)
        for l in range(1, n):
            bulk += self.z(l, u) * self.psi1(u) * self.B(l, u)
            bulk += self.z(l, crossed) * self.psi1(crossed) * self.B(l, crossed)
        third = bulk * (2 * sinh(u / 2) * cosh(u / 2 - (2 * n + 1) * eta)) ** (2 * N)
        return first + second + third


def transfer_eigenvalue(r: RootConfiguration, u: complex, p: ModelParams) -> complex:
    """Lambda(u) of the Bethe state with roots r; raises PoleError at a pole."""
    return _Eigenvalue(r, p).value(complex(u))


def probe_eigenvalue(
    r: RootConfiguration, u: complex, p: ModelParams, redraws: int = 3
) -> ProbeValue:
    """Lambda at u, nudging u off poles up to `redraws` times."""
    for attempt in Retrying(
        stop=stop_after_attempt(redraws + 1),
        retry=retry_if_exception_type(PoleError),
        reraise=True,
    ):
        with attempt:
            shift = attempt.retry_state.attempt_number - 1
            point = complex(u) + shift * PROBE_NUDGE
            if shift:
                logger.debug(f"Probe {u} hit a pole, retrying at {point}")
            value = transfer_eigenvalue(r, point, p)
    return ProbeValue(point=point, value=value)


def energy(r: RootConfiguration, p: ModelParams) -> complex:
    n, N, eta = p.n, p.N, p.eta
    if r.n != n:
        raise InvalidParameterError(f"expected {n} levels of roots, got {r.n}")
    total = 0j
    for u in r.levels[0]:
        total -= _div(
            sinh(2 * eta),
            2 * sinh(u / 2 - eta) * sinh(u / 2 + eta),
            "energy summand",
        )
    total -= (N - 1) * cosh((2 * n + 3) * eta) / (
        2 * sinh(2 * eta) * cosh((2 * n + 1) * eta)
    )
    return total
