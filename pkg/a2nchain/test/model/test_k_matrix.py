import cmath
from typing import Tuple

import numpy as np
import pytest
from hypothesis import given, settings

import a2nchain.test.property.strategies as strategies
from a2nchain.errors import InvalidParameterError
from a2nchain.linalg import num_derivative, relative_residual
from a2nchain.model.k_matrix import (
    boundary_identity_fit,
    bybe_residual,
    dual_bybe_residual,
    f_at_zero,
    k_minus,
    k_minus_prime_zero,
    k_plus,
    k_plus_is_diagonal,
    kappa,
    v_sandwich_check,
)
from a2nchain.model.r_matrix import m_matrix, sample_points
from a2nchain.test.property.invariants import residuals_pass
from a2nchain.types import BoundarySet, ModelParams

SET_I = ModelParams(n=1, N=2, boundary=BoundarySet.I)
SET_II = ModelParams(n=1, N=2, boundary=BoundarySet.II)


@given(u=strategies.spectral_points())
def test_set_one_matrices(u: complex) -> None:
    assert np.array_equal(k_minus(u, SET_I), np.eye(3))
    assert np.allclose(k_plus(u, SET_I), m_matrix(SET_I))
    assert k_plus_is_diagonal(u, SET_I)


def test_set_two_at_zero() -> None:
    for n in (1, 2, 3):
        p = ModelParams(n=n, N=2, boundary=BoundarySet.II)
        assert np.allclose(k_minus(0, p), kappa(p) * np.eye(p.d))
        assert np.allclose(k_plus(-p.rho, p), kappa(p) * m_matrix(p))


def test_set_two_middle_entry() -> None:
    eta = SET_II.eta
    expected = 1j * cmath.cosh(0.5 + eta) - cmath.sinh(2 * eta)
    assert abs(k_minus(0.5, SET_II)[1, 1] - expected) < 1e-14


@pytest.mark.parametrize("n", [1, 2, 3])
def test_k_prime_zero(n: int) -> None:
    p = ModelParams(n=n, N=2, boundary=BoundarySet.II)
    numeric = num_derivative(lambda u: k_minus(u, p), 0)
    assert relative_residual(k_minus_prime_zero(p), numeric) < 1e-8


@given(points=strategies.spectral_pairs())
@settings(deadline=None)
def test_set_one_reflection(points: Tuple[complex, complex]) -> None:
    u, v = points
    assert bybe_residual(u, v, SET_I) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3])
def test_set_two_reflection(n: int) -> None:
    p = ModelParams(n=n, N=2, boundary=BoundarySet.II)
    for u, v in sample_points(10, seed=n):
        assert bybe_residual(u, v, p) < 1e-9


def test_reflection_at_equal_arguments() -> None:
    assert bybe_residual(0.3 + 0.1j, 0.3 + 0.1j, SET_II) < 1e-12


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
@pytest.mark.parametrize("n", [1, 2])
def test_dual_reflection(n: int, boundary: BoundarySet) -> None:
    p = ModelParams(n=n, N=2, boundary=boundary)
    for u, v in sample_points(5, seed=10 + n):
        assert dual_bybe_residual(u, v, p) < 1e-9


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
def test_boundary_identity_at_zero(boundary: BoundarySet) -> None:
    p = ModelParams(n=1, N=2, boundary=boundary)
    f, res = boundary_identity_fit(0j, p)
    assert res < 1e-9
    assert abs(f - f_at_zero(p)) < 1e-9 * max(1.0, abs(f))


def test_boundary_identity_set_one_is_scalar() -> None:
    # For set I the right-hand side is V V = 1, so a good fit means the
    # left-hand side is proportional to the identity.
    for u, _ in sample_points(5, seed=3):
        _, res = boundary_identity_fit(u, SET_I)
        assert res < 1e-9


@pytest.mark.parametrize("n", [1, 2])
def test_boundary_identity_set_two(n: int) -> None:
    p = ModelParams(n=n, N=2, boundary=BoundarySet.II)
    for u, _ in sample_points(5, seed=4):
        _, res = boundary_identity_fit(u, p)
        assert res < 1e-8


@pytest.mark.parametrize("n", [1, 2, 3])
def test_v_sandwich(n: int) -> None:
    residuals_pass(v_sandwich_check(ModelParams(n=n, N=2, boundary=BoundarySet.II)))


def test_v_sandwich_rejects_set_one() -> None:
    with pytest.raises(InvalidParameterError):
        v_sandwich_check(SET_I)
