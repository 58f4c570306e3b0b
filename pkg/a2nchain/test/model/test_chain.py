import cmath

import numpy as np
import pytest

from a2nchain.bethe import RootConfiguration, transfer_eigenvalue
from a2nchain.errors import ResourceCapExceededError
from a2nchain.linalg import (
    num_derivative,
    permutation_operator,
    relative_residual,
    site_embed,
)
from a2nchain.model.chain import (
    boundary_term_check,
    chain_operators,
    hamiltonian,
    normalization_constants,
    sklyanin_hamiltonian,
    transfer_matrix,
    transfer_symmetry_residual,
    two_site_h,
    two_site_h_tilde,
)
from a2nchain.model.k_matrix import boundary_data, k_minus_prime_zero
from a2nchain.model.r_matrix import r_matrix, sample_points, xi
from a2nchain.spectrum import cross_commutation_residual
from a2nchain.test.property.invariants import degeneracies
from a2nchain.types import BoundarySet, ModelParams


def chain(n: int, N: int, boundary: BoundarySet, eta: complex = -0.1j) -> ModelParams:
    return ModelParams(n=n, N=N, eta=eta, boundary=boundary)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_two_site_h_matches_finite_difference(n: int) -> None:
    p = chain(n, 2, BoundarySet.I)
    numeric = permutation_operator(p.d) @ num_derivative(lambda u: r_matrix(u, p), 0)
    assert relative_residual(two_site_h(p), numeric / xi(0, p)) < 1e-8


def test_hermitian_for_real_eta() -> None:
    H = hamiltonian(chain(1, 2, BoundarySet.I, eta=0.3))
    assert np.linalg.norm(H - H.conj().T) < 1e-12 * max(1.0, np.linalg.norm(H))


def test_not_hermitian_for_imaginary_eta() -> None:
    H = hamiltonian(chain(1, 2, BoundarySet.I))
    assert np.linalg.norm(H - H.conj().T) > 1e-3


@pytest.mark.parametrize("eta", [0.3, -0.1j])
def test_set_two_never_hermitian(eta: complex) -> None:
    H = hamiltonian(chain(1, 2, BoundarySet.II, eta=eta))
    assert np.linalg.norm(H - H.conj().T) > 1e-3


def test_degeneracies_set_one() -> None:
    H = hamiltonian(chain(1, 2, BoundarySet.I))
    assert degeneracies(np.linalg.eigvals(H), tol=1e-6) == [5, 3, 1]


def test_degeneracies_set_two() -> None:
    H = hamiltonian(chain(1, 2, BoundarySet.II))
    assert degeneracies(np.linalg.eigvals(H), tol=1e-6) == [3, 2, 2, 1, 1]


def test_set_two_two_sites_is_single_bond() -> None:
    p = chain(1, 2, BoundarySet.II)
    bd = boundary_data(p)
    field = bd.mu / (2 * bd.kappa) * site_embed(bd.U, [2], 2, p.d)
    expected = two_site_h_tilde(p) + field
    assert relative_residual(hamiltonian(p), expected) < 1e-14


def test_h_tilde_telescopes() -> None:
    p = chain(1, 3, BoundarySet.II)
    d, N = p.d, p.N
    kp = k_minus_prime_zero(p)
    tilde = sum(site_embed(two_site_h_tilde(p), [k, k + 1], N, d) for k in (1, 2))
    bare = sum(site_embed(two_site_h(p), [k, k + 1], N, d) for k in (1, 2))
    edges = site_embed(kp, [1], N, d) - site_embed(kp, [N], N, d)
    edges /= 2 * boundary_data(p).kappa
    assert relative_residual(tilde, bare + edges) < 1e-12
    assert abs(np.trace(two_site_h_tilde(p)) - np.trace(two_site_h(p))) < 1e-12


def test_single_site_chain() -> None:
    assert np.array_equal(hamiltonian(chain(1, 1, BoundarySet.I)), np.zeros((3, 3)))
    p = chain(1, 1, BoundarySet.II)
    bd = boundary_data(p)
    assert np.allclose(hamiltonian(p), bd.mu / (2 * bd.kappa) * bd.U)


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
@pytest.mark.parametrize("N", [2, 3])
def test_transfer_commutativity(N: int, boundary: BoundarySet) -> None:
    p = chain(1, N, boundary)
    H = hamiltonian(p)
    for u, v in sample_points(3, seed=N):
        tu, tv = transfer_matrix(u, p), transfer_matrix(v, p)
        assert cross_commutation_residual(tu, tv) < 1e-8
        assert cross_commutation_residual(H, tu) < 1e-8


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
def test_transfer_symmetric(boundary: BoundarySet) -> None:
    p = chain(1, 2, boundary)
    assert transfer_symmetry_residual(0.37 + 0.21j, p) < 1e-9


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
def test_reference_state_eigenvalue(boundary: BoundarySet) -> None:
    p = chain(1, 2, boundary)
    u = 0.37 + 0.21j
    t = transfer_matrix(u, p)
    reference = np.zeros(p.dim)
    reference[0] = 1.0
    image = t @ reference
    scale = max(1.0, abs(image[0]))
    assert np.linalg.norm(image - image[0] * reference) < 1e-10 * scale
    expected = transfer_eigenvalue(RootConfiguration.empty(1), u, p)
    assert abs(image[0] - expected) < 1e-8 * abs(expected)


@pytest.mark.parametrize(
    "n,boundary", [(1, BoundarySet.I), (2, BoundarySet.I), (1, BoundarySet.II)]
)
def test_hamiltonian_from_transfer(n: int, boundary: BoundarySet) -> None:
    p = chain(n, 2, boundary)
    c1, c2 = normalization_constants(p)
    t_prime = num_derivative(lambda u: transfer_matrix(u, p), 0)
    assert relative_residual(hamiltonian(p), t_prime / c1 + c2 * np.eye(p.dim)) < 1e-6


def test_normalization_c2_rank_one() -> None:
    p = chain(1, 2, BoundarySet.I)
    eta = p.eta
    expected = cmath.cosh(7 * eta) / (2 * cmath.sinh(6 * eta) * cmath.cosh(eta))
    assert abs(normalization_constants(p)[1] - expected) < 1e-12


@pytest.mark.parametrize("boundary", list(BoundarySet))
def test_chain_operators(boundary: BoundarySet) -> None:
    p = chain(1, 2, boundary)
    ops = chain_operators(p)
    assert (ops.c1, ops.c2) == normalization_constants(p)
    assert np.array_equal(ops.h2, two_site_h(p))
    if boundary == BoundarySet.I:
        assert ops.h2tilde is None
    else:
        assert np.array_equal(ops.h2tilde, two_site_h_tilde(p))


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
def test_sklyanin_differs_by_identity(boundary: BoundarySet) -> None:
    p = chain(1, 3, boundary)
    shift = sklyanin_hamiltonian(p) - hamiltonian(p)
    offset = np.trace(shift) / p.dim
    scale = np.linalg.norm(hamiltonian(p))
    assert np.linalg.norm(shift - offset * np.eye(p.dim)) < 1e-9 * scale


@pytest.mark.parametrize("n", [1, 2, 3])
def test_boundary_term_is_scalar(n: int) -> None:
    off, spread = boundary_term_check(chain(n, 2, BoundarySet.I))
    assert off < 1e-10
    assert spread < 1e-10


def test_transfer_assembly_cap() -> None:
    with pytest.raises(ResourceCapExceededError):
        transfer_matrix(0.1, chain(1, 3, BoundarySet.I), cap=80)
