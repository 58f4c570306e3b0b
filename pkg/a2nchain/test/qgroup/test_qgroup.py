import dataclasses
from typing import List

import numpy as np
import pytest

from a2nchain.errors import DimensionMismatchError, ResourceCapExceededError
from a2nchain.linalg import elementary_matrix, kron
from a2nchain.model.chain import hamiltonian, two_site_h_tilde
from a2nchain.qgroup import (
    coassociativity_residuals,
    coproduct_two_site,
    generators_for,
    highest_weight_count,
    ladder_agreement_residual,
    ladder_residual,
    nfold_coproduct,
    relation_report,
    root_relation_residual,
    symmetry_residual,
    u_commutation_residual,
)
from a2nchain.test.conftest import skip_if_not_slow
from a2nchain.test.property.invariants import residuals_pass
from a2nchain.types import Algebra, BoundarySet, ModelParams

ALGEBRAS = [Algebra.B, Algebra.C]


def chain(n: int, N: int, boundary: BoundarySet = BoundarySet.I) -> ModelParams:
    return ModelParams(n=n, N=N, boundary=boundary)


def e(d: int, a: int, b: int) -> np.ndarray:
    return elementary_matrix(d, a, b)


def test_rank_one_b_generators() -> None:
    g = generators_for(chain(1, 2), Algebra.B)
    assert np.array_equal(g.cartan[0], np.diag([1, 0, -1]))
    assert np.array_equal(g.raising[0], e(3, 1, 2) + e(3, 2, 3))
    assert np.array_equal(g.lowering[0], g.raising[0].T)


def test_rank_one_c_generators() -> None:
    g = generators_for(chain(1, 2), Algebra.C)
    assert np.array_equal(g.raising[0], e(3, 1, 3))
    assert g.extra_raising is not None
    assert np.array_equal(g.extra_raising, e(3, 1, 3))


def test_rank_two_c_ladder() -> None:
    g = generators_for(chain(2, 2), Algebra.C)
    assert np.array_equal(g.raising[1], e(5, 2, 4))
    assert ladder_residual(g) < 1e-14


@pytest.mark.parametrize("algebra", ALGEBRAS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_root_relations(n: int, algebra: Algebra) -> None:
    g = generators_for(chain(n, 2), algebra)
    assert root_relation_residual(g) == 0.0


def test_reference_vector_weight() -> None:
    g = generators_for(chain(3, 2), Algebra.B)
    e1 = np.zeros(7)
    e1[0] = 1
    for i, H in enumerate(g.cartan):
        assert (H @ e1)[0] == (1 if i == 0 else 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_c_generators_commute_with_u(n: int) -> None:
    assert u_commutation_residual(generators_for(chain(n, 2), Algebra.C)) == 0.0


@pytest.mark.parametrize("algebra", ALGEBRAS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_coassociativity(n: int, algebra: Algebra) -> None:
    p = chain(n, 3)
    residuals = coassociativity_residuals(generators_for(p, algebra), p)
    assert max(residuals.values()) < 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_ladder_nesting_agreement(n: int) -> None:
    p = chain(n, 3)
    assert ladder_agreement_residual(generators_for(p, Algebra.C), p, 3) < 1e-10


@pytest.mark.parametrize("algebra", ALGEBRAS)
def test_cartan_coproduct_is_additive(algebra: Algebra) -> None:
    p = chain(2, 3)
    cop = nfold_coproduct(generators_for(p, algebra), p, 3)
    d = p.d
    for j, H in enumerate(cop.cartan, start=1):
        assert np.count_nonzero(H - np.diag(np.diag(H))) == 0
        for index in range(p.dim):
            digits = [index // d**k % d + 1 for k in (2, 1, 0)]
            expected = sum((a == j) - (a == d + 1 - j) for a in digits)
            assert H[index, index] == expected


def test_three_site_extra_coproduct() -> None:
    p = chain(1, 3)
    g = generators_for(p, Algebra.C)
    cop = nfold_coproduct(g, p, 3)
    E0 = e(3, 1, 3)
    boost = np.diag(np.exp(4 * p.eta * np.diag(g.cartan[0])))
    I = np.eye(3)
    expected = kron(E0, I, I) + kron(boost, E0, I) + kron(boost, boost, E0)
    assert cop.extra_raising is not None
    assert np.allclose(cop.extra_raising, expected, atol=1e-14)


def test_two_site_cartan_is_diagonal() -> None:
    p = chain(2, 2)
    for H in coproduct_two_site(generators_for(p, Algebra.B), p).cartan:
        assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


@pytest.mark.parametrize("algebra", ALGEBRAS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_relations(n: int, algebra: Algebra) -> None:
    p = chain(n, 2)
    residuals_pass(relation_report(generators_for(p, algebra), p, tol=1e-9))


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_set_one_symmetry(n: int, N: int) -> None:
    p = chain(n, N, BoundarySet.I)
    cop = nfold_coproduct(generators_for(p, Algebra.B), p, N)
    assert symmetry_residual(cop, hamiltonian(p)) < 1e-9


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_set_two_symmetry(n: int, N: int) -> None:
    p = chain(n, N, BoundarySet.II)
    cop = nfold_coproduct(generators_for(p, Algebra.C), p, N)
    assert symmetry_residual(cop, hamiltonian(p)) < 1e-9


@skip_if_not_slow()
@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
def test_rank_three_symmetry(boundary: BoundarySet) -> None:
    p = chain(3, 3, boundary)
    cop = nfold_coproduct(generators_for(p, p.algebra), p, 3)
    assert symmetry_residual(cop, hamiltonian(p)) < 1e-9


def test_symmetry_covers_e0_coproducts() -> None:
    p = chain(2, 2, BoundarySet.II)
    cop = nfold_coproduct(generators_for(p, Algebra.C), p, 2)
    assert len(cop.generators()) == 3 * p.n + 2
    only_e0 = dataclasses.replace(cop, cartan=[], raising=[], lowering=[])
    assert symmetry_residual(only_e0, hamiltonian(p)) < 1e-9
    generic = np.diag(np.arange(p.dim, dtype=np.complex128))
    assert symmetry_residual(only_e0, generic) > 1e-3
    b = nfold_coproduct(generators_for(chain(2, 2), Algebra.B), chain(2, 2), 2)
    assert len(b.generators()) == 3 * p.n


def test_wrong_algebra_breaks_symmetry() -> None:
    p = chain(1, 2, BoundarySet.II)
    cop = nfold_coproduct(generators_for(p, Algebra.B), p, 2)
    assert symmetry_residual(cop, hamiltonian(p)) > 1e-3


def test_h_tilde_commutes_with_two_site_coproducts() -> None:
    p = chain(2, 2, BoundarySet.II)
    cop = coproduct_two_site(generators_for(p, Algebra.C), p)
    assert symmetry_residual(cop, two_site_h_tilde(p)) < 1e-9


def test_highest_weight_count_full_space() -> None:
    p = chain(1, 2)
    cop = coproduct_two_site(generators_for(p, Algebra.B), p)
    assert highest_weight_count(cop, np.eye(9, dtype=np.complex128)) == 3


def _eigenspaces(H: np.ndarray) -> List[np.ndarray]:
    w, V = np.linalg.eig(H)
    seen = np.zeros(len(w), dtype=bool)
    spaces = []
    for k in range(len(w)):
        if seen[k]:
            continue
        members = np.abs(w - w[k]) < 1e-6
        seen |= members
        spaces.append(V[:, members])
    return spaces


def test_highest_weight_count_per_eigenspace() -> None:
    p = chain(1, 2)
    cop = coproduct_two_site(generators_for(p, Algebra.B), p)
    counts = [
        (v.shape[1], highest_weight_count(cop, v)) for v in _eigenspaces(hamiltonian(p))
    ]
    assert sorted(counts) == [(1, 1), (3, 1), (5, 1)]


def test_singlet_is_a_highest_weight_vector() -> None:
    p = chain(1, 2)
    cop = coproduct_two_site(generators_for(p, Algebra.B), p)
    [singlet] = [v for v in _eigenspaces(hamiltonian(p)) if v.shape[1] == 1]
    assert max(np.linalg.norm(E @ singlet) for E in cop.raising) < 1e-12
    assert highest_weight_count(cop, singlet) == 1
    lowest = np.zeros((9, 1), dtype=np.complex128)
    lowest[8, 0] = 1
    assert highest_weight_count(cop, lowest) == 0


def test_highest_weight_dimension_mismatch() -> None:
    p = chain(1, 2)
    cop = coproduct_two_site(generators_for(p, Algebra.B), p)
    with pytest.raises(DimensionMismatchError):
        highest_weight_count(cop, np.eye(3, dtype=np.complex128))
    with pytest.raises(DimensionMismatchError):
        symmetry_residual(cop, np.eye(3, dtype=np.complex128))


def test_coproduct_cap() -> None:
    p = chain(1, 3)
    with pytest.raises(ResourceCapExceededError):
        nfold_coproduct(generators_for(p, Algebra.B), p, 3, cap=26)
