import numpy as np
import pytest
from hypothesis import given, settings

import a2nchain.test.property.strategies as strategies
from a2nchain.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    ResourceCapExceededError,
)
from a2nchain.linalg import (
    commutator,
    eig,
    elementary_matrix,
    kron,
    num_derivative,
    partial_trace,
    partial_transpose,
    permutation_operator,
    relative_residual,
    site_embed,
)


def random_matrix(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def test_kron_identity() -> None:
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))


def test_kron_left_factor_slowest() -> None:
    M = kron(elementary_matrix(2, 1, 2), np.eye(2))
    expected = np.zeros((4, 4))
    expected[0, 2] = expected[1, 3] = 1
    assert np.array_equal(M, expected)


def test_kron_matches_loops() -> None:
    A, B = random_matrix(3, 0), random_matrix(3, 1)
    expected = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    expected[i * 3 + k, j * 3 + l] = A[i, j] * B[k, l]
    np.testing.assert_allclose(kron(A, B), expected, rtol=0, atol=1e-14)


def test_kron_associative() -> None:
    A, B, C = random_matrix(2, 2), random_matrix(3, 3), random_matrix(2, 4)
    assert relative_residual(kron(kron(A, B), C), kron(A, kron(B, C))) < 1e-14


def test_elementary_matrix() -> None:
    assert np.array_equal(elementary_matrix(3, 1, 1), np.diag([1, 0, 0]))
    product = elementary_matrix(3, 1, 3) @ elementary_matrix(3, 3, 2)
    assert np.array_equal(product, elementary_matrix(3, 1, 2))
    total = sum(elementary_matrix(5, a, a) for a in range(1, 6))
    assert np.array_equal(total, np.eye(5))


def test_elementary_matrix_out_of_range() -> None:
    with pytest.raises(InvalidParameterError):
        elementary_matrix(3, 0, 1)
    with pytest.raises(InvalidParameterError):
        elementary_matrix(3, 1, 4)


def test_permutation_operator() -> None:
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert np.array_equal(permutation_operator(2), swap)
    P = permutation_operator(3)
    assert np.array_equal(P @ P, np.eye(9))
    A, B = random_matrix(3, 5), random_matrix(3, 6)
    assert relative_residual(P @ kron(A, B) @ P, kron(B, A)) < 1e-14


@given(M=strategies.complex_matrices(9))
@settings(deadline=None)
def test_partial_transpose(M: np.ndarray) -> None:
    assert np.array_equal(partial_transpose(partial_transpose(M, 1, 3), 1, 3), M)
    assert np.array_equal(partial_transpose(partial_transpose(M, 1, 3), 2, 3), M.T)


def test_partial_transpose_factorized() -> None:
    A, B = random_matrix(3, 7), random_matrix(3, 8)
    assert relative_residual(partial_transpose(kron(A, B), 1, 3), kron(A.T, B)) < 1e-14


def test_partial_transpose_bad_factor() -> None:
    with pytest.raises(InvalidParameterError):
        partial_transpose(np.eye(9), 3, 3)


def test_partial_transpose_bad_shape() -> None:
    with pytest.raises(InvalidParameterError):
        partial_transpose(np.eye(8), 1, 3)


@given(M=strategies.complex_matrices(9))
def test_partial_trace_preserves_trace(M: np.ndarray) -> None:
    assert abs(np.trace(partial_trace(M, 1, 3)) - np.trace(M)) < 1e-12


def test_partial_trace() -> None:
    A, B = random_matrix(3, 9), random_matrix(3, 10)
    assert relative_residual(partial_trace(kron(A, B), 1, 3), np.trace(A) * B) < 1e-13
    assert relative_residual(partial_trace(kron(A, B), 2, 3), np.trace(B) * A) < 1e-13
    P = permutation_operator(3)
    assert np.allclose(partial_trace(P, 1, 3), np.eye(3))
    assert np.allclose(partial_trace(P, 2, 3), np.eye(3))


def test_site_embed() -> None:
    A, B = random_matrix(3, 11), random_matrix(3, 12)
    assert np.array_equal(site_embed(np.eye(3), [2], 3, 3), np.eye(27))
    assert relative_residual(site_embed(A, [1], 2, 3), kron(A, np.eye(3))) < 1e-14
    a1 = site_embed(A, [1], 3, 3)
    b3 = site_embed(B, [3], 3, 3)
    assert np.linalg.norm(commutator(a1, b3)) < 1e-12


def test_site_embed_reversed_order() -> None:
    A, B = random_matrix(2, 13), random_matrix(2, 14)
    # Listing [2, 1] makes op's first factor act on site 2.
    assert relative_residual(site_embed(kron(A, B), [2, 1], 2, 2), kron(B, A)) < 1e-14


def test_site_embed_rejects_bad_sites() -> None:
    with pytest.raises(InvalidParameterError):
        site_embed(np.eye(9), [1, 1], 3, 3)
    with pytest.raises(InvalidParameterError):
        site_embed(np.eye(3), [4], 3, 3)
    with pytest.raises(InvalidParameterError):
        site_embed(np.eye(4), [1], 3, 3)


def test_eig() -> None:
    w, _ = eig(np.diag([1.0, 2.0, 3.0]).astype(np.complex128))
    assert np.allclose(np.sort(w.real), [1, 2, 3])
    w, _ = eig(permutation_operator(2))
    assert np.allclose(np.sort(w.real), [-1, 1, 1, 1])


def test_eig_matches_characteristic_polynomial() -> None:
    M = random_matrix(5, 15)
    w, V = eig(M)
    coefficients = np.poly(M)
    for x in w:
        assert abs(np.polyval(coefficients, x)) < 1e-8 * max(1.0, abs(x) ** 5)
    reconstructed = V @ np.diag(w) @ np.linalg.inv(V)
    assert relative_residual(reconstructed, M) < 1e-8


def test_eig_cap() -> None:
    with pytest.raises(ResourceCapExceededError):
        eig(np.eye(10, dtype=np.complex128), cap=9)


def test_num_derivative() -> None:
    I = np.eye(3, dtype=np.complex128)
    assert np.allclose(num_derivative(lambda u: u * I, 0.4 + 0.1j), I)
    e11 = elementary_matrix(3, 1, 1)
    D = num_derivative(lambda u: np.sinh(u) * e11, 0)
    assert np.linalg.norm(D - e11) < 1e-10


def test_shape_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        commutator(np.eye(2), np.eye(3))
    with pytest.raises(DimensionMismatchError):
        relative_residual(np.eye(2), np.eye(3))
