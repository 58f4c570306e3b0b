from fractions import Fraction
from typing import Dict, List, Tuple

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from a2nchain.errors import (
    DecompositionError,
    InadmissibleConfigurationError,
    ResourceCapExceededError,
)
from a2nchain.reps import (
    Decomposition,
    IrrepLabel,
    label_to_weight,
    site_weights,
    tensor_power_decompose,
    tensor_power_weights,
    weight_cache,
    weight_system,
    weight_to_label,
    weyl_dimension,
)
from a2nchain.test.conftest import skip_if_not_slow
from a2nchain.types import Algebra, BoundarySet, ModelParams

B, C = Algebra.B, Algebra.C


def decomposition(
    algebra: Algebra, counts: Dict[Tuple[int, ...], int]
) -> Decomposition:
    n = len(next(iter(counts)))
    d = Decomposition(algebra, n)
    for labels, c in counts.items():
        d.add(IrrepLabel(algebra, labels), c)
    return d


@pytest.mark.parametrize(
    "algebra,labels,dim",
    [
        (B, (0, 2), 10),
        (B, (2, 0), 14),
        (B, (0, 1), 4),
        (C, (1, 1), 16),
        (C, (3, 0), 20),
        (C, (0, 1), 5),
        (B, (1, 1, 0), 105),
        (C, (0, 0, 1), 14),
        (B, (2,), 3),
        (C, (1,), 2),
    ],
)
def test_weyl_dimension(algebra: Algebra, labels: Tuple[int, ...], dim: int) -> None:
    assert weyl_dimension(IrrepLabel(algebra, labels)) == dim


def test_trivial_irrep() -> None:
    for algebra in (B, C):
        for n in (1, 2, 3):
            assert weyl_dimension(IrrepLabel(algebra, (0,) * n)) == 1


@given(
    algebra=st.sampled_from([B, C]),
    labels=st.lists(st.integers(min_value=0, max_value=2), min_size=1, max_size=2),
)
@settings(deadline=None)
def test_weight_system_matches_dimension(algebra: Algebra, labels: List[int]) -> None:
    label = IrrepLabel(algebra, tuple(labels))
    system = weight_system(label)
    assert sum(system.values()) == weyl_dimension(label)
    assert system[label_to_weight(label)] == 1
    # Weight systems are Weyl-invariant, in particular symmetric under w -> -w.
    for w, m in system.items():
        assert system[tuple(-x for x in w)] == m


@given(
    algebra=st.sampled_from([B, C]),
    labels=st.lists(st.integers(min_value=0, max_value=4), min_size=1, max_size=4),
)
def test_label_weight_inverse(algebra: Algebra, labels: List[int]) -> None:
    label = IrrepLabel(algebra, tuple(labels))
    assert weight_to_label(label_to_weight(label), algebra) == label


def test_weight_to_label_rejects_non_dominant() -> None:
    with pytest.raises(InadmissibleConfigurationError):
        weight_to_label((Fraction(0), Fraction(1)), B)
    with pytest.raises(InadmissibleConfigurationError):
        weight_to_label((Fraction(1, 2),), C)


def test_negative_label() -> None:
    with pytest.raises(InadmissibleConfigurationError):
        IrrepLabel(B, (1, -1))


def test_weight_cache_reuses_systems() -> None:
    weight_cache.clear()
    label = IrrepLabel(C, (1, 1))
    weight_system(label)
    weight_system(label)
    assert weight_cache.hits >= 1
    assert len(weight_cache) == 1


def test_weight_system_cap() -> None:
    with pytest.raises(ResourceCapExceededError):
        weight_system(IrrepLabel(B, (1, 1, 0)), cap=100)


def test_site_weights() -> None:
    p = ModelParams(n=2, N=1)
    weights = site_weights(p, B)
    assert weights[0] == (1, 0)
    assert weights[2] == (0, 0)
    assert weights[4] == (-1, 0)


def test_tensor_power_weights_total() -> None:
    p = ModelParams(n=2, N=3)
    assert sum(tensor_power_weights(p, B).values()) == 125


@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_site(n: int) -> None:
    vector = (2,) if n == 1 else (1,) + (0,) * (n - 1)
    b = tensor_power_decompose(ModelParams(n=n, N=1), B)
    assert b == decomposition(B, {vector: 1})

    c = tensor_power_decompose(ModelParams(n=n, N=1, boundary=BoundarySet.II), C)
    assert c == decomposition(C, {(1,) + (0,) * (n - 1): 1, (0,) * n: 1})


def test_rank_one_two_sites() -> None:
    b = tensor_power_decompose(ModelParams(n=1, N=2), B)
    assert b == decomposition(B, {(0,): 1, (2,): 1, (4,): 1})
    c = tensor_power_decompose(ModelParams(n=1, N=2, boundary=BoundarySet.II), C)
    assert c == decomposition(C, {(0,): 2, (1,): 2, (2,): 1})


def test_rank_one_three_sites() -> None:
    d = tensor_power_decompose(ModelParams(n=1, N=3), B)
    assert d == decomposition(B, {(0,): 1, (2,): 3, (4,): 2, (6,): 1})


def test_rank_two_three_sites() -> None:
    p = ModelParams(n=2, N=3, boundary=BoundarySet.II)
    d = tensor_power_decompose(p, C)
    expected = {(0, 0): 4, (1, 0): 6, (0, 1): 3, (2, 0): 3, (1, 1): 2, (3, 0): 1}
    assert d == decomposition(C, expected)
    assert d.total_dimension() == 125


@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
@pytest.mark.parametrize("n,N", [(1, 4), (2, 2), (3, 2)])
def test_dimensions_add_up(n: int, N: int, boundary: BoundarySet) -> None:
    p = ModelParams(n=n, N=N, boundary=boundary)
    assert tensor_power_decompose(p, p.algebra).total_dimension() == p.dim


@skip_if_not_slow()
@pytest.mark.parametrize("boundary", [BoundarySet.I, BoundarySet.II])
def test_rank_three_three_sites(boundary: BoundarySet) -> None:
    p = ModelParams(n=3, N=3, boundary=boundary)
    assert tensor_power_decompose(p, p.algebra).total_dimension() == 343


def test_decompose_cap() -> None:
    with pytest.raises(ResourceCapExceededError):
        tensor_power_decompose(ModelParams(n=2, N=3), B, cap=100)


def test_decomposition_equality_ignores_zero_entries() -> None:
    a = decomposition(B, {(0,): 1, (2,): 1})
    b = decomposition(B, {(0,): 1, (2,): 1, (4,): 0})
    assert a == b
    assert a != decomposition(C, {(0,): 1, (2,): 1})
    assert str(decomposition(B, {(2,): 3, (0,): 1})) == "[0] + 3[2]"


def test_decomposition_error_is_an_error() -> None:
    assert DecompositionError("x").code() == 1
