import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from algebra.field import (
    PrimeField,
    contains_rows,
    intersect_row_spaces,
    is_invertible,
    kernel_basis,
    lead_one_vectors,
    rank,
    rref,
    row_space,
    solve,
    solve_columns,
)
from utils.constants import SUPPORTED_PRIMES
from utils.exceptions import DimensionMismatchError, ValidationError


@st.composite
def matrices(draw, max_rows=5, max_cols=5, cols=None):
    p = draw(st.sampled_from(SUPPORTED_PRIMES))
    rows = draw(st.integers(0, max_rows))
    cols = cols if cols is not None else draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return p, np.array(entries, dtype=np.int64).reshape(rows, cols)


@given(matrices())
def test_rref_is_reduced_and_idempotent(case):
    p, m = case
    reduced, pivots = rref(m, p)

    assert reduced.shape == (len(pivots), m.shape[1])
    for row, col in enumerate(pivots):
        assert reduced[row, col] == 1
        assert np.count_nonzero(reduced[:, col]) == 1
    assert pivots == sorted(pivots)

    again, again_pivots = rref(reduced, p)
    assert np.array_equal(again, reduced)
    assert again_pivots == pivots


@given(matrices())
def test_rank_of_transpose(case):
    p, m = case
    assert rank(m, p) == rank(m.T, p)


@given(matrices())
def test_kernel_basis_dimension_and_annihilation(case):
    p, m = case
    k = kernel_basis(m, p, cols=m.shape[1])

    assert k.shape == (m.shape[1] - rank(m, p), m.shape[1])
    assert not np.any((m @ k.T) % p)
    assert rank(k, p) == k.shape[0]


@given(matrices(), st.data())
def test_solve_recovers_consistent_systems(case, data):
    p, m = case
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])), dtype=np.int64)
    b = (m @ x) % p

    y = solve(m, b, p)
    assert y is not None
    assert np.array_equal((m @ y) % p, b)


def test_solve_detects_inconsistency():
    m = np.array([[1, 1], [1, 1]], dtype=np.int64)
    assert solve(m, [0, 1], 2) is None
    assert solve_columns(m, np.array([[1], [0]]), 2) is None


def test_solve_rejects_wrong_rhs_length():
    with pytest.raises(DimensionMismatchError):
        solve(np.eye(2, dtype=np.int64), [1, 2, 3], 3)


@given(st.sampled_from(SUPPORTED_PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(cols=4), matrices(cols=4))))
def test_intersection_lies_in_both(case):
    p, (_, u), (_, v) = case
    u, v = u % p, v % p
    both = intersect_row_spaces(u, v, p)

    assert contains_rows(row_space(u, p, 4), both, p)
    assert contains_rows(row_space(v, p, 4), both, p)
    # dim(U ∩ V) = dim U + dim V - dim(U + V)
    joined = rank(np.vstack([u, v]), p) if u.shape[0] + v.shape[0] else 0
    assert both.shape[0] == rank(u, p) + rank(v, p) - joined


@pytest.mark.parametrize("p", SUPPORTED_PRIMES)
def test_lead_one_vectors_count_lines(p):
    vectors = list(lead_one_vectors([0, 2, 3], 4, p))
    assert len(vectors) == (p**3 - 1) // (p - 1)
    assert len({v.tobytes() for v in vectors}) == len(vectors)
    assert all(v[1] == 0 for v in vectors)


def test_prime_field_arithmetic():
    F = PrimeField(7)
    x = F(3)
    assert int(x * x.inverse()) == 1
    assert int(x / 3) == 1
    assert int(2 - x) == 6
    assert int(-x) == 4
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("p", [1, 4, 9, 11])
def test_prime_field_rejects_unsupported(p):
    with pytest.raises(ValidationError):
        PrimeField(p)


def test_is_invertible():
    assert is_invertible(np.array([[1, 1], [0, 1]]), 2)
    assert not is_invertible(np.array([[1, 1], [1, 1]]), 2)
    assert not is_invertible(np.array([[1, 0, 0]]), 2)


def test_prime_field_matrix_shapes():
    F = PrimeField(3)
    assert F.matrix([]).shape == (0, 0)
    assert F.matrix([], shape=(0, 4)).shape == (0, 4)
    assert F.matrix([[4, 5]]).tolist() == [[1, 2]]
    assert F.matrix([1, 2, 3, 4], shape=(2, 2)).tolist() == [[1, 2], [0, 1]]
    with pytest.raises(DimensionMismatchError):
        F.matrix([[[1]]])
