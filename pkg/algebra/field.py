"""
Exact arithmetic over prime fields F_p and dense linear algebra

Matrices are plain numpy int64 arrays whose entries are kept reduced modulo p.
Every function here is pure: inputs are never mutated.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from utils.constants import ERROR_NOT_PRIME, SUPPORTED_PRIMES
from utils.exceptions import DimensionMismatchError, ValidationError

logger = logging.getLogger("wexlattice.field")

SCALAR = np.int64

Matrix = np.ndarray


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p"""

    p: int

    def __post_init__(self):
        if not isprime(self.p) or self.p not in SUPPORTED_PRIMES:
            raise ValidationError(f"{ERROR_NOT_PRIME} Got {self.p}.")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(int(value) % self.p, self)

    def inv(self, value: int) -> int:
        value %= self.p
        if value == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return pow(value, -1, self.p)

    def matrix(self, rows, shape: Optional[Tuple[int, int]] = None) -> Matrix:
        """
        Build a reduced matrix from nested lists (or an array), optionally reshaped

        An empty input becomes a (0, cols) matrix, with cols taken from the
        shape when one is given and 0 otherwise.
        """
        m = as_matrix(rows, cols=shape[1] if shape is not None else 0)
        if shape is not None:
            m = m.reshape(shape)
        return m % self.p

    def vector(self, entries) -> np.ndarray:
        return np.array(entries, dtype=SCALAR).reshape(-1) % self.p

    def zeros(self, rows: int, cols: int) -> Matrix:
        return np.zeros((rows, cols), dtype=SCALAR)

    def identity(self, n: int) -> Matrix:
        return np.eye(n, dtype=SCALAR)


@dataclass(frozen=True)
class FieldElement:
    """A single element of F_p; used for scalars reported to users"""

    value: int
    field: PrimeField

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DimensionMismatchError("Field mismatch")
            return other.value
        return int(other) % self.field.p

    def __add__(self, other):
        return self.field(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.field(self.value - self._coerce(other))

    def __rsub__(self, other):
        return self.field(self._coerce(other) - self.value)

    def __mul__(self, other):
        return self.field(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.field(-self.value)

    def __truediv__(self, other):
        return self * self.field.inv(self._coerce(other))

    def inverse(self) -> "FieldElement":
        return self.field(self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"F{self.field.p}({self.value})"


def as_matrix(m, cols: Optional[int] = None) -> Matrix:
    """Coerce to a 2-d int64 array; an empty input becomes a (0, cols) matrix"""
    arr = np.asarray(m, dtype=SCALAR)
    if arr.ndim == 1:
        if arr.size == 0 and cols is not None:
            return np.zeros((0, cols), dtype=SCALAR)
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"Expected a 2-d matrix, got shape {arr.shape}")
    return arr


def matmul(a: Matrix, b: Matrix, p: int) -> Matrix:
    if a.shape[-1] != b.shape[0]:
        raise DimensionMismatchError(f"Cannot multiply {a.shape} by {b.shape}")
    return (a @ b) % p


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=SCALAR)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def rref(m: Matrix, p: int) -> Tuple[Matrix, List[int]]:
    """
    Reduced row-echelon form over F_p

    Args:
        m: Matrix (rows x cols)
        p: Field characteristic

    Returns:
        (R, pivots): R has the zero rows removed, so R.shape == (rank, cols);
        pivots are the pivot column indices in increasing order.
    """
    r_mat = as_matrix(m).copy() % p
    rows, cols = r_mat.shape
    pivots: List[int] = []
    row = 0

    for col in range(cols):
        if row == rows:
            break
        nonzero = np.nonzero(r_mat[row:, col])[0]
        if nonzero.size == 0:
            continue

        found = row + int(nonzero[0])
        if found != row:
            r_mat[[row, found]] = r_mat[[found, row]]

        r_mat[row] = (r_mat[row] * pow(int(r_mat[row, col]), -1, p)) % p

        column = r_mat[:, col].copy()
        column[row] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            r_mat[targets] = (r_mat[targets] - np.outer(column[targets], r_mat[row])) % p

        pivots.append(col)
        row += 1

    return r_mat[:row].copy(), pivots


def rank(m: Matrix, p: int) -> int:
    m = as_matrix(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel_basis(m: Matrix, p: int, cols: Optional[int] = None) -> Matrix:
    """
    Basis of {x : m @ x = 0}, one vector per row

    Rows are ordered by the free column they are attached to.
    """
    m = as_matrix(m, cols)
    n = m.shape[1]
    reduced, pivots = rref(m, p)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]

    basis = np.zeros((len(free), n), dtype=SCALAR)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-reduced[i, f]) % p
    return basis


def solve(m: Matrix, b, p: int) -> Optional[np.ndarray]:
    """
    Find x with m @ x = b, free variables set to zero

    Returns:
        The particular solution, or None if the system is inconsistent

    Raises:
        DimensionMismatchError: If len(b) differs from the row count of m
    """
    m = as_matrix(m)
    b = np.asarray(b, dtype=SCALAR).reshape(-1)
    rows, cols = m.shape
    if b.shape[0] != rows:
        raise DimensionMismatchError(
            f"Right-hand side has length {b.shape[0]}, matrix has {rows} rows"
        )

    augmented = np.hstack([m % p, (b % p).reshape(-1, 1)])
    reduced, pivots = rref(augmented, p)
    if pivots and pivots[-1] == cols:
        return None

    x = np.zeros(cols, dtype=SCALAR)
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i, cols]
    return x


def solve_columns(m: Matrix, rhs: Matrix, p: int) -> Optional[Matrix]:
    """Solve m @ X = rhs for all columns at once; None if any column is inconsistent"""
    m = as_matrix(m)
    rhs = as_matrix(rhs)
    rows, cols = m.shape
    if rhs.shape[0] != rows:
        raise DimensionMismatchError(
            f"Right-hand side has {rhs.shape[0]} rows, matrix has {rows}"
        )

    augmented = np.hstack([m % p, rhs % p])
    reduced, pivots = rref(augmented, p)
    if any(pc >= cols for pc in pivots):
        return None

    x = np.zeros((cols, rhs.shape[1]), dtype=SCALAR)
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i, cols:]
    return x


def reduce_vector(reduced: Matrix, pivots: Sequence[int], v: np.ndarray, p: int) -> np.ndarray:
    """Residual of v modulo the row space of an RREF matrix; zero iff v lies in it"""
    residual = np.asarray(v, dtype=SCALAR).copy() % p
    for i, pc in enumerate(pivots):
        coef = residual[pc]
        if coef:
            residual = (residual - coef * reduced[i]) % p
    return residual


def row_space(vectors, p: int, cols: int) -> Matrix:
    """Canonical basis (RREF, zero rows dropped) of the span of the given rows"""
    m = as_matrix(vectors, cols)
    if m.shape[0] == 0:
        return np.zeros((0, cols), dtype=SCALAR)
    return rref(m, p)[0]


def intersect_row_spaces(u: Matrix, v: Matrix, p: int) -> Matrix:
    """Canonical basis of rowspace(u) ∩ rowspace(v)"""
    cols = u.shape[1]
    if u.shape[0] == 0 or v.shape[0] == 0:
        return np.zeros((0, cols), dtype=SCALAR)
    stacked = np.vstack([u, (-v) % p])
    coefficients = kernel_basis(stacked.T, p)
    if coefficients.shape[0] == 0:
        return np.zeros((0, cols), dtype=SCALAR)
    return row_space(matmul(coefficients[:, : u.shape[0]], u, p), p, cols)


def contains_rows(space: Matrix, rows: Matrix, p: int) -> bool:
    """True iff every row of `rows` lies in the row space of `space`"""
    if rows.shape[0] == 0:
        return True
    if space.shape[0] == 0:
        return not np.any(rows % p)
    return rank(np.vstack([space, rows]), p) == rank(space, p)


def is_invertible(m: Matrix, p: int) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def canonical_key(reduced: Matrix) -> Tuple[Tuple[int, int], bytes]:
    """Dedupe key of a canonical (RREF) basis"""
    return reduced.shape, np.ascontiguousarray(reduced, dtype=SCALAR).tobytes()


def lead_one_vectors(support: Sequence[int], n: int, p: int) -> Iterable[np.ndarray]:
    """
    Every nonzero vector supported on `support` whose first nonzero entry is 1

    One representative per line; yields in lexicographic coordinate order.
    """
    support = list(support)
    k = len(support)
    for lead in range(k):
        tail = support[lead + 1 :]
        for digits in np.ndindex(*([p] * len(tail))) if tail else [()]:
            v = np.zeros(n, dtype=SCALAR)
            v[support[lead]] = 1
            for pos, digit in zip(tail, digits):
                v[pos] = digit
            yield v
