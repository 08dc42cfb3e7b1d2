"""
The Auslander algebra End(X) of X = ⊕ indecomposables and the bimodule Ext¹(X, X)

Algebra basis elements are Hom-basis morphisms X_i -> X_j, listed by
(source index, target index, local index); multiplication is composition,
x·y = x∘y. The bimodule B = ⊕ Ext¹(X_i, X_j) is coordinatized block by
block, blocks sorted by (C index, A index).

Left action of x: X_j -> X_k is the pushout x_* taking block (i, j) to (i, k).
Right action of c: X_l -> X_i is the pullback c^* taking block (i, j) to (l, j).
Matrices act on column vectors, so left(x·y) = left(x) @ left(y) while
right(x·y) = right(y) @ right(x).
"""

import logging
import threading
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.field import SCALAR, kernel_basis, matmul, row_space
from algebra.homalg import ExtSpace, ext_space, pullback_matrix, pushout_matrix
from algebra.lattice import SubBimodule
from algebra.quiver import HomSpace, RepMorphism, Representation, compose, hom_space, identity, is_brick
from utils.constants import ERROR_DUPLICATE_INDECOMPOSABLE, ERROR_NOT_BRICK
from utils.exceptions import DimensionMismatchError, StructuralError, ValidationError
from utils.helpers import parallel_map

logger = logging.getLogger("wexlattice.auslander")

BasisKey = Tuple[int, int, int]


class AuslanderAlgebra:
    """
    End(⊕ X_i) with structure constants

    Attributes:
        indecs: The indecomposables X_1..X_n
        hom_blocks: HomSpace for every ordered pair (source, target)
        basis: Flat list of (source index, target index, local index)
        mult_table: (x, y) -> coordinates of x∘y for composable basis pairs
        idempotents: Coordinate vectors of the identities of the X_i
        radical_basis: Indices of the basis elements between distinct X_i
    """

    def __init__(self, indecs: Sequence[Representation], workers: int = 1):
        self.indecs = list(indecs)
        self.n = len(self.indecs)
        pairs = [(i, j) for i in range(self.n) for j in range(self.n)]
        spaces = parallel_map(lambda ij: hom_space(self.indecs[ij[0]], self.indecs[ij[1]]), pairs, workers)
        self.hom_blocks: Dict[Tuple[int, int], HomSpace] = dict(zip(pairs, spaces))

        self.basis: List[BasisKey] = [
            (i, j, k) for (i, j) in pairs for k in range(self.hom_blocks[(i, j)].dim)
        ]
        self.index = {key: idx for idx, key in enumerate(self.basis)}
        self.block_offset = {}
        for idx, (i, j, k) in enumerate(self.basis):
            if k == 0:
                self.block_offset[(i, j)] = idx

        self.mult_table: Dict[Tuple[int, int], np.ndarray] = {}
        for x, (j, k, _) in enumerate(self.basis):
            for y, (i, j2, _) in enumerate(self.basis):
                if j2 != j:
                    continue
                product = compose(self.morphism(x), self.morphism(y))
                self.mult_table[(x, y)] = self.embed(i, k, self.hom_blocks[(i, k)].coords(product))

        self.idempotents = [
            self.embed(i, i, self.hom_blocks[(i, i)].coords(identity(X))) for i, X in enumerate(self.indecs)
        ]
        self.radical_basis = [idx for idx, (i, j, _) in enumerate(self.basis) if i != j]

    @property
    def p(self) -> int:
        return self.indecs[0].p if self.indecs else 2

    @property
    def dim(self) -> int:
        return len(self.basis)

    def morphism(self, idx: int) -> RepMorphism:
        i, j, k = self.basis[idx]
        return self.hom_blocks[(i, j)].basis[k]

    def embed(self, i: int, j: int, local: np.ndarray) -> np.ndarray:
        """Global coordinates of an element of Hom(X_i, X_j)"""
        v = np.zeros(self.dim, dtype=SCALAR)
        block = self.hom_blocks[(i, j)]
        if block.dim:
            start = self.block_offset[(i, j)]
            v[start : start + block.dim] = local
        return v % self.p

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product u·v = u∘v of two elements in global coordinates"""
        out = np.zeros(self.dim, dtype=SCALAR)
        for x in np.nonzero(u)[0]:
            for y in np.nonzero(v)[0]:
                entry = self.mult_table.get((int(x), int(y)))
                if entry is not None:
                    out = (out + u[x] * v[y] * entry) % self.p
        return out

    def unit(self) -> np.ndarray:
        return sum(self.idempotents, np.zeros(self.dim, dtype=SCALAR)) % self.p

    def is_associative(self) -> bool:
        """Exhaustive check over composable basis triples"""
        units = np.eye(self.dim, dtype=SCALAR)
        for (x, y), xy in self.mult_table.items():
            for z, (i, j, _) in enumerate(self.basis):
                if j != self.basis[y][0]:
                    continue
                left = self.multiply(xy, units[z])
                right = self.multiply(units[x], self.mult_table[(y, z)])
                if not np.array_equal(left, right):
                    return False
        return True

    def idempotents_ok(self) -> bool:
        for a, e in enumerate(self.idempotents):
            for b, f in enumerate(self.idempotents):
                expected = e if a == b else np.zeros(self.dim, dtype=SCALAR)
                if not np.array_equal(self.multiply(e, f), expected):
                    return False
        units = np.eye(self.dim, dtype=SCALAR)
        one = self.unit()
        return all(
            np.array_equal(self.multiply(one, u), u) and np.array_equal(self.multiply(u, one), u)
            for u in units
        )

    def radical_power_span(self, k: int) -> np.ndarray:
        """Canonical basis of rad^k"""
        units = np.eye(self.dim, dtype=SCALAR)
        current = row_space(units[self.radical_basis], self.p, self.dim)
        for _ in range(k - 1):
            products = [
                self.multiply(r, units[x]) for r in current for x in self.radical_basis
            ]
            current = row_space(products, self.p, self.dim)
            if current.shape[0] == 0:
                break
        return current

    def radical_is_ideal(self) -> bool:
        units = np.eye(self.dim, dtype=SCALAR)
        in_radical = set(self.radical_basis)
        for x in self.radical_basis:
            for y in range(self.dim):
                for prod in (self.multiply(units[x], units[y]), self.multiply(units[y], units[x])):
                    if any(prod[idx] for idx in range(self.dim) if idx not in in_radical):
                        return False
        return True

    def nilpotency_index(self) -> int:
        """Smallest k with rad^k = 0"""
        if not self.radical_basis:
            return 1
        for k in range(1, self.n + 2):
            if self.radical_power_span(k).shape[0] == 0:
                return k
        raise StructuralError("Radical is not nilpotent")


def build_algebra(indecs: Sequence[Representation], workers: int = 1) -> AuslanderAlgebra:
    """
    Build the Auslander algebra of pairwise non-isomorphic bricks

    Raises:
        ValidationError: On an empty list, a non-brick, mixed quivers or an
            isomorphic duplicate
    """
    if not indecs:
        raise ValidationError("At least one indecomposable is required.")
    first = indecs[0]
    for X in indecs:
        if X.quiver != first.quiver or X.p != first.p:
            raise DimensionMismatchError("Indecomposables live over different quivers or fields")
        if not is_brick(X):
            raise ValidationError(f"{ERROR_NOT_BRICK} ({X!r})")

    for a in range(len(indecs)):
        for b in range(a + 1, len(indecs)):
            hom = hom_space(indecs[a], indecs[b])
            if indecs[a].dims == indecs[b].dims and hom.dim == 1 and hom.basis[0].is_iso():
                raise ValidationError(f"{ERROR_DUPLICATE_INDECOMPOSABLE} ({indecs[a]!r}, {indecs[b]!r})")

    alg = AuslanderAlgebra(indecs, workers)
    logger.info(
        f"Auslander algebra: {alg.n} indecomposables, dimension {alg.dim}, "
        f"radical dimension {len(alg.radical_basis)}"
    )
    return alg


class ExtBimodule:
    """
    B = Ext¹(X, X) with its Peirce blocks and action matrices

    Attributes:
        alg: The Auslander algebra acting on both sides
        blocks: ExtSpace for every (C index, A index)
        offsets: First global coordinate of each nonzero block
        coord_block: The (C index, A index) owning each global coordinate
        left_action, right_action: One dim x dim matrix per algebra basis element
        indec_index: Position of each indecomposable in alg.indecs
        cache: Memo for derived data (component maps, realized sequences);
            read and written through memo()
    """

    def __init__(self, alg: AuslanderAlgebra, workers: int = 1):
        self.alg = alg
        n = alg.n
        pairs = [(i, j) for i in range(n) for j in range(n)]
        spaces = parallel_map(lambda ij: ext_space(alg.indecs[ij[0]], alg.indecs[ij[1]]), pairs, workers)
        self.blocks: Dict[Tuple[int, int], ExtSpace] = dict(zip(pairs, spaces))

        self.offsets: Dict[Tuple[int, int], int] = {}
        self.coord_block: List[Tuple[int, int]] = []
        for pair in pairs:
            if self.blocks[pair].dim:
                self.offsets[pair] = len(self.coord_block)
                self.coord_block.extend([pair] * self.blocks[pair].dim)
        self.dim = len(self.coord_block)

        self.left_action = parallel_map(self._left_matrix, range(alg.dim), workers)
        self.right_action = parallel_map(self._right_matrix, range(alg.dim), workers)
        self.indec_index: Dict[Representation, int] = {X: i for i, X in enumerate(alg.indecs)}
        self.cache: Dict[Any, Any] = {}
        self._cache_lock = threading.Lock()

    def memo(self, key: Any, compute: Callable[[], Any]) -> Any:
        """
        Cached value for key, shared by worker threads

        compute runs outside the lock; when two threads race, the first
        stored value is the one every caller gets.
        """
        with self._cache_lock:
            if key in self.cache:
                return self.cache[key]
        value = compute()
        with self._cache_lock:
            return self.cache.setdefault(key, value)

    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def global_dim(self) -> int:
        return self.dim

    def block_slice(self, i: int, j: int) -> slice:
        start = self.offsets.get((i, j), 0)
        return slice(start, start + self.blocks[(i, j)].dim)

    def embed(self, i: int, j: int, local: np.ndarray) -> np.ndarray:
        v = np.zeros(self.dim, dtype=SCALAR)
        v[self.block_slice(i, j)] = local
        return v % self.p

    def _left_matrix(self, idx: int) -> np.ndarray:
        j, k, _ = self.alg.basis[idx]
        a = self.alg.morphism(idx)
        m = np.zeros((self.dim, self.dim), dtype=SCALAR)
        for i in range(self.alg.n):
            if self.blocks[(i, j)].dim and self.blocks[(i, k)].dim:
                local = pushout_matrix(a, self.alg.indecs[i])
                m[self.block_slice(i, k), self.block_slice(i, j)] = local
        return m

    def _right_matrix(self, idx: int) -> np.ndarray:
        l, i, _ = self.alg.basis[idx]
        c = self.alg.morphism(idx)
        m = np.zeros((self.dim, self.dim), dtype=SCALAR)
        for j in range(self.alg.n):
            if self.blocks[(i, j)].dim and self.blocks[(l, j)].dim:
                local = pullback_matrix(c, self.alg.indecs[j])
                m[self.block_slice(l, j), self.block_slice(i, j)] = local
        return m

    def actions(self) -> List[np.ndarray]:
        return self.left_action + self.right_action

    def radical_actions(self) -> List[np.ndarray]:
        rad = self.alg.radical_basis
        return [self.left_action[x] for x in rad] + [self.right_action[x] for x in rad]

    def left_act(self, u: np.ndarray) -> np.ndarray:
        """Matrix of the left action of an algebra element in global coordinates"""
        m = np.zeros((self.dim, self.dim), dtype=SCALAR)
        for x in np.nonzero(u)[0]:
            m = (m + u[x] * self.left_action[x]) % self.p
        return m

    def right_act(self, u: np.ndarray) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=SCALAR)
        for x in np.nonzero(u)[0]:
            m = (m + u[x] * self.right_action[x]) % self.p
        return m

    def invariant_failures(self) -> List[str]:
        """
        Check Peirce projections, commutation of the two actions, and
        compatibility with the multiplication table

        Returns:
            Descriptions of every violated identity (empty when all hold)
        """
        p = self.p
        failures: List[str] = []

        for i, e in enumerate(self.alg.idempotents):
            left_expected = np.zeros((self.dim, self.dim), dtype=SCALAR)
            right_expected = np.zeros((self.dim, self.dim), dtype=SCALAR)
            for coord, (c_idx, a_idx) in enumerate(self.coord_block):
                if a_idx == i:
                    left_expected[coord, coord] = 1
                if c_idx == i:
                    right_expected[coord, coord] = 1
            if not np.array_equal(self.left_act(e), left_expected):
                failures.append(f"left idempotent e{i} is not the Peirce projection")
            if not np.array_equal(self.right_act(e), right_expected):
                failures.append(f"right idempotent e{i} is not the Peirce projection")

        for x, lx in enumerate(self.left_action):
            for y, ry in enumerate(self.right_action):
                if not np.array_equal(matmul(lx, ry, p), matmul(ry, lx, p)):
                    failures.append(f"left action of {x} does not commute with right action of {y}")

        for (x, y), xy in self.alg.mult_table.items():
            if not np.array_equal(self.left_act(xy), matmul(self.left_action[x], self.left_action[y], p)):
                failures.append(f"left action is not multiplicative on ({x}, {y})")
            if not np.array_equal(self.right_act(xy), matmul(self.right_action[y], self.right_action[x], p)):
                failures.append(f"right action is not multiplicative on ({x}, {y})")

        return failures


def build_ext_bimodule(alg: AuslanderAlgebra, workers: int = 1, verify: bool = True) -> ExtBimodule:
    """
    Compute every Ext block and the action matrices

    Raises:
        StructuralError: If verify is set and an action identity fails
    """
    B = ExtBimodule(alg, workers)
    logger.info(f"Ext bimodule: dimension {B.dim} over {len(B.offsets)} nonzero blocks")

    if verify:
        failures = B.invariant_failures()
        if failures:
            logger.error("Bimodule action identities fail", extra={"witness": failures[:5]})
            raise StructuralError(f"Bimodule identities fail: {failures[0]}", {"failures": failures})
    return B


def coordinate_labels(B: ExtBimodule) -> List[str]:
    """'Ext(C,A)' per global coordinate, with '#k' for blocks of dimension > 1"""
    names = [X.name or f"X{i + 1}" for i, X in enumerate(B.alg.indecs)]
    labels = []
    for coord, (i, j) in enumerate(B.coord_block):
        label = f"Ext({names[i]},{names[j]})"
        if B.blocks[(i, j)].dim > 1:
            label += f"#{coord - B.offsets[(i, j)]}"
        labels.append(label)
    return labels


def socle(B: ExtBimodule, N: Optional[SubBimodule] = None) -> SubBimodule:
    """
    Elements of N annihilated by the radical on both sides

    With N omitted, the socle of B itself.
    """
    radical = B.radical_actions()
    if radical:
        annihilated = kernel_basis(np.vstack(radical), B.p, cols=B.dim)
    else:
        annihilated = np.eye(B.dim, dtype=SCALAR)

    whole = SubBimodule.span(annihilated, B.p, B.dim)
    if N is None:
        return whole
    return whole.meet(N)
