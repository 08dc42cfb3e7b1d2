"""
Sub-bimodules of B and the lattice they form

A sub-bimodule is stored as its canonical RREF basis over the global
coordinates of B. Enumeration runs a closure BFS from 0; when every Peirce
block of B is at most one-dimensional, sub-bimodules are coordinate
subspaces and the BFS runs on bitmasks instead.
"""

import logging
import threading
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from algebra.field import (
    SCALAR,
    canonical_key,
    intersect_row_spaces,
    kernel_basis,
    lead_one_vectors,
    matmul,
    reduce_vector,
    rref,
)
from utils.exceptions import BudgetExceededError, DimensionMismatchError, ValidationError
from utils.helpers import parallel_map

if TYPE_CHECKING:
    from algebra.auslander import ExtBimodule

logger = logging.getLogger("wexlattice.lattice")

STRATEGY_COORDINATE = "coordinate"
STRATEGY_GENERAL = "general"


class SubBimodule:
    """
    A subspace of B in canonical form (RREF rows, zero rows dropped)

    Nothing here checks action-closure; generated_submodule and the
    enumerator only ever produce closed subspaces.
    """

    __slots__ = ("basis", "pivots", "p", "ambient_dim", "_annihilator")

    def __init__(self, basis: np.ndarray, pivots: Sequence[int], p: int, ambient_dim: int):
        self.basis = basis
        self.pivots = tuple(int(c) for c in pivots)
        self.p = p
        self.ambient_dim = ambient_dim
        self._annihilator: Optional[np.ndarray] = None

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> "SubBimodule":
        rows = np.asarray(vectors, dtype=SCALAR).reshape(-1, ambient_dim) if np.size(vectors) else np.zeros((0, ambient_dim), dtype=SCALAR)
        if rows.shape[0] == 0 or not np.any(rows % p):
            return cls.zero(p, ambient_dim)
        reduced, pivots = rref(rows, p)
        return cls(reduced, pivots, p, ambient_dim)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "SubBimodule":
        return cls(np.zeros((0, ambient_dim), dtype=SCALAR), (), p, ambient_dim)

    @classmethod
    def whole(cls, p: int, ambient_dim: int) -> "SubBimodule":
        return cls(np.eye(ambient_dim, dtype=SCALAR), range(ambient_dim), p, ambient_dim)

    @classmethod
    def from_coordinates(cls, coords: Iterable[int], p: int, ambient_dim: int) -> "SubBimodule":
        coords = sorted(set(coords))
        return cls(np.eye(ambient_dim, dtype=SCALAR)[coords], coords, p, ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def annihilator(self) -> np.ndarray:
        """Rows a with a·v = 0 exactly for v in this subspace"""
        if self._annihilator is None:
            self._annihilator = kernel_basis(self.basis, self.p, cols=self.ambient_dim)
        return self._annihilator

    def contains(self, v: np.ndarray) -> bool:
        residual = reduce_vector(self.basis, self.pivots, v, self.p)
        return not np.any(residual)

    def contains_rows(self, rows: np.ndarray) -> bool:
        if rows.shape[0] == 0:
            return True
        return not np.any(matmul(self.annihilator, rows.T, self.p))

    def __le__(self, other: "SubBimodule") -> bool:
        self._check(other)
        return self.dim <= other.dim and other.contains_rows(self.basis)

    def __lt__(self, other: "SubBimodule") -> bool:
        return self.dim < other.dim and self <= other

    def meet(self, other: "SubBimodule") -> "SubBimodule":
        self._check(other)
        return SubBimodule.span(intersect_row_spaces(self.basis, other.basis, self.p), self.p, self.ambient_dim)

    def join(self, other: "SubBimodule") -> "SubBimodule":
        self._check(other)
        return SubBimodule.span(np.vstack([self.basis, other.basis]), self.p, self.ambient_dim)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        return reduce_vector(self.basis, self.pivots, v, self.p)

    def support(self) -> List[int]:
        """Coordinates on which some element is nonzero"""
        if self.dim == 0:
            return []
        return [int(c) for c in np.nonzero(self.basis.any(axis=0))[0]]

    def is_coordinate(self) -> bool:
        return self.support() == list(self.pivots)

    def key(self) -> Tuple[Tuple[int, int], bytes]:
        return canonical_key(self.basis)

    def sort_key(self) -> Tuple[int, Tuple[int, ...], bytes]:
        return self.dim, self.pivots, self.basis.tobytes()

    def _check(self, other: "SubBimodule"):
        if other.ambient_dim != self.ambient_dim or other.p != self.p:
            raise DimensionMismatchError("Sub-bimodules of different bimodules")

    def __eq__(self, other):
        return isinstance(other, SubBimodule) and self.p == other.p and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SubBimodule(dim={self.dim}, pivots={list(self.pivots)})"


def _close(B: "ExtBimodule", current: SubBimodule) -> SubBimodule:
    actions = B.actions()
    while True:
        if current.dim == 0:
            return current
        images = [current.basis] + [matmul(current.basis, a.T, B.p) for a in actions]
        grown = SubBimodule.span(np.vstack(images), B.p, B.dim)
        if grown.dim == current.dim:
            return current
        current = grown


def generated_submodule(B: "ExtBimodule", vectors) -> SubBimodule:
    """Smallest action-closed subspace of B containing the vectors"""
    rows = np.asarray(vectors, dtype=SCALAR)
    if rows.size == 0:
        return SubBimodule.zero(B.p, B.dim)
    return _close(B, SubBimodule.span(rows.reshape(-1, B.dim), B.p, B.dim))


def is_action_closed(B: "ExtBimodule", N: SubBimodule) -> bool:
    return all(N.contains_rows(matmul(N.basis, a.T, B.p)) for a in B.actions())


def peirce_compatible(B: "ExtBimodule", N: SubBimodule) -> bool:
    """N equals the sum of its projections onto the Peirce blocks"""
    projections = []
    for i, e in enumerate(B.alg.idempotents):
        for j, f in enumerate(B.alg.idempotents):
            proj = matmul(B.left_act(f), B.right_act(e), B.p)
            projections.append(matmul(N.basis, proj.T, B.p))
    return SubBimodule.span(np.vstack(projections), B.p, B.dim) == N if projections else N.dim == 0


def coordinate_reach(B: "ExtBimodule") -> Optional[List[int]]:
    """
    Transitive action closure of each coordinate as a bitmask

    Returns None unless every action matrix is monomial in the global basis,
    in which case sub-bimodules are exactly the reach-closed coordinate sets.
    """
    if B.dim > 62 or any(block.dim > 1 for block in B.blocks.values()):
        return None
    step = [1 << c for c in range(B.dim)]
    for a in B.actions():
        nonzero = a != 0
        if np.any(nonzero.sum(axis=0) > 1):
            return None
        for target, source in zip(*np.nonzero(nonzero)):
            step[int(source)] |= 1 << int(target)

    reach = list(step)
    changed = True
    while changed:
        changed = False
        for c in range(B.dim):
            closure = reach[c]
            rest = closure & ~(1 << c)
            while rest:
                low = rest & -rest
                closure |= reach[low.bit_length() - 1]
                rest ^= low
            if closure != reach[c]:
                reach[c] = closure
                changed = True
    return reach


def _mask_coords(mask: int) -> Tuple[int, ...]:
    coords = []
    while mask:
        low = mask & -mask
        coords.append(low.bit_length() - 1)
        mask ^= low
    return tuple(coords)


def _enumerate_masks(dim: int, reach: List[int], node_budget: int) -> List[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        following = []
        for mask in frontier:
            for c in range(dim):
                if mask >> c & 1:
                    continue
                grown = mask | reach[c]
                if grown not in seen:
                    seen.add(grown)
                    following.append(grown)
                    if len(seen) > node_budget:
                        raise BudgetExceededError(
                            f"Coordinate enumeration exceeded the node budget of {node_budget}",
                            bound=node_budget,
                            required=len(seen),
                        )
        frontier = following
    return sorted(seen, key=lambda m: (bin(m).count("1"), _mask_coords(m)))


def _enumerate_general(B: "ExtBimodule", workers: int) -> List[SubBimodule]:
    cyclic: Dict[bytes, SubBimodule] = {}
    lock = threading.Lock()

    def cyclic_of(v: np.ndarray) -> SubBimodule:
        key = v.tobytes()
        with lock:
            found = cyclic.get(key)
        if found is None:
            found = generated_submodule(B, v)
            with lock:
                found = cyclic.setdefault(key, found)
        return found

    def children(N: SubBimodule) -> List[SubBimodule]:
        free = [c for c in range(B.dim) if c not in set(N.pivots)]
        return [N.join(cyclic_of(v)) for v in lead_one_vectors(free, B.dim, B.p)]

    zero = SubBimodule.zero(B.p, B.dim)
    seen = {zero.key(): zero}
    frontier = [zero]
    while frontier:
        found = parallel_map(children, frontier, workers)
        following = []
        for batch in found:
            for child in batch:
                if child.key() not in seen:
                    seen[child.key()] = child
                    following.append(child)
        frontier = sorted(following, key=SubBimodule.sort_key)
    return sorted(seen.values(), key=SubBimodule.sort_key)


def enumerate_submodules(
    B: "ExtBimodule",
    budget: int,
    node_budget: int,
    workers: int = 1,
    strategy: Optional[str] = None,
) -> "SubmoduleLattice":
    """
    Every sub-bimodule of B

    Args:
        B: The bimodule
        budget: Bound on p ** dim B for the general sweep
        node_budget: Bound on the node count of the coordinate sweep
        workers: Threads used to expand a BFS layer (general sweep)
        strategy: Force 'coordinate' or 'general'; by default the coordinate
            sweep runs whenever the actions are monomial

    Raises:
        BudgetExceededError: If the chosen sweep would exceed its bound
        ValidationError: If 'coordinate' is forced on a non-monomial bimodule
    """
    reach = coordinate_reach(B) if strategy != STRATEGY_GENERAL else None
    if strategy == STRATEGY_COORDINATE and reach is None:
        raise ValidationError("Coordinate enumeration needs monomial action matrices")

    if reach is not None:
        masks = _enumerate_masks(B.dim, reach, node_budget)
        logger.info(f"Enumerated {len(masks)} sub-bimodules by coordinate closure")
        return SubmoduleLattice(B.p, B.dim, masks=masks, strategy=STRATEGY_COORDINATE, reach=reach)

    required = B.p ** B.dim
    if required > budget:
        raise BudgetExceededError(
            f"Enumeration needs p^dim = {B.p}^{B.dim} = {required} vectors, "
            f"above the budget of {budget}",
            bound=budget,
            required=required,
        )
    nodes = _enumerate_general(B, workers)
    logger.info(f"Enumerated {len(nodes)} sub-bimodules by vector adjunction")
    return SubmoduleLattice(B.p, B.dim, nodes=nodes, strategy=STRATEGY_GENERAL)


@dataclass(frozen=True)
class ModularityResult:
    modular: bool
    witness: Optional[Tuple[int, int, int]] = None


class FiniteLattice:
    """
    A finite lattice given by a boolean order matrix

    leq[i, j] means i <= j. Joins and meets are found by row (column)
    lookup: the upper set of i ∨ j is the intersection of the upper sets.
    """

    def __init__(self, leq: Optional[np.ndarray] = None, labels: Optional[Sequence[str]] = None, size: Optional[int] = None):
        self._given_leq = None if leq is None else np.asarray(leq, dtype=bool)
        self.size = size if size is not None else self._given_leq.shape[0]
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.size)]

    def _compute_leq(self) -> np.ndarray:
        return self._given_leq.copy()

    @cached_property
    def leq(self) -> np.ndarray:
        leq = self._compute_leq()
        leq.flags.writeable = False
        return leq

    def is_partial_order(self) -> bool:
        rel = self.leq
        if not rel[np.diag_indices_from(rel)].all():
            return False
        if (rel & rel.T).sum() > len(rel):
            return False
        two_step = (rel.astype(np.float32) @ rel.astype(np.float32)) > 0
        return not ((~rel) & two_step).any()

    @cached_property
    def hasse(self) -> List[Tuple[int, int]]:
        """Cover relations (i, j): i < j with nothing strictly between"""
        lt = self.leq.copy()
        lt[np.diag_indices_from(lt)] = False
        weights = lt.astype(np.float32)
        between = (weights @ weights) > 0
        covers = lt & ~between
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(covers))]

    def _lattice_error(self, i: int, j: int, op: str):
        raise ValidationError(f"Not a lattice: {self.labels[i]} {op} {self.labels[j]} is not unique")

    def _compute_join_table(self) -> np.ndarray:
        leq = self.leq
        by_upper = {leq[i, :].tobytes(): i for i in range(self.size)}
        table = np.zeros((self.size, self.size), dtype=np.int64)
        for i in range(self.size):
            for j in range(i, self.size):
                k = by_upper.get((leq[i, :] & leq[j, :]).tobytes())
                if k is None:
                    self._lattice_error(i, j, "join")
                table[i, j] = table[j, i] = k
        return table

    def _compute_meet_table(self) -> np.ndarray:
        leq = self.leq
        by_lower = {leq[:, i].tobytes(): i for i in range(self.size)}
        table = np.zeros((self.size, self.size), dtype=np.int64)
        for i in range(self.size):
            for j in range(i, self.size):
                k = by_lower.get((leq[:, i] & leq[:, j]).tobytes())
                if k is None:
                    self._lattice_error(i, j, "meet")
                table[i, j] = table[j, i] = k
        return table

    @cached_property
    def join_table(self) -> np.ndarray:
        table = self._compute_join_table()
        table.flags.writeable = False
        return table

    @cached_property
    def meet_table(self) -> np.ndarray:
        table = self._compute_meet_table()
        table.flags.writeable = False
        return table

    def join(self, i: int, j: int) -> int:
        return int(self.join_table[i, j])

    def meet(self, i: int, j: int) -> int:
        return int(self.meet_table[i, j])

    @cached_property
    def bottom(self) -> int:
        below_counts = self.leq.sum(axis=0)
        bottoms = [i for i in range(self.size) if below_counts[i] == 1]
        if len(bottoms) != 1:
            raise ValidationError(f"Expected one bottom element, found {len(bottoms)}")
        return bottoms[0]

    @cached_property
    def top(self) -> int:
        below_counts = self.leq.sum(axis=0)
        tops = [i for i in range(self.size) if below_counts[i] == self.size]
        if len(tops) != 1:
            raise ValidationError(f"Expected one top element, found {len(tops)}")
        return tops[0]

    @cached_property
    def atoms(self) -> List[int]:
        return sorted(j for i, j in self.hasse if i == self.bottom)

    def is_modular(self) -> ModularityResult:
        """
        Check s ∧ (r ∨ t) = r ∨ (s ∧ t) for all r <= s and every t

        Returns:
            The first failing (r, s, t) in index order as witness
        """
        join, meet = self.join_table, self.meet_table
        for r, s in zip(*np.nonzero(self.leq)):
            lhs = meet[s, join[r, :]]
            rhs = join[r, meet[s, :]]
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                return ModularityResult(False, (int(r), int(s), int(bad[0])))
        return ModularityResult(True)

    def axiom_failures(self) -> List[str]:
        """Commutativity, associativity and absorption over every pair and triple"""
        join, meet = self.join_table, self.meet_table
        n = self.size
        failures = []
        if not np.array_equal(join, join.T) or not np.array_equal(meet, meet.T):
            failures.append("commutativity")

        everything = np.arange(n)
        for i in range(n):
            if not np.array_equal(join[join[i, :][:, None], everything[None, :]], join[i, join]):
                failures.append(f"join associativity at {i}")
            if not np.array_equal(meet[meet[i, :][:, None], everything[None, :]], meet[i, meet]):
                failures.append(f"meet associativity at {i}")
            if np.any(join[i, meet[i, :]] != i) or np.any(meet[i, join[i, :]] != i):
                failures.append(f"absorption at {i}")
        return failures

    def is_boolean_cube(self) -> bool:
        """Isomorphic to the powerset of its atoms"""
        atoms = self.atoms
        if self.size != 2 ** len(atoms):
            return False
        seen = set()
        for node in range(self.size):
            below = frozenset(a for a in atoms if self.leq[a, node])
            seen.add(below)
        if len(seen) != self.size:
            return False
        return self.is_modular().modular and all(
            any(self.meet(x, y) == self.bottom and self.join(x, y) == self.top for y in range(self.size))
            for x in range(self.size)
        )


class SubmoduleLattice(FiniteLattice):
    """
    The lattice of all sub-bimodules of B

    Nodes are sorted by (dim, pivots, entries); node 0 is 0 and the last
    node is B. On the coordinate path the nodes are kept as bitmasks and
    materialized on demand.
    """

    def __init__(
        self,
        p: int,
        ambient_dim: int,
        nodes: Optional[List[SubBimodule]] = None,
        masks: Optional[List[int]] = None,
        strategy: str = STRATEGY_GENERAL,
        reach: Optional[List[int]] = None,
    ):
        self.p = p
        self.ambient_dim = ambient_dim
        self.masks = masks
        self.reach = reach
        self.strategy = strategy
        self._nodes = nodes
        size = len(masks) if masks is not None else len(nodes)
        super().__init__(size=size)
        if masks is not None:
            self._index = {m: i for i, m in enumerate(masks)}
        else:
            self._index = {N.key(): i for i, N in enumerate(nodes)}

    @property
    def nodes(self) -> List[SubBimodule]:
        if self._nodes is None:
            self._nodes = [self.node(i) for i in range(self.size)]
        return self._nodes

    def node(self, i: int) -> SubBimodule:
        if self._nodes is not None:
            return self._nodes[i]
        return SubBimodule.from_coordinates(_mask_coords(self.masks[i]), self.p, self.ambient_dim)

    def dim_of(self, i: int) -> int:
        if self.masks is not None:
            return bin(self.masks[i]).count("1")
        return self._nodes[i].dim

    def index_of(self, N: SubBimodule) -> int:
        """
        Raises:
            KeyError: If N is not a node of the lattice
        """
        if self.masks is not None:
            if not N.is_coordinate():
                raise KeyError("Not a coordinate sub-bimodule")
            return self._index[sum(1 << c for c in N.pivots)]
        return self._index[N.key()]

    def mask_index(self, mask: int) -> Optional[int]:
        return self._index.get(mask)

    def __contains__(self, N: SubBimodule) -> bool:
        try:
            self.index_of(N)
        except KeyError:
            return False
        return True

    def _compute_leq(self) -> np.ndarray:
        if self.masks is not None:
            masks = np.array(self.masks, dtype=np.int64)
            return (masks[:, None] & ~masks[None, :]) == 0
        leq = np.zeros((self.size, self.size), dtype=bool)
        for j, upper in enumerate(self._nodes):
            for i, lower in enumerate(self._nodes):
                leq[i, j] = lower.dim <= upper.dim and upper.contains_rows(lower.basis)
        return leq

    def _table(self, combine) -> np.ndarray:
        table = np.zeros((self.size, self.size), dtype=np.int64)
        for i in range(self.size):
            for j in range(i, self.size):
                table[i, j] = table[j, i] = combine(i, j)
        return table

    def _compute_join_table(self) -> np.ndarray:
        if self.masks is not None:
            masks, index = self.masks, self._index
            return self._table(lambda i, j: index[masks[i] | masks[j]])
        return self._table(lambda i, j: self._index[self._nodes[i].join(self._nodes[j]).key()])

    def _compute_meet_table(self) -> np.ndarray:
        if self.masks is not None:
            masks, index = self.masks, self._index
            return self._table(lambda i, j: index[masks[i] & masks[j]])
        return self._table(lambda i, j: self._index[self._nodes[i].meet(self._nodes[j]).key()])

    @cached_property
    def hasse(self) -> List[Tuple[int, int]]:
        if self.masks is None or self.reach is None:
            return super().hasse
        covers = []
        for i, mask in enumerate(self.masks):
            grown = {mask | self.reach[c] for c in range(self.ambient_dim) if not mask >> c & 1}
            for upper in grown:
                if not any(other != upper and other & ~upper == 0 for other in grown):
                    covers.append((i, self._index[upper]))
        return sorted(covers)

    @cached_property
    def bottom(self) -> int:
        return 0

    @cached_property
    def top(self) -> int:
        return self.size - 1

    @cached_property
    def atoms(self) -> List[int]:
        # simple bimodules over a basic algebra with residue field F_p are one-dimensional
        return [i for i in range(self.size) if self.dim_of(i) == 1]

    def join_is_least_upper_bound(self) -> bool:
        """join(i, j) lies above i and j and below every common upper bound"""
        leq, join = self.leq, self.join_table
        for i in range(self.size):
            for j in range(i, self.size):
                k = join[i, j]
                upper = leq[i, :] & leq[j, :]
                if not upper[k] or not np.all(leq[k, upper]):
                    return False
        return True


def meet(N: SubBimodule, M: SubBimodule) -> SubBimodule:
    return N.meet(M)


def join(N: SubBimodule, M: SubBimodule) -> SubBimodule:
    return N.join(M)


def atoms(L: FiniteLattice) -> List[int]:
    return list(L.atoms)


def hasse(L: FiniteLattice) -> List[Tuple[int, int]]:
    return list(L.hasse)


def is_modular(L: FiniteLattice) -> ModularityResult:
    return L.is_modular()


def generators(B: "ExtBimodule", N: SubBimodule) -> List[np.ndarray]:
    """
    A minimal generating set of N

    Basis rows of N chosen greedily outside rad·N + N·rad; their images
    span the top of N.
    """
    if N.dim == 0:
        return []
    radical_images = [matmul(N.basis, a.T, B.p) for a in B.radical_actions()]
    current = SubBimodule.span(np.vstack(radical_images), B.p, B.dim) if radical_images else SubBimodule.zero(B.p, B.dim)
    chosen = []
    for row in N.basis:
        if not current.contains(row):
            chosen.append(row.copy())
            current = current.join(SubBimodule.span(row, B.p, B.dim))
    return chosen


def vector_label(v: np.ndarray, labels: Sequence[str]) -> str:
    terms = []
    for c in np.nonzero(v)[0]:
        coef = int(v[c])
        terms.append(labels[c] if coef == 1 else f"{coef}·{labels[c]}")
    return " + ".join(terms) if terms else "0"


def support_labels(N: SubBimodule, labels: Sequence[str]) -> List[str]:
    return [labels[c] for c in N.support()]


@dataclass(frozen=True)
class LatticeSummary:
    """Field-independent shape data of an enumerated lattice"""

    node_count: int
    hasse_edges: int
    dimensions: Tuple[Tuple[int, int], ...]
    closed_count: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "hasse_edges": self.hasse_edges,
            "dimensions": {str(d): c for d, c in self.dimensions},
            "closed_count": self.closed_count,
        }


def summarize(L: SubmoduleLattice, closed_count: Optional[int] = None) -> LatticeSummary:
    dims = Counter(L.dim_of(i) for i in range(L.size))
    return LatticeSummary(L.size, len(L.hasse), tuple(sorted(dims.items())), closed_count)
