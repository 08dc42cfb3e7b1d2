"""
Quivers, representations over F_p and their morphism spaces

A representation stores one dimension per vertex and one matrix per arrow,
shaped (dim target) x (dim source). Morphisms store one matrix per vertex.
The type-A generator produces interval representations.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from algebra.field import (
    SCALAR,
    Matrix,
    block_diag,
    kernel_basis,
    matmul,
    rref,
    solve,
    solve_columns,
)
from utils.constants import (
    ERROR_BAD_ORIENTATION,
    ERROR_QUIVER_MISMATCH,
    ORIENTATION_LEFT,
    ORIENTATION_RIGHT,
)
from utils.exceptions import DimensionMismatchError, ValidationError

logger = logging.getLogger("wexlattice.quiver")

Path = Tuple[str, ...]


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    """
    A finite acyclic quiver with vertices 1..n

    Raises:
        ValidationError: On non-contiguous vertices, dangling or duplicate
            arrows, or an oriented cycle
    """

    vertices: Tuple[int, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        if tuple(self.vertices) != tuple(range(1, len(self.vertices) + 1)):
            raise ValidationError("Quiver vertices must be numbered 1..n without gaps.")

        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValidationError("Arrow ids must be unique.")

        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise ValidationError(f"Arrow {a.id} has an endpoint outside the vertex set.")

        self.topological_order()

    @property
    def n(self) -> int:
        return len(self.vertices)

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise ValidationError(f"Unknown arrow {arrow_id!r}")

    def arrows_into(self, v: int) -> List[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def arrows_out_of(self, v: int) -> List[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def topological_order(self) -> List[int]:
        """Kahn's algorithm; ties broken by vertex number"""
        indegree = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indegree[a.target] += 1

        ready = sorted(v for v, d in indegree.items() if d == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.arrows_out_of(v):
                indegree[a.target] -= 1
                if indegree[a.target] == 0:
                    ready.append(a.target)
                    ready.sort()

        if len(order) != self.n:
            raise ValidationError("Quiver has an oriented cycle; only acyclic quivers are supported.")
        return order

    def paths_from(self, v: int) -> List[Tuple[int, Path]]:
        """
        All paths starting at v as (end vertex, arrow ids)

        The trivial path comes first; the rest follow depth-first in arrow order.
        """
        paths: List[Tuple[int, Path]] = []

        def walk(vertex: int, path: Path):
            paths.append((vertex, path))
            for a in self.arrows_out_of(vertex):
                walk(a.target, path + (a.id,))

        walk(v, ())
        return paths


def type_a_quiver(n: int, orientation: str = "") -> Quiver:
    """
    The A_n quiver; character k of the orientation directs the arrow a{k}
    between vertices k and k+1 ('R' means k -> k+1)
    """
    if n < 1 or len(orientation) != n - 1 or any(
        c not in (ORIENTATION_RIGHT, ORIENTATION_LEFT) for c in orientation
    ):
        raise ValidationError(f"{ERROR_BAD_ORIENTATION} Got n={n}, orientation={orientation!r}.")

    arrows = []
    for k, c in enumerate(orientation, start=1):
        if c == ORIENTATION_RIGHT:
            arrows.append(Arrow(f"a{k}", k, k + 1))
        else:
            arrows.append(Arrow(f"a{k}", k + 1, k))
    return Quiver(tuple(range(1, n + 1)), tuple(arrows))


class Representation:
    """
    A representation of a quiver over F_p

    Equality and hashing ignore the display name, so two representations
    with the same dimensions and matrices are the same object for caching.
    """

    __slots__ = ("quiver", "p", "dims", "mats", "name", "_key")

    def __init__(
        self,
        quiver: Quiver,
        p: int,
        dims: Sequence[int],
        mats: Mapping[str, Matrix],
        name: Optional[str] = None,
    ):
        if len(dims) != quiver.n:
            raise DimensionMismatchError(
                f"Dimension vector has {len(dims)} entries, quiver has {quiver.n} vertices"
            )
        if any(d < 0 for d in dims):
            raise ValidationError("Dimensions must be non-negative.")

        self.quiver = quiver
        self.p = p
        self.dims = tuple(int(d) for d in dims)
        self.name = name

        checked: Dict[str, Matrix] = {}
        for a in quiver.arrows:
            expected = (self.dims[a.target - 1], self.dims[a.source - 1])
            raw = mats.get(a.id)
            m = np.zeros(expected, dtype=SCALAR) if raw is None else np.asarray(raw, dtype=SCALAR)
            if m.size == 0:
                m = np.zeros(expected, dtype=SCALAR)
            if m.shape != expected:
                raise DimensionMismatchError(
                    f"Matrix for arrow {a.id} has shape {m.shape}, expected {expected}"
                )
            checked[a.id] = m % p
        unknown = set(mats) - set(checked)
        if unknown:
            raise ValidationError(f"Matrices given for unknown arrows: {sorted(unknown)}")

        self.mats = checked
        self._key = (
            quiver,
            p,
            self.dims,
            tuple((aid, checked[aid].tobytes()) for aid in sorted(checked)),
        )

    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, start: int, path: Path) -> Matrix:
        """Composite of the arrow matrices along a path starting at `start`"""
        m = np.eye(self.dim(start), dtype=SCALAR)
        for aid in path:
            m = matmul(self.mats[aid], m, self.p)
        return m

    def renamed(self, name: str) -> "Representation":
        return Representation(self.quiver, self.p, self.dims, self.mats, name)

    def __eq__(self, other):
        return isinstance(other, Representation) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = self.name or "M"
        return f"{label}{list(self.dims)}"


def _check_same_category(*reps: Representation):
    first = reps[0]
    for r in reps[1:]:
        if r.quiver != first.quiver or r.p != first.p:
            raise DimensionMismatchError(ERROR_QUIVER_MISMATCH)


def zero_representation(quiver: Quiver, p: int) -> Representation:
    return Representation(quiver, p, [0] * quiver.n, {}, name="0")


class RepMorphism:
    """A family of matrices, one per vertex, commuting with the arrow matrices"""

    __slots__ = ("source", "target", "comps")

    def __init__(
        self,
        source: Representation,
        target: Representation,
        comps: Sequence[Matrix],
        check: bool = True,
    ):
        _check_same_category(source, target)
        if len(comps) != source.quiver.n:
            raise DimensionMismatchError("One component per vertex is required")

        checked = []
        for v, c in zip(source.quiver.vertices, comps):
            expected = (target.dim(v), source.dim(v))
            c = np.asarray(c, dtype=SCALAR)
            if c.size == 0 and expected[0] * expected[1] == 0:
                c = np.zeros(expected, dtype=SCALAR)
            if c.shape != expected:
                raise DimensionMismatchError(
                    f"Component at vertex {v} has shape {c.shape}, expected {expected}"
                )
            checked.append(c % source.p)

        self.source = source
        self.target = target
        self.comps = tuple(checked)

        if check and not self.intertwines():
            raise ValidationError(f"Matrices do not define a morphism {source!r} -> {target!r}")

    @property
    def p(self) -> int:
        return self.source.p

    def comp(self, v: int) -> Matrix:
        return self.comps[v - 1]

    def intertwines(self) -> bool:
        for a in self.source.quiver.arrows:
            lhs = matmul(self.comp(a.target), self.source.mats[a.id], self.p)
            rhs = matmul(self.target.mats[a.id], self.comp(a.source), self.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def flat(self) -> np.ndarray:
        """Row-major concatenation of the vertex components"""
        if not self.comps:
            return np.zeros(0, dtype=SCALAR)
        return np.concatenate([c.reshape(-1) for c in self.comps]).astype(SCALAR)

    def is_zero(self) -> bool:
        return not any(np.any(c) for c in self.comps)

    def is_injective(self) -> bool:
        return all(_full_column_rank(c, self.p) for c in self.comps)

    def is_surjective(self) -> bool:
        return all(_full_column_rank(c.T, self.p) for c in self.comps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def _combine(self, other: "RepMorphism", sign: int) -> "RepMorphism":
        if other.source != self.source or other.target != self.target:
            raise DimensionMismatchError("Cannot add morphisms between different objects")
        comps = [(a + sign * b) % self.p for a, b in zip(self.comps, other.comps)]
        return RepMorphism(self.source, self.target, comps, check=False)

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return self._combine(other, 1)

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return self._combine(other, -1)

    def scaled(self, scalar: int) -> "RepMorphism":
        return RepMorphism(
            self.source, self.target, [(scalar * c) % self.p for c in self.comps], check=False
        )

    def __neg__(self) -> "RepMorphism":
        return self.scaled(-1)

    def __eq__(self, other):
        return (
            isinstance(other, RepMorphism)
            and self.source == other.source
            and self.target == other.target
            and all(np.array_equal(a, b) for a, b in zip(self.comps, other.comps))
        )

    def __hash__(self):
        return hash((self.source, self.target, self.flat().tobytes()))

    def __repr__(self):
        return f"RepMorphism({self.source!r} -> {self.target!r})"


def _full_column_rank(m: Matrix, p: int) -> bool:
    if m.shape[1] == 0:
        return True
    return len(rref(m, p)[1]) == m.shape[1]


def identity(M: Representation) -> RepMorphism:
    return RepMorphism(M, M, [np.eye(d, dtype=SCALAR) for d in M.dims], check=False)


def zero_morphism(M: Representation, N: Representation) -> RepMorphism:
    return RepMorphism(
        M, N, [np.zeros((N.dim(v), M.dim(v)), dtype=SCALAR) for v in M.quiver.vertices], check=False
    )


def compose(g: RepMorphism, f: RepMorphism) -> RepMorphism:
    """g after f"""
    if f.target != g.source:
        raise DimensionMismatchError(f"Cannot compose {g!r} after {f!r}")
    comps = [matmul(gc, fc, f.p) for gc, fc in zip(g.comps, f.comps)]
    return RepMorphism(f.source, g.target, comps, check=False)


class HomSpace:
    """
    Hom(M, N) with a fixed basis

    The basis rows are the kernel basis of the intertwining system in the
    flattened coordinates of RepMorphism.flat.
    """

    __slots__ = ("source", "target", "basis_matrix", "basis")

    def __init__(self, source: Representation, target: Representation, basis_matrix: Matrix):
        self.source = source
        self.target = target
        self.basis_matrix = basis_matrix
        self.basis = [self.element_from_flat(row) for row in basis_matrix]

    @property
    def dim(self) -> int:
        return self.basis_matrix.shape[0]

    @property
    def p(self) -> int:
        return self.source.p

    def element_from_flat(self, flat: np.ndarray) -> RepMorphism:
        comps = []
        pos = 0
        for v in self.source.quiver.vertices:
            rows, cols = self.target.dim(v), self.source.dim(v)
            comps.append(np.asarray(flat[pos : pos + rows * cols], dtype=SCALAR).reshape(rows, cols))
            pos += rows * cols
        return RepMorphism(self.source, self.target, comps, check=False)

    def element(self, coords: Sequence[int]) -> RepMorphism:
        coords = np.asarray(coords, dtype=SCALAR).reshape(-1)
        if coords.shape[0] != self.dim:
            raise DimensionMismatchError(f"Expected {self.dim} Hom coordinates, got {coords.shape[0]}")
        flat = (coords @ self.basis_matrix) % self.p if self.dim else self._zero_flat()
        return self.element_from_flat(flat)

    def _zero_flat(self) -> np.ndarray:
        size = sum(self.target.dim(v) * self.source.dim(v) for v in self.source.quiver.vertices)
        return np.zeros(size, dtype=SCALAR)

    def coords(self, f: RepMorphism) -> np.ndarray:
        """
        Coordinates of f in the basis

        Raises:
            DimensionMismatchError: If f is not a morphism between the same objects
        """
        if f.source != self.source or f.target != self.target:
            raise DimensionMismatchError("Morphism does not belong to this Hom space")
        if self.dim == 0:
            return np.zeros(0, dtype=SCALAR)
        x = solve(self.basis_matrix.T, f.flat(), self.p)
        if x is None:
            raise ValidationError("Matrices are not an intertwiner")
        return x


@lru_cache(maxsize=None)
def hom_space(M: Representation, N: Representation) -> HomSpace:
    """
    All intertwiners M -> N

    For an arrow a: u -> v the constraint X_v M_a - N_a X_u = 0 is written in
    row-major flattened coordinates as (I ⊗ M_a^T) vec X_v - (N_a ⊗ I) vec X_u.

    Raises:
        DimensionMismatchError: If M and N live over different quivers or fields
    """
    _check_same_category(M, N)
    p = M.p
    quiver = M.quiver

    offsets = {}
    pos = 0
    for v in quiver.vertices:
        offsets[v] = pos
        pos += N.dim(v) * M.dim(v)
    total = pos

    blocks = []
    for a in quiver.arrows:
        u, v = a.source, a.target
        rows = N.dim(v) * M.dim(u)
        if rows == 0:
            continue
        constraint = np.zeros((rows, total), dtype=SCALAR)
        size_v = N.dim(v) * M.dim(v)
        size_u = N.dim(u) * M.dim(u)
        if size_v:
            constraint[:, offsets[v] : offsets[v] + size_v] += np.kron(
                np.eye(N.dim(v), dtype=SCALAR), M.mats[a.id].T
            )
        if size_u:
            constraint[:, offsets[u] : offsets[u] + size_u] -= np.kron(
                N.mats[a.id], np.eye(M.dim(u), dtype=SCALAR)
            )
        blocks.append(constraint % p)

    system = np.vstack(blocks) if blocks else np.zeros((0, total), dtype=SCALAR)
    basis = kernel_basis(system, p, cols=total)
    logger.debug(f"Hom({M!r}, {N!r}) has dimension {basis.shape[0]}")
    return HomSpace(M, N, basis)


@dataclass(frozen=True)
class Biproduct:
    """A direct sum with its injections and projections"""

    obj: Representation
    summands: Tuple[Representation, ...]
    injections: Tuple[RepMorphism, ...]
    projections: Tuple[RepMorphism, ...]


def direct_sum(*reps: Representation, name: Optional[str] = None) -> Biproduct:
    """
    Block-diagonal direct sum of one or more representations

    Raises:
        DimensionMismatchError: If the summands live over different quivers
    """
    if not reps:
        raise ValidationError("direct_sum needs at least one summand")
    _check_same_category(*reps)
    quiver, p = reps[0].quiver, reps[0].p

    dims = [sum(r.dim(v) for r in reps) for v in quiver.vertices]
    mats = {a.id: block_diag([r.mats[a.id] for r in reps]) for a in quiver.arrows}
    label = name or " ⊕ ".join(r.name or "M" for r in reps)
    total = Representation(quiver, p, dims, mats, name=label)

    injections, projections = [], []
    offsets = [0] * quiver.n
    for r in reps:
        inj_comps, proj_comps = [], []
        for idx, v in enumerate(quiver.vertices):
            inc = np.zeros((total.dim(v), r.dim(v)), dtype=SCALAR)
            inc[offsets[idx] : offsets[idx] + r.dim(v), :] = np.eye(r.dim(v), dtype=SCALAR)
            inj_comps.append(inc)
            proj_comps.append(inc.T.copy())
            offsets[idx] += r.dim(v)
        injections.append(RepMorphism(r, total, inj_comps, check=False))
        projections.append(RepMorphism(total, r, proj_comps, check=False))

    return Biproduct(total, tuple(reps), tuple(injections), tuple(projections))


def direct_sum_morphism(fs: Sequence[RepMorphism], source: Biproduct, target: Biproduct) -> RepMorphism:
    """The diagonal morphism f_1 ⊕ ... ⊕ f_k between two biproducts"""
    result = zero_morphism(source.obj, target.obj)
    for f, pr, inj in zip(fs, source.projections, target.injections):
        result = result + compose(inj, compose(f, pr))
    return result


def column_morphism(fs: Sequence[RepMorphism], target: Biproduct) -> RepMorphism:
    """[f_1; ...; f_k]: S -> T_1 ⊕ ... ⊕ T_k"""
    result = zero_morphism(fs[0].source, target.obj)
    for f, inj in zip(fs, target.injections):
        result = result + compose(inj, f)
    return result


def row_morphism(gs: Sequence[RepMorphism], source: Biproduct) -> RepMorphism:
    """[g_1, ..., g_k]: S_1 ⊕ ... ⊕ S_k -> T"""
    result = zero_morphism(source.obj, gs[0].target)
    for g, pr in zip(gs, source.projections):
        result = result + compose(g, pr)
    return result


@dataclass(frozen=True)
class ProjectiveSum:
    """
    A direct sum of indecomposable projectives P(v_1) ⊕ ... ⊕ P(v_k)

    P(v) at vertex w has the paths v -> w as basis; the trivial path of
    summand k is its generator.
    """

    tops: Tuple[int, ...]
    biproduct: Biproduct
    paths: Tuple[Dict[int, List[Path]], ...]

    @property
    def obj(self) -> Representation:
        return self.biproduct.obj


@lru_cache(maxsize=None)
def projective(quiver: Quiver, p: int, v: int) -> Representation:
    """The indecomposable projective P(v)"""
    by_vertex = _paths_by_end(quiver, v)
    dims = [len(by_vertex[w]) for w in quiver.vertices]

    mats = {}
    for a in quiver.arrows:
        m = np.zeros((dims[a.target - 1], dims[a.source - 1]), dtype=SCALAR)
        index_at_target = {path: i for i, path in enumerate(by_vertex[a.target])}
        for col, path in enumerate(by_vertex[a.source]):
            m[index_at_target[path + (a.id,)], col] = 1
        mats[a.id] = m
    return Representation(quiver, p, dims, mats, name=f"P{v}")


def _paths_by_end(quiver: Quiver, v: int) -> Dict[int, List[Path]]:
    by_vertex: Dict[int, List[Path]] = {w: [] for w in quiver.vertices}
    for end, path in quiver.paths_from(v):
        by_vertex[end].append(path)
    return by_vertex


def projective_sum(quiver: Quiver, p: int, tops: Sequence[int]) -> ProjectiveSum:
    tops = tuple(tops)
    if tops:
        bp = direct_sum(*[projective(quiver, p, v) for v in tops], name="⊕".join(f"P{v}" for v in tops))
    else:
        zero = zero_representation(quiver, p)
        bp = Biproduct(zero, (), (), ())
    return ProjectiveSum(tops, bp, tuple(_paths_by_end(quiver, v) for v in tops))


def morphism_from_generators(P: ProjectiveSum, M: Representation, images: Sequence[np.ndarray]) -> RepMorphism:
    """The unique morphism P -> M sending the k-th generator to images[k] ∈ M_{tops[k]}"""
    if len(images) != len(P.tops):
        raise DimensionMismatchError("One generator image per projective summand is required")
    comps = []
    for w in M.quiver.vertices:
        columns = []
        for v, image, paths in zip(P.tops, images, P.paths):
            image = np.asarray(image, dtype=SCALAR).reshape(-1)
            for path in paths[w]:
                columns.append(matmul(M.path_matrix(v, path), image.reshape(-1, 1), M.p))
        if columns:
            comps.append(np.hstack(columns))
        else:
            comps.append(np.zeros((M.dim(w), 0), dtype=SCALAR))
    return RepMorphism(P.obj, M, comps, check=False)


def generator_images(P: ProjectiveSum, f: RepMorphism) -> List[np.ndarray]:
    """Images of the summand generators; these determine f"""
    images = []
    offsets = {w: 0 for w in f.source.quiver.vertices}
    for v, paths in zip(P.tops, P.paths):
        images.append(f.comp(v)[:, offsets[v]].copy())
        for w in offsets:
            offsets[w] += len(paths[w])
    return images


def kernel(f: RepMorphism) -> Tuple[Representation, RepMorphism]:
    """Kernel object with its inclusion"""
    p = f.p
    quiver = f.source.quiver
    incl_comps = [kernel_basis(c, p, cols=f.source.dim(v)).T for v, c in zip(quiver.vertices, f.comps)]
    dims = [c.shape[1] for c in incl_comps]

    mats = {}
    for a in quiver.arrows:
        rhs = matmul(f.source.mats[a.id], incl_comps[a.source - 1], p)
        target_incl = incl_comps[a.target - 1]
        if dims[a.target - 1] == 0 or dims[a.source - 1] == 0:
            mats[a.id] = np.zeros((dims[a.target - 1], dims[a.source - 1]), dtype=SCALAR)
            continue
        m = solve_columns(target_incl, rhs, p)
        if m is None:
            raise ValidationError("Kernel is not a subrepresentation; input was not a morphism")
        mats[a.id] = m

    K = Representation(quiver, p, dims, mats, name="ker")
    return K, RepMorphism(K, f.source, incl_comps, check=False)


def cokernel(f: RepMorphism) -> Tuple[Representation, RepMorphism, List[Matrix]]:
    """
    Cokernel object, the quotient map, and a vertexwise linear section of it

    At each vertex the quotient coordinates are the non-pivot positions of
    the RREF image basis; the section sends them back to unit vectors.
    """
    p = f.p
    T = f.target
    quiver = T.quiver

    quotients, sections = [], []
    for v, c in zip(quiver.vertices, f.comps):
        t = T.dim(v)
        if c.shape[1] == 0 or not np.any(c):
            reduced, pivots = np.zeros((0, t), dtype=SCALAR), []
        else:
            reduced, pivots = rref(c.T, p)
        complement = [i for i in range(t) if i not in set(pivots)]

        select = np.zeros((len(pivots), t), dtype=SCALAR)
        for i, pc in enumerate(pivots):
            select[i, pc] = 1
        residual = (np.eye(t, dtype=SCALAR) - reduced.T @ select) % p
        quotients.append(residual[complement, :])

        section = np.zeros((t, len(complement)), dtype=SCALAR)
        for k, idx in enumerate(complement):
            section[idx, k] = 1
        sections.append(section)

    dims = [q.shape[0] for q in quotients]
    mats = {}
    for a in quiver.arrows:
        mats[a.id] = matmul(
            matmul(quotients[a.target - 1], T.mats[a.id], p), sections[a.source - 1], p
        )
    Q = Representation(quiver, p, dims, mats, name="coker")
    return Q, RepMorphism(T, Q, quotients, check=False), sections


def factor_through_cokernel(
    q: RepMorphism, sections: Sequence[Matrix], g: RepMorphism
) -> RepMorphism:
    """The induced map coker(f) -> Z for g: T -> Z with g∘f = 0"""
    comps = [matmul(gc, s, g.p) for gc, s in zip(g.comps, sections)]
    induced = RepMorphism(q.target, g.target, comps, check=False)
    if compose(induced, q) != g:
        raise ValidationError("Morphism does not vanish on the image; it does not factor")
    return induced


def projective_cover(M: Representation) -> Tuple[ProjectiveSum, RepMorphism]:
    """
    Projective cover P -> M

    At each vertex, unit vectors outside the pivots of the radical image
    span the top; one copy of P(v) is attached to each. Summands are in
    vertex order.
    """
    tops: List[int] = []
    images: List[np.ndarray] = []
    for v in M.quiver.vertices:
        d = M.dim(v)
        if d == 0:
            continue
        incoming = [M.mats[a.id] for a in M.quiver.arrows_into(v) if M.dim(a.source)]
        if incoming:
            radical = np.hstack(incoming)
            _, pivots = rref(radical.T, M.p) if np.any(radical) else (None, [])
        else:
            pivots = []
        for idx in range(d):
            if idx not in pivots:
                e = np.zeros(d, dtype=SCALAR)
                e[idx] = 1
                tops.append(v)
                images.append(e)

    P = projective_sum(M.quiver, M.p, tops)
    return P, morphism_from_generators(P, M, images)


def interval_representation(quiver: Quiver, p: int, i: int, j: int) -> Representation:
    """Dimension 1 on the vertices i..j, identity maps on arrows inside the interval"""
    dims = [1 if i <= v <= j else 0 for v in quiver.vertices]
    mats = {}
    for a in quiver.arrows:
        if i <= a.source <= j and i <= a.target <= j:
            mats[a.id] = np.ones((1, 1), dtype=SCALAR)
    return Representation(quiver, p, dims, mats, name=f"[{i},{j}]")


def type_a_category(n: int, orientation: str, p: int) -> List[Representation]:
    """
    The n(n+1)/2 interval indecomposables of A_n, ordered lexicographically by (i, j)

    Raises:
        ValidationError: If the orientation string is malformed
    """
    quiver = type_a_quiver(n, orientation)
    indecs = [
        interval_representation(quiver, p, i, j)
        for i in range(1, n + 1)
        for j in range(i, n + 1)
    ]
    logger.debug(f"Generated {len(indecs)} indecomposables for A{n} {orientation or '-'}")
    return indecs


def is_brick(M: Representation) -> bool:
    return not M.is_zero() and hom_space(M, M).dim == 1


def nontrivial_idempotents(M: Representation, limit: int = 100_000) -> List[RepMorphism]:
    """
    Brute-force the idempotents of End(M) other than 0 and the identity

    Raises:
        ValidationError: If p ** dim End(M) exceeds the limit
    """
    end = hom_space(M, M)
    if M.p ** end.dim > limit:
        raise ValidationError(f"End({M!r}) is too large to sweep ({M.p}^{end.dim} elements)")

    one, zero = identity(M), zero_morphism(M, M)
    found = []
    for coords in product(range(M.p), repeat=end.dim):
        e = end.element(coords)
        if e != zero and e != one and compose(e, e) == e:
            found.append(e)
    return found
