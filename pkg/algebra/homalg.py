"""
Projective presentations, Ext¹ as a cocycle quotient, and extension calculus

Ext¹(C, A) is computed as the cokernel of Hom(P0, A) -> Hom(P1, A) for the
minimal presentation 0 -> P1 -> P0 -> C -> 0. A morphism out of a sum of
indecomposable projectives is determined by its generator images, so
Hom(P1, A) is coordinatized by the concatenated generator images (the
"ambient" coordinates below).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from algebra.field import SCALAR, reduce_vector, rref, solve
from algebra.quiver import (
    ProjectiveSum,
    RepMorphism,
    Representation,
    cokernel,
    column_morphism,
    compose,
    direct_sum,
    direct_sum_morphism,
    factor_through_cokernel,
    generator_images,
    hom_space,
    identity,
    kernel,
    morphism_from_generators,
    projective_cover,
    row_morphism,
    zero_morphism,
)
from utils.exceptions import DimensionMismatchError, LiftError, StructuralError, ValidationError

logger = logging.getLogger("wexlattice.homalg")


@dataclass(frozen=True)
class ProjPresentation:
    """0 -> P1 --incl--> P0 --proj--> M -> 0"""

    M: Representation
    P0: ProjectiveSum
    P1: ProjectiveSum
    incl: RepMorphism
    proj: RepMorphism

    def is_exact(self) -> bool:
        return (
            self.incl.is_injective()
            and self.proj.is_surjective()
            and compose(self.proj, self.incl).is_zero()
            and all(
                p0 == p1 + m
                for p0, p1, m in zip(self.P0.obj.dims, self.P1.obj.dims, self.M.dims)
            )
        )


@lru_cache(maxsize=None)
def presentation(M: Representation) -> ProjPresentation:
    """
    Minimal projective presentation of M

    P0 is the projective cover of M and P1 the projective cover of the kernel;
    both list their summands in vertex order.

    Raises:
        StructuralError: If the kernel of the cover is not projective (the
            input is not a module over a hereditary path algebra)
    """
    P0, proj = projective_cover(M)
    K, k_incl = kernel(proj)
    P1, cover = projective_cover(K)
    incl = compose(k_incl, cover)

    pres = ProjPresentation(M, P0, P1, incl, proj)
    if not pres.is_exact():
        raise StructuralError(f"Presentation of {M!r} is not exact; the kernel of its cover is not projective")

    logger.debug(f"Presentation of {M!r}: P0 tops {P0.tops}, P1 tops {P1.tops}")
    return pres


class ExtSpace:
    """
    Ext¹(C, A) with a fixed basis of unit cocycles

    The coboundaries (image of Hom(P0, A)) are kept in RREF; the ambient
    coordinates outside its pivots index the basis, each basis cocycle being
    the corresponding unit vector.
    """

    __slots__ = (
        "C",
        "A",
        "pres",
        "ambient_dim",
        "image_basis",
        "image_pivots",
        "basis_columns",
    )

    def __init__(self, C: Representation, A: Representation):
        if C.quiver != A.quiver or C.p != A.p:
            raise DimensionMismatchError("Ext arguments live over different quivers or fields")
        self.C = C
        self.A = A
        self.pres = presentation(C)
        p = C.p

        P0, P1 = self.pres.P0, self.pres.P1
        self.ambient_dim = sum(A.dim(v) for v in P1.tops)

        rows = []
        for k, v in enumerate(P0.tops):
            for idx in range(A.dim(v)):
                images = [np.zeros(A.dim(w), dtype=SCALAR) for w in P0.tops]
                images[k][idx] = 1
                phi = morphism_from_generators(P0, A, images)
                rows.append(self.ambient_vector(compose(phi, self.pres.incl)))

        if rows and self.ambient_dim:
            reduced, pivots = rref(np.vstack(rows), p)
        else:
            reduced, pivots = np.zeros((0, self.ambient_dim), dtype=SCALAR), []
        self.image_basis = reduced
        self.image_pivots = pivots
        self.basis_columns = [c for c in range(self.ambient_dim) if c not in set(pivots)]

    @property
    def dim(self) -> int:
        return len(self.basis_columns)

    @property
    def p(self) -> int:
        return self.C.p

    def ambient_vector(self, z: RepMorphism) -> np.ndarray:
        """Generator images of a morphism P1 -> A, concatenated"""
        images = generator_images(self.pres.P1, z)
        if not images:
            return np.zeros(0, dtype=SCALAR)
        return np.concatenate(images).astype(SCALAR) % self.p

    def cocycle(self, coords) -> RepMorphism:
        """The representative cocycle P1 -> A of the class with these coordinates"""
        coords = np.asarray(coords, dtype=SCALAR).reshape(-1)
        vec = np.zeros(self.ambient_dim, dtype=SCALAR)
        vec[self.basis_columns] = coords % self.p
        images, pos = [], 0
        for v in self.pres.P1.tops:
            images.append(vec[pos : pos + self.A.dim(v)])
            pos += self.A.dim(v)
        return morphism_from_generators(self.pres.P1, self.A, images)

    def coords_of_ambient(self, vec: np.ndarray) -> np.ndarray:
        residual = reduce_vector(self.image_basis, self.image_pivots, vec, self.p)
        return residual[self.basis_columns]

    def class_of(self, z: RepMorphism) -> "ExtClass":
        if z.source != self.pres.P1.obj or z.target != self.A:
            raise DimensionMismatchError("Cocycle does not map P1(C) -> A")
        return ExtClass(self, self.coords_of_ambient(self.ambient_vector(z)))

    def element(self, coords) -> "ExtClass":
        coords = np.asarray(coords, dtype=SCALAR).reshape(-1) % self.p
        if coords.shape[0] != self.dim:
            raise DimensionMismatchError(f"Expected {self.dim} Ext coordinates, got {coords.shape[0]}")
        return ExtClass(self, coords)

    def zero(self) -> "ExtClass":
        return ExtClass(self, np.zeros(self.dim, dtype=SCALAR))

    def basis(self) -> List["ExtClass"]:
        return [ExtClass(self, row) for row in np.eye(self.dim, dtype=SCALAR)]

    def __repr__(self):
        return f"Ext({self.C!r}, {self.A!r}) dim {self.dim}"


@lru_cache(maxsize=None)
def ext_space(C: Representation, A: Representation) -> ExtSpace:
    return ExtSpace(C, A)


class ExtClass:
    """An element of Ext¹(C, A), in the coordinates of its ExtSpace"""

    __slots__ = ("space", "coords")

    def __init__(self, space: ExtSpace, coords):
        self.space = space
        self.coords = np.asarray(coords, dtype=SCALAR).reshape(-1) % space.p

    @property
    def C(self) -> Representation:
        return self.space.C

    @property
    def A(self) -> Representation:
        return self.space.A

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def cocycle(self) -> RepMorphism:
        return self.space.cocycle(self.coords)

    def scaled(self, scalar: int) -> "ExtClass":
        return ExtClass(self.space, scalar * self.coords)

    def __neg__(self) -> "ExtClass":
        return self.scaled(-1)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        return baer_sum(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, ExtClass)
            and self.C == other.C
            and self.A == other.A
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.C, self.A, self.coords.tobytes()))

    def __repr__(self):
        return f"ExtClass({self.C!r}, {self.A!r}, {self.coords.tolist()})"


class ShortExactSeq:
    """
    0 -> A --i--> B --d--> C -> 0

    Raises:
        ValidationError: If (i, d) is not a kernel-cokernel pair
    """

    __slots__ = ("A", "B", "C", "i", "d")

    def __init__(self, i: RepMorphism, d: RepMorphism):
        if i.target != d.source:
            raise DimensionMismatchError("Inflation target and deflation source differ")
        self.A, self.B, self.C = i.source, i.target, d.target
        self.i, self.d = i, d

        if not (i.is_injective() and d.is_surjective() and compose(d, i).is_zero()):
            raise ValidationError("Morphisms do not form a short exact sequence")
        if any(b != a + c for a, b, c in zip(self.A.dims, self.B.dims, self.C.dims)):
            raise ValidationError("Middle term dimension is not the sum of the end terms")

    def __repr__(self):
        return f"ShortExactSeq({self.A!r} -> {self.B!r} -> {self.C!r})"


def pushout_action(a: RepMorphism, eps: ExtClass) -> ExtClass:
    """a_*(ε): postcompose the cocycle with a: A -> A'"""
    if a.source != eps.A:
        raise DimensionMismatchError(f"Cannot push {eps!r} along a morphism out of {a.source!r}")
    target = ext_space(eps.C, a.target)
    return target.class_of(compose(a, eps.cocycle()))


def lift_chain_map(
    c: RepMorphism,
    perturbation: Optional[RepMorphism] = None,
) -> Tuple[RepMorphism, RepMorphism]:
    """
    Lift c: C' -> C to maps P0(C') -> P0(C) and P1(C') -> P1(C)

    Args:
        c: The morphism to lift
        perturbation: Optional h: P0(C') -> P1(C); the degree-0 lift is
            changed by incl∘h, giving another valid chain map over c

    Returns:
        (c0, c1) with proj∘c0 = c∘proj' and incl∘c1 = c0∘incl'

    Raises:
        LiftError: If a generator image has no preimage
    """
    source, target = presentation(c.source), presentation(c.target)
    p = c.p

    down = compose(c, source.proj)
    lifts0 = []
    for v, m in zip(source.P0.tops, generator_images(source.P0, down)):
        x = solve(target.proj.comp(v), m, p)
        if x is None:
            raise LiftError(f"Cannot lift through the cover of {c.target!r} at vertex {v}")
        lifts0.append(x)
    c0 = morphism_from_generators(source.P0, target.P0.obj, lifts0)
    if perturbation is not None:
        c0 = c0 + compose(target.incl, perturbation)

    across = compose(c0, source.incl)
    lifts1 = []
    for v, y in zip(source.P1.tops, generator_images(source.P1, across)):
        x = solve(target.incl.comp(v), y, p)
        if x is None:
            raise LiftError(f"Syzygy of {c.target!r} does not contain the lifted image at vertex {v}")
        lifts1.append(x)
    c1 = morphism_from_generators(source.P1, target.P1.obj, lifts1)
    return c0, c1


def pullback_action(
    c: RepMorphism, eps: ExtClass, perturbation: Optional[RepMorphism] = None
) -> ExtClass:
    """c^*(ε) for c: C' -> C: precompose the cocycle with a lift of c"""
    if c.target != eps.C:
        raise DimensionMismatchError(f"Cannot pull {eps!r} back along a morphism into {c.target!r}")
    _, c1 = lift_chain_map(c, perturbation)
    target = ext_space(c.source, eps.A)
    return target.class_of(compose(eps.cocycle(), c1))


def pushout_matrix(a: RepMorphism, C: Representation) -> np.ndarray:
    """Matrix of a_*: Ext(C, A) -> Ext(C, A'), columns indexed by the source basis"""
    source = ext_space(C, a.source)
    target = ext_space(C, a.target)
    m = np.zeros((target.dim, source.dim), dtype=SCALAR)
    for k, eps in enumerate(source.basis()):
        m[:, k] = pushout_action(a, eps).coords
    return m


def pullback_matrix(c: RepMorphism, A: Representation) -> np.ndarray:
    """Matrix of c^*: Ext(C, A) -> Ext(C', A)"""
    source = ext_space(c.target, A)
    target = ext_space(c.source, A)
    m = np.zeros((target.dim, source.dim), dtype=SCALAR)
    for k, eps in enumerate(source.basis()):
        m[:, k] = pullback_action(c, eps).coords
    return m


def realize(eps: ExtClass) -> ShortExactSeq:
    """
    An explicit sequence with class ε

    The middle term is the cokernel of [z; -incl]: P1 -> A ⊕ P0 for the
    cocycle z of ε.
    """
    pres = eps.space.pres
    A, C = eps.A, eps.C
    S = direct_sum(A, pres.P0.obj)

    graph = column_morphism([eps.cocycle(), -pres.incl], S)
    B, q, sections = cokernel(graph)
    B = B.renamed(f"E({C.name or 'C'},{A.name or 'A'})")
    q = RepMorphism(q.source, B, q.comps, check=False)

    i = compose(q, S.injections[0])
    d = factor_through_cokernel(q, sections, row_morphism([zero_morphism(A, C), pres.proj], S))
    return ShortExactSeq(i, d)


def yoneda_class(s: ShortExactSeq) -> ExtClass:
    """
    The class of a short exact sequence

    Lifts proj: P0 -> C through d, restricts to P1 and solves through i for
    the connecting cocycle P1 -> A.

    Raises:
        LiftError: If a lift fails (impossible for a valid sequence)
    """
    pres = presentation(s.C)
    p = s.A.p

    lifts0 = []
    for v, m in zip(pres.P0.tops, generator_images(pres.P0, pres.proj)):
        x = solve(s.d.comp(v), m, p)
        if x is None:
            raise LiftError(f"Deflation of {s!r} is not surjective at vertex {v}")
        lifts0.append(x)
    g = morphism_from_generators(pres.P0, s.B, lifts0)

    restricted = compose(g, pres.incl)
    lifts1 = []
    for v, y in zip(pres.P1.tops, generator_images(pres.P1, restricted)):
        w = solve(s.i.comp(v), y, p)
        if w is None:
            raise LiftError(f"Image of the syzygy does not lie in the inflation of {s!r}")
        lifts1.append(w)
    z = morphism_from_generators(pres.P1, s.A, lifts1)
    return ext_space(s.C, s.A).class_of(z)


def baer_sum(e1: ExtClass, e2: ExtClass) -> ExtClass:
    if e1.C != e2.C or e1.A != e2.A:
        raise DimensionMismatchError("Baer sum of classes in different Ext groups")
    return ExtClass(e1.space, e1.coords + e2.coords)


def split_sequence(A: Representation, C: Representation) -> ShortExactSeq:
    S = direct_sum(A, C)
    return ShortExactSeq(S.injections[0], S.projections[1])


def direct_sum_sequence(s1: ShortExactSeq, s2: ShortExactSeq) -> ShortExactSeq:
    SA, SB, SC = direct_sum(s1.A, s2.A), direct_sum(s1.B, s2.B), direct_sum(s1.C, s2.C)
    i = direct_sum_morphism([s1.i, s2.i], SA, SB)
    d = direct_sum_morphism([s1.d, s2.d], SB, SC)
    return ShortExactSeq(i, d)


def baer_sum_oracle(e1: ExtClass, e2: ExtClass) -> ExtClass:
    """
    ∇_A (E1 ⊕ E2) Δ_C computed on realized sequences

    Independent of the coordinate addition in baer_sum; used to check it.
    """
    if e1.C != e2.C or e1.A != e2.A:
        raise DimensionMismatchError("Baer sum of classes in different Ext groups")
    A, C = e1.A, e1.C
    theta = yoneda_class(direct_sum_sequence(realize(e1), realize(e2)))

    SA, SC = direct_sum(A, A), direct_sum(C, C)
    codiagonal = row_morphism([identity(A), identity(A)], SA)
    diagonal = column_morphism([identity(C), identity(C)], SC)
    return pullback_action(diagonal, pushout_action(codiagonal, theta))


def pushout_sequence(s: ShortExactSeq, a: RepMorphism) -> ShortExactSeq:
    """
    The pushout of s along a: A -> A'

    B' = coker([i; -a]: A -> B ⊕ A'), with i' and d' induced from the
    injection of A' and from [d, 0].
    """
    if a.source != s.A:
        raise DimensionMismatchError("Pushout morphism must start at the kernel term")
    S = direct_sum(s.B, a.target)
    B2, q, sections = cokernel(column_morphism([s.i, -a], S))
    i2 = compose(q, S.injections[1])
    d2 = factor_through_cokernel(q, sections, row_morphism([s.d, zero_morphism(a.target, s.C)], S))
    return ShortExactSeq(i2, d2)


def pullback_sequence(s: ShortExactSeq, c: RepMorphism) -> ShortExactSeq:
    """The pullback of s along c: C' -> C, with E' = ker([d, -c]: B ⊕ C' -> C)"""
    if c.target != s.C:
        raise DimensionMismatchError("Pullback morphism must end at the cokernel term")
    S = direct_sum(s.B, c.source)
    E, incl = kernel(row_morphism([s.d, -c], S))
    d2 = compose(S.projections[1], incl)

    # i' is the unique map A -> E with incl∘i' = [i; 0]
    target = column_morphism([s.i, zero_morphism(s.A, c.source)], S)
    comps = []
    for v in s.A.quiver.vertices:
        cols = []
        for col in range(s.A.dim(v)):
            x = solve(incl.comp(v), target.comp(v)[:, col], s.A.p)
            if x is None:
                raise LiftError("Inflation does not factor through the pullback")
            cols.append(x.reshape(-1, 1))
        comps.append(np.hstack(cols) if cols else np.zeros((E.dim(v), 0), dtype=SCALAR))
    i2 = RepMorphism(s.A, E, comps)
    return ShortExactSeq(i2, d2)


def sequence_isomorphism(s: ShortExactSeq, t: ShortExactSeq) -> Optional[RepMorphism]:
    """
    A middle-term isomorphism h: s.B -> t.B with h∘i = i' and d'∘h = d, if one exists

    Found by a linear solve over Hom(s.B, t.B).
    """
    if s.A != t.A or s.C != t.C:
        return None
    hom = hom_space(s.B, t.B)
    if hom.dim == 0:
        return None

    columns = [
        np.concatenate([compose(h, s.i).flat(), compose(t.d, h).flat()]) for h in hom.basis
    ]
    rhs = np.concatenate([t.i.flat(), s.d.flat()])
    x = solve(np.stack(columns, axis=1), rhs, s.A.p)
    if x is None:
        return None
    h = hom.element(x)
    return h if h.is_iso() else None


def sequences_isomorphic(s: ShortExactSeq, t: ShortExactSeq) -> bool:
    return sequence_isomorphism(s, t) is not None


def retraction(s: ShortExactSeq) -> Optional[RepMorphism]:
    """A map r: B -> A with r∘i = 1_A; exists iff s splits"""
    hom = hom_space(s.B, s.A)
    target = identity(s.A).flat()
    if hom.dim == 0:
        return None if np.any(target) else zero_morphism(s.B, s.A)
    columns = np.stack([compose(r, s.i).flat() for r in hom.basis], axis=1)
    x = solve(columns, target, s.A.p)
    return None if x is None else hom.element(x)


def is_split(s: ShortExactSeq) -> bool:
    return retraction(s) is not None
