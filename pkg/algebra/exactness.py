"""
Closed sub-bimodules (exact structures) and the oracles that corroborate them

The authoritative decision is socle-maximality over the full enumeration:
among all sub-bimodules with a given socle exactly one is maximal, and that
one is closed. Middle-exactness, the composition search and the obscure
axiom check are independent tests run on realized sequences.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.auslander import ExtBimodule, socle
from algebra.field import SCALAR, kernel_basis, matmul, rank, row_space
from algebra.homalg import (
    ExtClass,
    ShortExactSeq,
    ext_space,
    pullback_action,
    pullback_matrix,
    pushout_action,
    pushout_matrix,
    realize,
    yoneda_class,
)
from algebra.lattice import FiniteLattice, SubBimodule, SubmoduleLattice
from algebra.quiver import (
    Representation,
    cokernel,
    column_morphism,
    compose,
    direct_sum,
    hom_space,
)
from utils.constants import ERROR_NOT_CLOSED
from utils.exceptions import StructuralError, ValidationError
from utils.helpers import parallel_map

logger = logging.getLogger("wexlattice.exactness")


@dataclass
class ClosednessVerdict:
    index: int
    node: SubBimodule
    closed: bool
    socle: SubBimodule
    maximal_with_socle: int
    middle_exact_ok: Optional[bool] = None
    witnesses: Dict[str, Any] = field(default_factory=dict)


@dataclass
class MiddleExactResult:
    ok: bool
    witness: Optional[Dict[str, Any]] = None
    sequences_checked: int = 0


@dataclass
class BooleanCheck:
    ok: bool
    closed_count: int
    socle_dim: int
    failures: List[str] = field(default_factory=list)


def _socle_key(L: SubmoduleLattice, soc: SubBimodule, idx: int):
    if L.masks is not None:
        return L.masks[idx] & sum(1 << c for c in soc.pivots)
    return L.node(idx).meet(soc).key()


def maximal_with_socle(L: SubmoduleLattice, B: ExtBimodule) -> List[int]:
    """
    For each node, the index of the unique maximal node sharing its socle

    Raises:
        StructuralError: If some socle class has no unique maximal element
    """
    soc = socle(B)
    groups: Dict[Any, List[int]] = {}
    for idx in range(L.size):
        groups.setdefault(_socle_key(L, soc, idx), []).append(idx)

    maximal: List[int] = [0] * L.size
    for key, members in groups.items():
        if L.masks is not None:
            union = 0
            for idx in members:
                union |= L.masks[idx]
            top = L.mask_index(union)
            if top is None or _socle_key(L, soc, top) != key:
                raise _non_unique(L, members)
        else:
            top = max(members, key=L.dim_of)
            top_node = L.node(top)
            if not all(L.node(idx) <= top_node for idx in members):
                raise _non_unique(L, members)
        for idx in members:
            maximal[idx] = top
    return maximal


def _non_unique(L: SubmoduleLattice, members: List[int]) -> StructuralError:
    top_dim = max(L.dim_of(i) for i in members)
    candidates = [i for i in members if L.dim_of(i) == top_dim]
    witness = {"socle_class": members, "maximal_candidates": candidates}
    logger.error("Socle class without a unique maximal node", extra={"witness": witness})
    return StructuralError("A socle class has no unique maximal sub-bimodule", witness)


def closed_indices(L: SubmoduleLattice, B: ExtBimodule) -> List[int]:
    return [idx for idx, top in enumerate(maximal_with_socle(L, B)) if idx == top]


def closed_flags(
    L: SubmoduleLattice,
    B: ExtBimodule,
    with_oracles: bool = False,
    composition_depth: int = 2,
    workers: int = 1,
    maximal: Optional[List[int]] = None,
) -> List[ClosednessVerdict]:
    """
    Closedness verdict for every node, by socle-maximality

    Args:
        L: The complete sub-bimodule lattice
        B: Its bimodule
        with_oracles: Also run middle_exact_check and composition_counterexample
            on every node, closed or not
        composition_depth: Search depth for composition witnesses
        workers: Threads used for the per-node oracles
        maximal: Precomputed result of maximal_with_socle
    """
    soc = socle(B)
    if maximal is None:
        maximal = maximal_with_socle(L, B)

    def verdict(idx: int) -> ClosednessVerdict:
        node = L.node(idx)
        v = ClosednessVerdict(idx, node, idx == maximal[idx], node.meet(soc), maximal[idx])
        if with_oracles:
            result = middle_exact_check(node, B)
            v.middle_exact_ok = result.ok
            if result.witness:
                v.witnesses["middle_exact"] = result.witness
            composition = composition_counterexample(node, B, composition_depth)
            if composition:
                v.witnesses["composition"] = composition
        return v

    verdicts = parallel_map(verdict, range(L.size), workers)
    logger.info(f"{sum(v.closed for v in verdicts)} of {L.size} sub-bimodules are closed")
    return verdicts


def component_maps(B: ExtBimodule, C: Representation, A: Representation) -> List[np.ndarray]:
    """
    Maps Ext(C, A) -> B given by ξ ↦ y_* x^* ξ, embedded in block (i, j),
    for Hom-basis morphisms x: X_i -> C and y: A -> X_j
    """
    return B.memo(("components", C, A), lambda: _component_maps(B, C, A))


def _component_maps(B: ExtBimodule, C: Representation, A: Representation) -> List[np.ndarray]:
    source_dim = ext_space(C, A).dim
    maps = []
    if source_dim:
        for i, Xi in enumerate(B.alg.indecs):
            for x in hom_space(Xi, C).basis:
                pulled = pullback_matrix(x, A)
                if not np.any(pulled):
                    continue
                for j, Xj in enumerate(B.alg.indecs):
                    if not B.blocks[(i, j)].dim:
                        continue
                    for y in hom_space(A, Xj).basis:
                        local = matmul(pushout_matrix(y, Xi), pulled, B.p)
                        if not np.any(local):
                            continue
                        embedded = np.zeros((B.dim, source_dim), dtype=SCALAR)
                        embedded[B.block_slice(i, j), :] = local
                        maps.append(embedded)
    return maps


def _constraints(N: SubBimodule, B: ExtBimodule, C: Representation, A: Representation) -> np.ndarray:
    """Rows whose common kernel is N(C, A) inside Ext(C, A)"""
    source_dim = ext_space(C, A).dim
    index = B.indec_index
    if N.annihilator.shape[0] == 0:
        return np.zeros((0, source_dim), dtype=SCALAR)
    if C in index and A in index:
        i, j = index[C], index[A]
        embed = np.zeros((B.dim, source_dim), dtype=SCALAR)
        embed[B.block_slice(i, j), :] = np.eye(source_dim, dtype=SCALAR)
        return matmul(N.annihilator, embed, B.p)
    maps = component_maps(B, C, A)
    if not maps:
        return np.zeros((0, source_dim), dtype=SCALAR)
    return np.vstack([matmul(N.annihilator, m, B.p) for m in maps])


def substructure_space(N: SubBimodule, B: ExtBimodule, C: Representation, A: Representation) -> np.ndarray:
    """
    Basis (rows, RREF) of N(C, A) ⊆ Ext(C, A) for arbitrary objects

    A class lies in N(C, A) exactly when all its components y_* x^* ξ
    between indecomposables lie in N.
    """
    source_dim = ext_space(C, A).dim
    constraints = _constraints(N, B, C, A)
    if constraints.shape[0] == 0:
        return np.eye(source_dim, dtype=SCALAR)
    return row_space(kernel_basis(constraints, B.p, cols=source_dim), B.p, source_dim)


def class_in_structure(xi: ExtClass, N: SubBimodule, B: ExtBimodule) -> bool:
    constraints = _constraints(N, B, xi.C, xi.A)
    if constraints.shape[0] == 0:
        return True
    return not np.any(matmul(constraints, xi.coords.reshape(-1, 1), B.p))


def structure_classes(N: SubBimodule, B: ExtBimodule) -> List[Tuple[int, int, ExtClass]]:
    """Basis classes of the Peirce blocks of N, as (C index, A index, class)"""
    classes = []
    for (i, j), space in sorted(B.blocks.items()):
        if not space.dim:
            continue
        local = substructure_space(N, B, B.alg.indecs[i], B.alg.indecs[j])
        classes.extend((i, j, space.element(row)) for row in local)
    return classes


def _realized(B: ExtBimodule, xi: ExtClass) -> ShortExactSeq:
    return B.memo(("realized", xi), lambda: realize(xi))


def _image_and_kernel(
    into: np.ndarray, source_rows: np.ndarray, out: np.ndarray, middle_rows: np.ndarray, p: int
) -> Tuple[int, int, bool]:
    """
    dim of into(S) and of ker(out) ∩ M for the complex S -> M -> ...,
    with whether the image lies in that kernel
    """
    image = matmul(source_rows, into.T, p) if source_rows.shape[0] else np.zeros((0, into.shape[0]), dtype=SCALAR)
    image_dim = rank(image, p) if image.shape[0] else 0

    if middle_rows.shape[0] == 0:
        return image_dim, 0, image_dim == 0
    coefficients = kernel_basis(matmul(out, middle_rows.T, p), p, cols=middle_rows.shape[0])
    kernel_rows = matmul(coefficients, middle_rows, p) if coefficients.shape[0] else np.zeros((0, middle_rows.shape[1]), dtype=SCALAR)
    kernel_dim = kernel_rows.shape[0]

    contained = True
    if image_dim:
        contained = kernel_dim > 0 and rank(np.vstack([kernel_rows, image]), p) == kernel_dim
    return image_dim, kernel_dim, contained


def middle_exact_check(N: SubBimodule, B: ExtBimodule) -> MiddleExactResult:
    """
    Middle-exactness of N(X, -) and N(-, X) on N-sequences

    For each indecomposable X and each sequence A ↣ E ↠ C realized from a
    basis class of a Peirce block of N, compares kernel and image at
    N(X, E), N(E, X), N(X, A) (connecting map Hom(X, C) -> N(X, A)) and
    N(C, X) (connecting map Hom(A, X) -> N(C, X)).
    """
    p = B.p
    checked = 0
    for i, j, xi in structure_classes(N, B):
        s = _realized(B, xi)
        A, E, C = s.A, s.B, s.C
        for k, X in enumerate(B.alg.indecs):
            checked += 1
            positions = [
                (
                    "N(X,E)",
                    pushout_matrix(s.i, X),
                    substructure_space(N, B, X, A),
                    pushout_matrix(s.d, X),
                    substructure_space(N, B, X, E),
                ),
                (
                    "N(E,X)",
                    pullback_matrix(s.d, X),
                    substructure_space(N, B, C, X),
                    pullback_matrix(s.i, X),
                    substructure_space(N, B, E, X),
                ),
            ]

            connecting_cov = [pullback_action(f, xi).coords for f in hom_space(X, C).basis]
            cov_rows = np.vstack(connecting_cov) if connecting_cov else np.zeros((0, ext_space(X, A).dim), dtype=SCALAR)
            positions.append(
                (
                    "N(X,A)",
                    np.eye(ext_space(X, A).dim, dtype=SCALAR),
                    cov_rows,
                    pushout_matrix(s.i, X),
                    substructure_space(N, B, X, A),
                )
            )

            connecting_con = [pushout_action(g, xi).coords for g in hom_space(A, X).basis]
            con_rows = np.vstack(connecting_con) if connecting_con else np.zeros((0, ext_space(C, X).dim), dtype=SCALAR)
            positions.append(
                (
                    "N(C,X)",
                    np.eye(ext_space(C, X).dim, dtype=SCALAR),
                    con_rows,
                    pullback_matrix(s.d, X),
                    substructure_space(N, B, C, X),
                )
            )

            for name, into, source_rows, out, middle_rows in positions:
                if into.shape[0] == 0 or (middle_rows.shape[0] == 0 and source_rows.shape[0] == 0):
                    continue
                image_dim, kernel_dim, contained = _image_and_kernel(into, source_rows, out, middle_rows, p)
                if not contained or image_dim != kernel_dim:
                    witness = {
                        "X": X.name,
                        "sequence_block": [B.alg.indecs[i].name, B.alg.indecs[j].name],
                        "class": xi.coords.tolist(),
                        "position": name,
                        "image_dim": image_dim,
                        "kernel_dim": kernel_dim,
                    }
                    return MiddleExactResult(False, witness, checked)
    return MiddleExactResult(True, None, checked)


def _pushouts_into(
    B: ExtBimodule, basis: List[Tuple[int, int, ExtClass]], target: Representation, depth: int
) -> List[Tuple[str, ExtClass]]:
    """N-classes in Ext(X_i, target): pushouts of basis classes, plus pairwise sums at depth 2"""
    found: Dict[int, List[Tuple[str, ExtClass]]] = {}
    for i, j, t in basis:
        for g_index, g in enumerate(hom_space(B.alg.indecs[j], target).basis):
            pushed = pushout_action(g, t)
            if not pushed.is_zero():
                label = f"g{g_index}_*({B.alg.indecs[i].name},{B.alg.indecs[j].name})"
                found.setdefault(i, []).append((label, pushed))

    classes = [item for i in sorted(found) for item in found[i]]
    if depth >= 2:
        for i in sorted(found):
            for (la, a), (lb, b) in combinations(found[i], 2):
                total = a + b
                if not total.is_zero():
                    classes.append((f"{la} + {lb}", total))
    return classes


def composition_counterexample(N: SubBimodule, B: ExtBimodule, depth: int = 2) -> Optional[Dict[str, Any]]:
    """
    Search for composable N-inflations whose composite is not an N-inflation

    First inflations come from basis classes of N (and pairwise sums within a
    block at depth 2); second inflations out of the middle term E come from
    pushouts of basis classes along Hom-basis morphisms into E (and pairwise
    sums at depth 2).

    Returns:
        The first violating pair as witness data, or None
    """
    basis = structure_classes(N, B)
    first: List[Tuple[str, ExtClass]] = [
        (f"({B.alg.indecs[i].name},{B.alg.indecs[j].name})", xi) for i, j, xi in basis
    ]
    if depth >= 2:
        by_block: Dict[Tuple[int, int], List[Tuple[str, ExtClass]]] = {}
        for (label, xi), (i, j, _) in zip(list(first), basis):
            by_block.setdefault((i, j), []).append((label, xi))
        for members in by_block.values():
            for (la, a), (lb, b) in combinations(members, 2):
                if not (a + b).is_zero():
                    first.append((f"{la} + {lb}", a + b))

    for first_label, xi in first:
        s1 = _realized(B, xi)
        for second_label, eta in _pushouts_into(B, basis, s1.B, depth):
            s2 = _realized(B, eta)
            composite = compose(s2.i, s1.i)
            Q, q, _ = cokernel(composite)
            theta = yoneda_class(ShortExactSeq(composite, q))
            if not class_in_structure(theta, N, B):
                return {
                    "first": first_label,
                    "first_class": xi.coords.tolist(),
                    "second": second_label,
                    "second_class": eta.coords.tolist(),
                    "cokernel_dims": list(Q.dims),
                    "composite_class": theta.coords.tolist(),
                }
    return None


def obscure_axiom_check(
    N: SubBimodule, B: ExtBimodule, rng: np.random.Generator, samples: int
) -> Optional[Dict[str, Any]]:
    """
    Spot-check: for an N-inflation k: A -> E and h: A -> Y, the map
    i = [k; h]: A -> E ⊕ Y satisfies pr_E∘i = k, so i must be an N-inflation

    Returns:
        The first sampled violation as witness data, or None
    """
    classes = structure_classes(N, B)
    if not classes:
        return None

    for _ in range(samples):
        i, j, xi = classes[int(rng.integers(len(classes)))]
        s = _realized(B, xi)
        y_index = int(rng.integers(len(B.alg.indecs)))
        Y = B.alg.indecs[y_index]
        hom = hom_space(s.A, Y)
        coords = rng.integers(0, B.p, size=hom.dim)
        h = hom.element(coords)

        target = direct_sum(s.B, Y)
        inflation = column_morphism([s.i, h], target)
        Q, q, _ = cokernel(inflation)
        theta = yoneda_class(ShortExactSeq(inflation, q))
        if not class_in_structure(theta, N, B):
            return {
                "sequence_block": [B.alg.indecs[i].name, B.alg.indecs[j].name],
                "class": xi.coords.tolist(),
                "Y": Y.name,
                "h": coords.tolist(),
                "class_of_induced": theta.coords.tolist(),
            }
    return None


def _below(L: SubmoduleLattice, a: int, b: int) -> bool:
    if L.masks is not None:
        return L.masks[a] & ~L.masks[b] == 0
    return L.node(a) <= L.node(b)


def _node_meet(L: SubmoduleLattice, a: int, b: int) -> int:
    if L.masks is not None:
        return L.mask_index(L.masks[a] & L.masks[b])
    return L.index_of(L.node(a).meet(L.node(b)))


def _node_join(L: SubmoduleLattice, a: int, b: int) -> int:
    if L.masks is not None:
        return L.mask_index(L.masks[a] | L.masks[b])
    return L.index_of(L.node(a).join(L.node(b)))


def structure_with_socle(
    L: SubmoduleLattice, B: ExtBimodule, S: SubBimodule, maximal: Optional[List[int]] = None
) -> int:
    """
    Index of the maximal sub-bimodule whose socle is S

    Raises:
        ValidationError: If S is not the socle of any node
    """
    soc = socle(B)
    if not S <= soc:
        raise ValidationError("Requested socle is not inside soc(B)")
    if S not in L:
        raise ValidationError("No sub-bimodule has the requested socle")
    if maximal is None:
        maximal = maximal_with_socle(L, B)
    return maximal[L.index_of(S)]


def closed_join(L: SubmoduleLattice, closed: Sequence[int], i: int, j: int) -> int:
    """
    Intersection of all closed nodes containing nodes i and j

    Raises:
        ValidationError: If i or j is not closed
    """
    closed_set = set(closed)
    if i not in closed_set or j not in closed_set:
        raise ValidationError(ERROR_NOT_CLOSED)

    if L.masks is not None:
        both = L.masks[i] | L.masks[j]
        result_mask = L.masks[L.top]
        for c in closed:
            if both & ~L.masks[c] == 0:
                result_mask &= L.masks[c]
        return L.mask_index(result_mask)

    result: Optional[SubBimodule] = None
    for c in closed:
        if _below(L, i, c) and _below(L, j, c):
            Nc = L.node(c)
            result = Nc if result is None else result.meet(Nc)
    return L.index_of(result)


def closed_join_table(L: SubmoduleLattice, closed: Sequence[int]) -> np.ndarray:
    """closed_join for every pair of closed nodes, as lattice indices, in the order of `closed`"""
    closed = list(closed)
    m = len(closed)
    if L.masks is None:
        table = np.zeros((m, m), dtype=np.int64)
        for a in range(m):
            for b in range(a, m):
                table[a, b] = table[b, a] = closed_join(L, closed, closed[a], closed[b])
        return table

    cm = np.array([L.masks[c] for c in closed], dtype=np.int64)
    full = np.int64(L.masks[L.top])
    table = np.zeros((m, m), dtype=np.int64)
    for a in range(m):
        both = cm[a] | cm
        above = (both[:, None] & ~cm[None, :]) == 0
        joined = np.bitwise_and.reduce(np.where(above, cm[None, :], full), axis=1)
        table[a] = [L.mask_index(int(mask)) for mask in joined]
    return table


def closed_lattice(L: SubmoduleLattice, closed: Sequence[int]) -> FiniteLattice:
    """
    The closed nodes ordered by inclusion

    Its join is closed_join; meet_closure_failures reports whether its meet
    is intersection.
    """
    closed = list(closed)
    if L.masks is not None:
        masks = np.array([L.masks[c] for c in closed], dtype=np.int64)
        leq = (masks[:, None] & ~masks[None, :]) == 0
    else:
        leq = np.array([[_below(L, a, b) for b in closed] for a in closed], dtype=bool).reshape(len(closed), len(closed))
    return FiniteLattice(leq, labels=[str(c) for c in closed])


def meet_closure_failures(L: SubmoduleLattice, closed: Sequence[int]) -> List[Tuple[int, int]]:
    """Pairs of closed nodes whose intersection is not closed"""
    closed_set = set(closed)
    failures = []
    for a, b in combinations(closed, 2):
        if _node_meet(L, a, b) not in closed_set:
            failures.append((a, b))
    return failures


def join_discrepancies(L: SubmoduleLattice, closed: Sequence[int]) -> List[Dict[str, int]]:
    """
    Closed pairs whose sum is strictly smaller than their closed join

    Raises:
        StructuralError: If some sum is not contained in the closed join
    """
    closed = list(closed)
    table = closed_join_table(L, closed)
    found = []
    for (x, a), (y, b) in combinations(enumerate(closed), 2):
        plain = _node_join(L, a, b)
        closed_idx = int(table[x, y])
        if not _below(L, plain, closed_idx):
            raise StructuralError("Sum of closed nodes is not below their closed join", {"pair": [a, b]})
        if plain != closed_idx:
            found.append({"left": a, "right": b, "join": plain, "closed_join": closed_idx})
    return found


def boolean_check(L: SubmoduleLattice, B: ExtBimodule, closed: Sequence[int]) -> BooleanCheck:
    """
    The closed nodes correspond to subsets of the socle lines

    Checks the count 2^(dim soc B), that node -> support of its socle is a
    bijection onto all subsets, and that it preserves and reflects order.
    """
    soc = socle(B)
    lines = set(soc.support())
    failures = []
    closed = list(closed)

    if len(closed) != 2 ** soc.dim:
        failures.append(f"{len(closed)} closed nodes, expected 2^{soc.dim}")
    if not soc.is_coordinate():
        failures.append("socle is not spanned by coordinate lines")

    images = [frozenset(L.node(c).meet(soc).support()) for c in closed]
    if len(set(images)) != len(images):
        failures.append("two closed nodes share a socle")
    if any(not image <= lines for image in images):
        failures.append("socle image outside the socle lines")

    order = closed_lattice(L, closed).leq
    mismatch = next(
        (
            (closed[a], closed[b])
            for a in range(len(closed))
            for b in range(len(closed))
            if order[a, b] != (images[a] <= images[b])
        ),
        None,
    )
    if mismatch:
        failures.append(f"order mismatch between nodes {mismatch[0]} and {mismatch[1]}")

    return BooleanCheck(not failures, len(closed), soc.dim, failures)


def socle_reconstruction_failures(L: SubmoduleLattice, B: ExtBimodule, closed: Sequence[int]) -> List[List[int]]:
    """
    Socle subsets S for which the closed join of the atoms ⟨σ⟩, σ ∈ S,
    differs from the maximal node with socle span(S)

    Requires a coordinate socle, which boolean_check reports on.
    """
    soc = socle(B)
    lines = soc.support()
    maximal = maximal_with_socle(L, B)
    atom_of = {c: L.index_of(SubBimodule.from_coordinates([c], B.p, B.dim)) for c in lines}

    failures = []
    for size in range(len(lines) + 1):
        for subset in combinations(lines, size):
            current = L.bottom
            for c in subset:
                current = closed_join(L, closed, current, atom_of[c])
            expected = structure_with_socle(L, B, SubBimodule.from_coordinates(subset, B.p, B.dim), maximal)
            if current != expected:
                failures.append(list(subset))
    return failures
