"""
The verify command: named property suites over one category

Each check returns a CheckResult; the command passes iff every selected
check passes. Randomized checks draw from one generator seeded by --seed.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from algebra.auslander import ExtBimodule, build_algebra, build_ext_bimodule
from algebra.exactness import (
    boolean_check,
    closed_indices,
    closed_lattice,
    composition_counterexample,
    maximal_with_socle,
    middle_exact_check,
    obscure_axiom_check,
)
from algebra.homalg import (
    ExtClass,
    baer_sum,
    baer_sum_oracle,
    ext_space,
    presentation,
    pullback_action,
    pullback_sequence,
    pushout_action,
    pushout_sequence,
    realize,
    sequences_isomorphic,
    yoneda_class,
)
from algebra.lattice import SubmoduleLattice, enumerate_submodules, summarize
from algebra.quiver import hom_space, projective
from config.settings import (
    COMPOSITION_DEPTH,
    ENUMERATION_BUDGET,
    NODE_BUDGET,
    SEED,
    VERIFY_SAMPLES,
    WORKERS,
)
from utils.category_io import CategoryFile, load_category
from utils.constants import MAX_ORACLE_NODES, MAX_TABLE_NODES, STABILITY_PRIMES, VERIFY_CHECKS
from utils.decorators import log_command_usage, log_stage
from utils.exceptions import ValidationError

logger = logging.getLogger("wexlattice.commands.verify")


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    details: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "details": self.details,
            "witness": self.witness,
        }


class VerifyContext:
    """Lazily built pipeline objects shared by the checks of one run"""

    def __init__(
        self,
        category: CategoryFile,
        seed: int,
        samples: int,
        depth: int,
        budget: int,
        node_budget: int,
        workers: int,
    ):
        self.category = category
        self.rng = np.random.default_rng(seed)
        self.samples = samples
        self.depth = depth
        self.budget = budget
        self.node_budget = node_budget
        self.workers = workers

    @cached_property
    def bimodule(self) -> ExtBimodule:
        alg = build_algebra(self.category.indecs, self.workers)
        return build_ext_bimodule(alg, self.workers)

    @cached_property
    def lattice(self) -> SubmoduleLattice:
        return enumerate_submodules(self.bimodule, self.budget, self.node_budget, self.workers)

    @cached_property
    def maximal(self) -> List[int]:
        return maximal_with_socle(self.lattice, self.bimodule)

    @property
    def closed(self) -> List[int]:
        return [idx for idx, top in enumerate(self.maximal) if idx == top]

    def basis_classes(self) -> List[ExtClass]:
        B = self.bimodule
        return [eps for (_, _), space in sorted(B.blocks.items()) for eps in space.basis()]

    def random_class(self, eps: ExtClass) -> ExtClass:
        return eps.space.element(self.rng.integers(0, eps.space.p, size=eps.space.dim))


def _class_witness(eps: ExtClass, **extra) -> Dict[str, Any]:
    witness = {"C": eps.C.name, "A": eps.A.name, "class": eps.coords.tolist()}
    witness.update(extra)
    return witness


def check_roundtrip(ctx: VerifyContext) -> CheckResult:
    """yoneda_class(realize(ξ)) = ξ on every basis class and on sampled classes"""
    classes = ctx.basis_classes()
    classes += [ctx.random_class(eps) for eps in classes[: ctx.samples]]
    for eps in classes:
        if yoneda_class(realize(eps)) != eps:
            return CheckResult("roundtrip", False, len(classes), witness=_class_witness(eps))
    return CheckResult("roundtrip", True, len(classes))


def check_baer(ctx: VerifyContext) -> CheckResult:
    """Coordinate addition agrees with ∇(E1 ⊕ E2)Δ on all pairs of basis classes"""
    cases = 0
    B = ctx.bimodule
    for (_, _), space in sorted(B.blocks.items()):
        for e1, e2 in combinations_with_replacement(space.basis(), 2):
            cases += 1
            if baer_sum(e1, e2) != baer_sum_oracle(e1, e2):
                return CheckResult("baer", False, cases, witness=_class_witness(e1, other=e2.coords.tolist()))
    return CheckResult("baer", True, cases)


def check_pushout(ctx: VerifyContext) -> CheckResult:
    """
    Actions agree with explicit sequences: realize(a_*ξ) ≅ pushout of
    realize(ξ) along a, pullbacks likewise, and pullbacks do not depend on
    the chosen chain-map lift
    """
    cases = 0
    indecs = ctx.bimodule.alg.indecs
    for eps in ctx.basis_classes():
        s = realize(eps)
        for X in indecs:
            for a in hom_space(eps.A, X).basis:
                cases += 1
                pushed = pushout_action(a, eps)
                explicit = pushout_sequence(s, a)
                if yoneda_class(explicit) != pushed or not sequences_isomorphic(realize(pushed), explicit):
                    return CheckResult("pushout", False, cases, witness=_class_witness(eps, along=f"{eps.A.name}->{X.name}"))

            for c in hom_space(X, eps.C).basis:
                cases += 1
                pulled = pullback_action(c, eps)
                if yoneda_class(pullback_sequence(s, c)) != pulled:
                    return CheckResult("pushout", False, cases, witness=_class_witness(eps, along=f"{X.name}->{eps.C.name}"))

                perturbations = hom_space(presentation(X).P0.obj, presentation(eps.C).P1.obj)
                if perturbations.dim:
                    h = perturbations.element(ctx.rng.integers(0, eps.space.p, size=perturbations.dim))
                    if pullback_action(c, eps, perturbation=h) != pulled:
                        return CheckResult("pushout", False, cases, witness=_class_witness(eps, lift="perturbed"))
    return CheckResult("pushout", True, cases)


def check_bifunctor(ctx: VerifyContext) -> CheckResult:
    """a_* c^* = c^* a_* on all basis triples (ξ, a, c)"""
    cases = 0
    indecs = ctx.bimodule.alg.indecs
    for eps in ctx.basis_classes():
        for X in indecs:
            for a in hom_space(eps.A, X).basis:
                for Y in indecs:
                    for c in hom_space(Y, eps.C).basis:
                        cases += 1
                        if pushout_action(a, pullback_action(c, eps)) != pullback_action(c, pushout_action(a, eps)):
                            return CheckResult("bifunctor", False, cases, witness=_class_witness(eps, X=X.name, Y=Y.name))
    return CheckResult("bifunctor", True, cases)


def check_vanishing(ctx: VerifyContext) -> CheckResult:
    """Ext(P, X) = 0 for every indecomposable projective P"""
    category = ctx.category
    cases = 0
    for v in category.quiver.vertices:
        P = projective(category.quiver, category.p, v)
        for X in category.indecs:
            cases += 1
            if ext_space(P, X).dim:
                return CheckResult("vanishing", False, cases, witness={"vertex": v, "X": X.name})
    return CheckResult("vanishing", True, cases)


def _nodes_for_oracles(ctx: VerifyContext, name: str) -> Optional[CheckResult]:
    if ctx.lattice.size > MAX_ORACLE_NODES:
        return CheckResult(name, True, 0, details={"skipped": f"{ctx.lattice.size} nodes above {MAX_ORACLE_NODES}"})
    return None


def check_obscure(ctx: VerifyContext) -> CheckResult:
    """Sampled obscure-axiom instances on every sub-bimodule"""
    skipped = _nodes_for_oracles(ctx, "obscure")
    if skipped:
        return skipped
    L, B = ctx.lattice, ctx.bimodule
    for idx in range(L.size):
        witness = obscure_axiom_check(L.node(idx), B, ctx.rng, ctx.samples)
        if witness:
            witness["node"] = idx
            return CheckResult("obscure", False, idx + 1, witness=witness)
    return CheckResult("obscure", True, L.size, details={"samples_per_node": ctx.samples})


def check_oracles(ctx: VerifyContext) -> CheckResult:
    """Middle-exactness and the composition search agree with socle-maximality"""
    skipped = _nodes_for_oracles(ctx, "oracles")
    if skipped:
        return skipped
    L, B = ctx.lattice, ctx.bimodule
    closed = set(ctx.closed)
    for idx in range(L.size):
        node = L.node(idx)
        middle = middle_exact_check(node, B)
        if middle.ok != (idx in closed):
            return CheckResult("oracles", False, idx + 1, witness={"node": idx, "middle_exact": middle.ok, "detail": middle.witness})
        found = composition_counterexample(node, B, ctx.depth)
        if (found is None) != (idx in closed):
            return CheckResult("oracles", False, idx + 1, witness={"node": idx, "composition": found})
    return CheckResult("oracles", True, L.size, details={"closed": len(closed), "depth": ctx.depth})


def check_modularity(ctx: VerifyContext) -> CheckResult:
    L = ctx.lattice
    if L.size > MAX_TABLE_NODES:
        return CheckResult("modularity", True, 0, details={"skipped": f"{L.size} nodes above {MAX_TABLE_NODES}"})
    result = L.is_modular()
    witness = None if result.modular else {"r": result.witness[0], "s": result.witness[1], "t": result.witness[2]}
    passed = result.modular and L.join_is_least_upper_bound()
    return CheckResult("modularity", passed, L.size, witness=witness)


def check_boolean(ctx: VerifyContext) -> CheckResult:
    L, B = ctx.lattice, ctx.bimodule
    result = boolean_check(L, B, ctx.closed)
    cube = closed_lattice(L, ctx.closed).is_boolean_cube()
    details = {"closed_count": result.closed_count, "socle_dim": result.socle_dim, "cube": cube}
    witness = {"failures": result.failures} if result.failures else None
    return CheckResult("boolean", result.ok and cube, result.closed_count, details=details, witness=witness)


def check_field_stability(ctx: VerifyContext) -> CheckResult:
    """Lattice shape does not depend on the prime"""
    shapes = {}
    for p in STABILITY_PRIMES:
        category = ctx.category.over_field(p)
        alg = build_algebra(category.indecs, ctx.workers)
        B = build_ext_bimodule(alg, ctx.workers)
        L = enumerate_submodules(B, ctx.budget, ctx.node_budget, ctx.workers)
        closed = closed_indices(L, B)
        shapes[p] = summarize(L, len(closed)).as_dict()

    reference = shapes[STABILITY_PRIMES[0]]
    passed = all(shape == reference for shape in shapes.values())
    details = {str(p): shape for p, shape in shapes.items()}
    return CheckResult("field-stability", passed, len(shapes), details=details, witness=None if passed else details)


CHECKS: Dict[str, Callable[[VerifyContext], CheckResult]] = {
    "roundtrip": check_roundtrip,
    "baer": check_baer,
    "pushout": check_pushout,
    "bifunctor": check_bifunctor,
    "vanishing": check_vanishing,
    "obscure": check_obscure,
    "oracles": check_oracles,
    "modularity": check_modularity,
    "boolean": check_boolean,
    "field-stability": check_field_stability,
}


def parse_checks(selector: Optional[str]) -> List[str]:
    """
    Raises:
        ValidationError: On an unknown check name
    """
    if not selector or selector.strip() == "all":
        return list(VERIFY_CHECKS)
    names = [name.strip() for name in selector.split(",") if name.strip()]
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ValidationError(f"Unknown checks {unknown}. Valid options: {', '.join(VERIFY_CHECKS)}")
    return names


@log_stage("verify")
def run_checks(ctx: VerifyContext, names: Sequence[str]) -> List[CheckResult]:
    results = []
    for name in names:
        result = CHECKS[name](ctx)
        status = "✅" if result.passed else "❌"
        logger.info(f"{status} {name}: {result.cases} cases")
        results.append(result)
    return results


@log_command_usage
def cmd_verify(
    input_path: Path,
    checks: Optional[str] = None,
    seed: int = SEED,
    prime: Optional[int] = None,
    samples: int = VERIFY_SAMPLES,
    composition_depth: int = COMPOSITION_DEPTH,
    budget: int = ENUMERATION_BUDGET,
    node_budget: int = NODE_BUDGET,
    workers: int = WORKERS,
) -> Dict[str, Any]:
    """
    Run the selected property suites and return the pass/fail report

    Raises:
        ValidationError: On an unknown check or a bad category file
    """
    names = parse_checks(checks)
    category = load_category(input_path)
    if prime is not None and prime != category.p:
        category = category.over_field(prime)

    ctx = VerifyContext(category, seed, samples, composition_depth, budget, node_budget, workers)
    results = run_checks(ctx, names)
    return {
        "category": category.summary(),
        "seed": seed,
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
