"""
The lattice command: algebra -> bimodule -> enumeration -> verdicts -> checks
"""

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from algebra.auslander import (
    AuslanderAlgebra,
    ExtBimodule,
    build_algebra,
    build_ext_bimodule,
    coordinate_labels,
    socle,
)
from algebra.exactness import (
    ClosednessVerdict,
    boolean_check,
    closed_flags,
    closed_lattice,
    join_discrepancies,
    maximal_with_socle,
    meet_closure_failures,
    socle_reconstruction_failures,
)
from algebra.lattice import STRATEGY_COORDINATE, SubBimodule, SubmoduleLattice, enumerate_submodules
from config.settings import COMPOSITION_DEPTH, ENUMERATION_BUDGET, NODE_BUDGET, WORKERS
from utils.category_io import CategoryFile, load_category
from utils.constants import MAX_ORACLE_NODES, MAX_REPORTED_WITNESSES, MAX_TABLE_NODES
from utils.decorators import log_command_usage, log_stage
from utils.helpers import atomic_write_text, pluralize, to_json
from utils.report import build_report, render_dot

logger = logging.getLogger("wexlattice.commands.lattice")


@dataclass
class LatticeRun:
    category: CategoryFile
    algebra: AuslanderAlgebra
    bimodule: ExtBimodule
    lattice: SubmoduleLattice
    labels: List[str]
    socle: SubBimodule
    maximal: List[int]
    closed: List[int]
    verdicts: Optional[List[ClosednessVerdict]] = None
    checks: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks.get("passed", True))


@log_stage("bimodule")
def build_stage(category: CategoryFile, workers: int) -> Tuple[AuslanderAlgebra, ExtBimodule]:
    alg = build_algebra(category.indecs, workers)
    B = build_ext_bimodule(alg, workers)
    return alg, B


@log_stage("enumeration")
def enumerate_stage(B: ExtBimodule, budget: int, node_budget: int, workers: int) -> SubmoduleLattice:
    return enumerate_submodules(B, budget, node_budget, workers)


@log_stage("verdicts")
def verdict_stage(
    L: SubmoduleLattice, B: ExtBimodule, oracles: bool, depth: int, workers: int
) -> Tuple[List[int], List[int], Optional[List[ClosednessVerdict]]]:
    maximal = maximal_with_socle(L, B)
    closed = [idx for idx, top in enumerate(maximal) if idx == top]
    verdicts = None
    if oracles:
        verdicts = closed_flags(L, B, with_oracles=True, composition_depth=depth, workers=workers, maximal=maximal)
    logger.info(f"{pluralize(len(closed), 'closed sub-bimodule')} among {L.size} nodes")
    return maximal, closed, verdicts


def _modularity(L: SubmoduleLattice) -> Dict[str, Any]:
    if L.size <= MAX_TABLE_NODES:
        result = L.is_modular()
        return {"modular": result.modular, "witness": result.witness, "method": "exhaustive"}
    if L.strategy == STRATEGY_COORDINATE:
        # join and meet are union and intersection of coordinate sets
        return {"modular": True, "witness": None, "method": "coordinate-sets"}
    return {"modular": None, "witness": None, "method": "skipped"}


def _oracles(run: LatticeRun) -> Dict[str, Any]:
    if run.verdicts is None:
        return {"run": False, "agree": None}

    disagreements = [v.index for v in run.verdicts if v.middle_exact_ok != v.closed]
    missing = [v.index for v in run.verdicts if not v.closed and "composition" not in v.witnesses]
    closed_with_witness = [v.index for v in run.verdicts if v.closed and "composition" in v.witnesses]
    if disagreements:
        logger.warning(f"Middle-exactness disagrees with socle-maximality on nodes {disagreements}")
    if closed_with_witness:
        logger.warning(f"Composition witnesses found on closed nodes {closed_with_witness}")
    return {
        "run": True,
        "agree": not disagreements and not missing and not closed_with_witness,
        "middle_exact_disagreements": disagreements,
        "composition_missing": missing,
        "composition_on_closed": closed_with_witness,
    }


@log_stage("checks")
def checks_stage(run: LatticeRun) -> Dict[str, Any]:
    L, B = run.lattice, run.bimodule
    checks: Dict[str, Any] = {"modularity": _modularity(L)}

    boolean = boolean_check(L, B, run.closed)
    cube = closed_lattice(L, run.closed)
    checks["boolean"] = {
        "ok": boolean.ok,
        "closed_count": boolean.closed_count,
        "socle_dim": boolean.socle_dim,
        "closed_lattice_is_cube": cube.is_boolean_cube(),
        "failures": boolean.failures,
    }

    socle_lines = sorted(L.index_of(SubBimodule.from_coordinates([c], B.p, B.dim)) for c in run.socle.support())
    checks["atoms"] = {"ok": sorted(L.atoms) == socle_lines, "atoms": list(L.atoms), "socle_lines": socle_lines}

    reconstruction = socle_reconstruction_failures(L, B, run.closed) if run.socle.is_coordinate() else None
    checks["socle_reconstruction"] = {
        "ok": reconstruction == [],
        "failures": (reconstruction or [])[:MAX_REPORTED_WITNESSES],
    }

    meet_failures = meet_closure_failures(L, run.closed)
    checks["meet_closure"] = {"ok": not meet_failures, "failures": [list(f) for f in meet_failures[:MAX_REPORTED_WITNESSES]]}

    discrepancies = join_discrepancies(L, run.closed)
    checks["join_discrepancies"] = {
        "count": len(discrepancies),
        "witnesses": discrepancies[:MAX_REPORTED_WITNESSES],
    }

    checks["oracles"] = _oracles(run)

    verdicts = [
        checks["modularity"]["modular"] is not False,
        checks["boolean"]["ok"] and checks["boolean"]["closed_lattice_is_cube"],
        checks["atoms"]["ok"],
        checks["socle_reconstruction"]["ok"],
        checks["meet_closure"]["ok"],
        checks["oracles"]["agree"] is not False,
    ]
    checks["passed"] = all(verdicts)
    return checks


def run_pipeline(
    category: CategoryFile,
    budget: int,
    node_budget: int,
    workers: int = 1,
    composition_depth: int = 2,
    oracles: Optional[bool] = None,
) -> LatticeRun:
    """
    Full pipeline for one category

    Args:
        category: Loaded category file
        budget: Bound on p ** dim B for the general sweep
        node_budget: Node bound of the coordinate sweep
        workers: Threads for per-node work; output does not depend on it
        composition_depth: Depth of the composition search
        oracles: Run the per-node oracles; by default only when the lattice
            has at most MAX_ORACLE_NODES nodes

    Raises:
        ValidationError: If the category is not a valid input
        BudgetExceededError: If enumeration would exceed its budget
        StructuralError: If a computed structure contradicts the theory
    """
    alg, B = build_stage(category, workers)
    L = enumerate_stage(B, budget, node_budget, workers)

    if oracles is None:
        oracles = L.size <= MAX_ORACLE_NODES
        if not oracles:
            logger.info(f"Skipping per-node oracles for {L.size} nodes (limit {MAX_ORACLE_NODES})")

    maximal, closed, verdicts = verdict_stage(L, B, oracles, composition_depth, workers)
    run = LatticeRun(category, alg, B, L, coordinate_labels(B), socle(B), maximal, closed, verdicts)
    run.checks = checks_stage(run)
    return run


@log_command_usage
def cmd_lattice(
    input_path: Path,
    out_json: Optional[Path] = None,
    out_dot: Optional[Path] = None,
    closed_only: bool = False,
    prime: Optional[int] = None,
    budget: int = ENUMERATION_BUDGET,
    node_budget: int = NODE_BUDGET,
    workers: int = WORKERS,
    composition_depth: int = COMPOSITION_DEPTH,
    oracles: Optional[bool] = None,
) -> LatticeRun:
    """
    Run the pipeline on a category file and write the report and DOT

    The report goes to stdout when no JSON path is given.
    """
    category = load_category(input_path)
    if prime is not None and prime != category.p:
        category = category.over_field(prime)

    run = run_pipeline(category, budget, node_budget, workers, composition_depth, oracles)

    report_text = to_json(build_report(run))
    if out_json:
        atomic_write_text(out_json, report_text, validate_json=True)
        logger.info(f"Wrote report to {out_json}")
    else:
        sys.stdout.write(report_text)

    if out_dot:
        atomic_write_text(out_dot, render_dot(run, closed_only))
        logger.info(f"Wrote {'closed ' if closed_only else ''}lattice DOT to {out_dot}")

    return run
