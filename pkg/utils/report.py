"""
Report assembly and DOT emission

Both outputs are pure functions of a finished pipeline run, so two runs on
the same input produce byte-identical text.
"""

import logging
from typing import TYPE_CHECKING, Any, Dict, List

from algebra.exactness import closed_lattice
from algebra.lattice import generators, support_labels, summarize, vector_label
from utils.constants import (
    CONVENTION_BASIS_ORDER,
    CONVENTION_RIGHT_ACTION,
    CONVENTION_SCALARS,
    DOT_CLOSED_SHAPE,
    DOT_GRAPH_NAME,
    DOT_NODE_SHAPE,
    DOT_RANKDIR,
    REPORT_SCHEMA_VERSION,
    TRUNCATION_COMPOSITION,
    TRUNCATION_MIDDLE_EXACT,
)
from utils.helpers import format_support

if TYPE_CHECKING:
    from commands.lattice import LatticeRun

logger = logging.getLogger("wexlattice.report")


def generator_labels(run: "LatticeRun", idx: int) -> List[str]:
    """Labels of a minimal generating set of node idx"""
    L = run.lattice
    if L.masks is not None and L.reach is not None:
        coords = [c for c in range(L.ambient_dim) if L.masks[idx] >> c & 1]
        minimal = [c for c in coords if not any(d != c and L.reach[d] >> c & 1 for d in coords)]
        return [run.labels[c] for c in minimal]
    return [vector_label(v, run.labels) for v in generators(run.bimodule, L.node(idx))]


def _node_entry(run: "LatticeRun", idx: int, closed: set) -> Dict[str, Any]:
    L = run.lattice
    node = L.node(idx)
    entry = {
        "index": idx,
        "dim": node.dim,
        "basis": node.basis.tolist(),
        "generators": generator_labels(run, idx),
        "support": support_labels(node, run.labels),
        "socle": support_labels(node.meet(run.socle), run.labels),
        "closed": idx in closed,
        "maximal_with_socle": run.maximal[idx],
    }
    if run.verdicts is not None:
        verdict = run.verdicts[idx]
        entry["middle_exact"] = verdict.middle_exact_ok
        if verdict.witnesses:
            entry["witnesses"] = verdict.witnesses
    return entry


def build_report(run: "LatticeRun") -> Dict[str, Any]:
    """
    Assemble the JSON report of a pipeline run

    Args:
        run: Finished pipeline run

    Returns:
        A JSON-serializable dict; node order is the lattice order, so the
        order relation can be rebuilt from the bases and the Hasse edges
    """
    L, B, alg = run.lattice, run.bimodule, run.algebra
    closed = set(run.closed)
    names = [X.name for X in alg.indecs]

    blocks = [
        {"C": names[i], "A": names[j], "dim": space.dim, "offset": B.offsets[(i, j)]}
        for (i, j), space in sorted(B.blocks.items())
        if space.dim
    ]

    closed_order = closed_lattice(L, run.closed)
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "category": run.category.summary(),
        "algebra": {"dim": alg.dim, "radical_dim": len(alg.radical_basis)},
        "bimodule": {
            "dim": B.dim,
            "blocks": blocks,
            "coordinates": run.labels,
            "socle": support_labels(run.socle, run.labels),
        },
        "lattice": {
            "strategy": L.strategy,
            "summary": summarize(L, len(run.closed)).as_dict(),
            "nodes": [_node_entry(run, idx, closed) for idx in range(L.size)],
            "hasse": [list(edge) for edge in L.hasse],
            "atoms": list(L.atoms),
        },
        "closed": {
            "count": len(run.closed),
            "indices": run.closed,
            "hasse": [[run.closed[i], run.closed[j]] for i, j in closed_order.hasse],
        },
        "checks": run.checks,
        "conventions": {
            "basis_order": CONVENTION_BASIS_ORDER,
            "scalars": CONVENTION_SCALARS,
            "right_action": CONVENTION_RIGHT_ACTION,
            "middle_exactness": TRUNCATION_MIDDLE_EXACT,
            "composition": TRUNCATION_COMPOSITION,
        },
    }
    logger.debug(f"Assembled report with {L.size} nodes")
    return report


def render_dot(run: "LatticeRun", closed_only: bool = False) -> str:
    """
    Hasse diagram in DOT, bottom to top by dimension

    Closed nodes are double-circled. With closed_only the diagram shows the
    closed sublattice, whose covers come from the closed_join order.
    """
    L = run.lattice
    closed = set(run.closed)

    if closed_only:
        shown = list(run.closed)
        order = closed_lattice(L, run.closed)
        edges = [(run.closed[i], run.closed[j]) for i, j in order.hasse]
    else:
        shown = list(range(L.size))
        edges = list(L.hasse)

    lines = [f"digraph {DOT_GRAPH_NAME} {{", f"  rankdir={DOT_RANKDIR};", f"  node [shape={DOT_NODE_SHAPE}];"]
    for idx in shown:
        label = format_support(generator_labels(run, idx)).replace('"', '\\"')
        style = f", shape={DOT_CLOSED_SHAPE}" if idx in closed else ""
        lines.append(f'  n{idx} [label="{label}"{style}];')

    by_dim: Dict[int, List[int]] = {}
    for idx in shown:
        by_dim.setdefault(L.dim_of(idx), []).append(idx)
    for dim in sorted(by_dim):
        members = "; ".join(f"n{idx}" for idx in by_dim[dim])
        lines.append(f"  {{ rank=same; {members}; }}")

    for lower, upper in edges:
        lines.append(f"  n{lower} -> n{upper};")
    lines.append("}")
    return "\n".join(lines) + "\n"
