from itertools import combinations

import numpy as np
import pytest

from algebra.auslander import coordinate_labels
from algebra.lattice import (
    STRATEGY_COORDINATE,
    STRATEGY_GENERAL,
    FiniteLattice,
    SubBimodule,
    SubmoduleLattice,
    enumerate_submodules,
    generators,
    is_action_closed,
    is_modular,
    peirce_compatible,
    summarize,
    support_labels,
    vector_label,
)
from tests.golden import A3_DIMENSIONS, A3_HASSE_EDGES, A3_NODES, DELTA
from utils.exceptions import BudgetExceededError, DimensionMismatchError, ValidationError


def lattice_from_sets(sets):
    """Order matrix of a family of frozensets under inclusion"""
    leq = np.array([[a <= b for b in sets] for a in sets], dtype=bool)
    return FiniteLattice(leq, labels=["".join(sorted(s)) or "0" for s in sets])


@pytest.fixture
def pentagon():
    # 0 < a < b < 1 and 0 < c < 1, with c incomparable to a and b
    sets = [frozenset(), frozenset("a"), frozenset("ab"), frozenset("c"), frozenset("abc")]
    return lattice_from_sets(sets)


@pytest.fixture
def diamond():
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    return FiniteLattice(leq)


@pytest.fixture
def cube():
    sets = [frozenset(c) for r in range(4) for c in combinations("xyz", r)]
    return lattice_from_sets(sets)


def test_pentagon_is_not_modular(pentagon):
    result = is_modular(pentagon)
    assert not result.modular
    r, s, t = result.witness
    assert pentagon.leq[r, s]
    assert pentagon.meet(s, pentagon.join(r, t)) != pentagon.join(r, pentagon.meet(s, t))


def test_diamond_is_modular_but_not_boolean(diamond):
    assert diamond.is_modular().modular
    assert not diamond.is_boolean_cube()
    assert diamond.atoms == [1, 2, 3]


def test_chain_is_modular():
    chain = FiniteLattice(np.triu(np.ones((4, 4), dtype=bool)))
    assert chain.is_modular().modular
    assert chain.hasse == [(0, 1), (1, 2), (2, 3)]
    assert not chain.is_boolean_cube()


def test_cube(cube):
    assert cube.is_partial_order()
    assert cube.is_boolean_cube()
    assert len(cube.hasse) == 12
    assert cube.axiom_failures() == []
    assert (cube.bottom, cube.top) == (0, 7)


def test_poset_without_joins_is_rejected():
    leq = np.array([[1, 1, 1], [0, 1, 0], [0, 0, 1]], dtype=bool)
    with pytest.raises(ValidationError):
        FiniteLattice(leq).join_table


def test_sub_bimodule_operations():
    U = SubBimodule.span([[1, 1, 0], [0, 0, 1]], 3, 3)
    V = SubBimodule.from_coordinates([0, 2], 3, 3)

    assert U.dim == 2 and V.dim == 2
    assert U.meet(V) == SubBimodule.from_coordinates([2], 3, 3)
    assert U.join(V) == SubBimodule.whole(3, 3)
    assert SubBimodule.zero(3, 3) <= U
    assert not U <= V
    assert U.contains(np.array([2, 2, 1]))
    assert not U.is_coordinate()
    assert V.is_coordinate()

    with pytest.raises(DimensionMismatchError):
        U.meet(SubBimodule.zero(3, 4))


def test_a3_enumeration(a3_bimodule):
    L = enumerate_submodules(a3_bimodule, budget=10**6, node_budget=10**6)
    assert L.strategy == STRATEGY_COORDINATE
    assert L.size == A3_NODES
    assert len(L.hasse) == A3_HASSE_EDGES
    assert summarize(L).as_dict()["dimensions"] == A3_DIMENSIONS
    assert L.node(L.bottom).dim == 0
    assert L.node(L.top).dim == a3_bimodule.dim


def test_sweeps_agree(a3_bimodule):
    fast = enumerate_submodules(a3_bimodule, 10**6, 10**6, strategy=STRATEGY_COORDINATE)
    slow = enumerate_submodules(a3_bimodule, 10**6, 10**6, workers=2, strategy=STRATEGY_GENERAL)

    assert slow.strategy == STRATEGY_GENERAL
    assert set(fast.nodes) == set(slow.nodes)
    assert summarize(fast).as_dict() == summarize(slow).as_dict()


def test_general_sweep_is_thread_count_independent(a3_bimodule):
    sequential = enumerate_submodules(a3_bimodule, 10**6, 10**6, workers=1, strategy=STRATEGY_GENERAL)
    threaded = enumerate_submodules(a3_bimodule, 10**6, 10**6, workers=8, strategy=STRATEGY_GENERAL)
    assert set(sequential.nodes) == set(threaded.nodes)
    assert summarize(sequential).as_dict() == summarize(threaded).as_dict()


def test_every_node_is_a_sub_bimodule(a3_bimodule):
    L = enumerate_submodules(a3_bimodule, 10**6, 10**6)
    for N in L.nodes:
        assert is_action_closed(a3_bimodule, N)
        assert peirce_compatible(a3_bimodule, N)


def test_lattice_laws(a3_bimodule):
    L = enumerate_submodules(a3_bimodule, 10**6, 10**6)
    assert L.is_modular().modular
    assert L.join_is_least_upper_bound()
    assert L.axiom_failures() == []
    assert L.is_partial_order()
    # the covers computed from coordinate reach match the generic ones
    assert L.hasse == FiniteLattice(L.leq).hasse


def test_atoms_are_socle_lines(a3_bimodule):
    L = enumerate_submodules(a3_bimodule, 10**6, 10**6)
    assert len(L.atoms) == 3
    assert all(L.dim_of(a) == 1 for a in L.atoms)


def test_budgets(a3_bimodule):
    with pytest.raises(BudgetExceededError) as info:
        enumerate_submodules(a3_bimodule, budget=31, node_budget=10**6, strategy=STRATEGY_GENERAL)
    assert info.value.required == 32
    assert info.value.exit_code == 3

    with pytest.raises(BudgetExceededError):
        enumerate_submodules(a3_bimodule, budget=10**6, node_budget=5)


def test_generators_of_cyclic_node(a3_bimodule):
    labels = coordinate_labels(a3_bimodule)
    L = enumerate_submodules(a3_bimodule, 10**6, 10**6)
    node = next(N for N in L.nodes if N.dim == 3 and labels.index(DELTA) in N.pivots)

    found = generators(a3_bimodule, node)
    assert [vector_label(v, labels) for v in found] == [DELTA]
    assert len(support_labels(node, labels)) == 3


def test_coordinate_index_lookup(a3_bimodule):
    L = enumerate_submodules(a3_bimodule, 10**6, 10**6)
    assert isinstance(L, SubmoduleLattice)
    for idx, N in enumerate(L.nodes):
        assert L.index_of(N) == idx
        assert N in L
    assert SubBimodule.span([[1, 1, 0, 0, 0]], 2, 5) not in L
