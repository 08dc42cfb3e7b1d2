import numpy as np
import pytest

from algebra.auslander import build_algebra, build_ext_bimodule, coordinate_labels, socle
from algebra.lattice import generated_submodule, support_labels
from algebra.quiver import direct_sum, type_a_category
from tests.golden import A3_COORDINATES, A3_SOCLE, ALPHA, BETA, BIMODULE_DIMS, DELTA, EPSILON, GAMMA
from utils.exceptions import ValidationError
from utils.helpers import parallel_map


def test_algebra_identities(a3_bimodule):
    alg = a3_bimodule.alg
    assert alg.n == 6
    assert alg.is_associative()
    assert alg.idempotents_ok()
    assert alg.radical_is_ideal()
    # longest chain of non-isomorphisms between the six intervals
    assert 2 <= alg.nilpotency_index() <= alg.n + 1


def test_bimodule_identities(a3_bimodule):
    assert a3_bimodule.invariant_failures() == []


def test_coordinate_labels(a3_bimodule):
    assert a3_bimodule.dim == 5
    assert coordinate_labels(a3_bimodule) == A3_COORDINATES


def test_socle_is_the_ar_sequences(a3_bimodule):
    soc = socle(a3_bimodule)
    assert soc.is_coordinate()
    assert set(support_labels(soc, coordinate_labels(a3_bimodule))) == A3_SOCLE
    for action in a3_bimodule.radical_actions():
        assert not np.any((soc.basis @ action.T) % a3_bimodule.p)


def test_generated_submodules_follow_the_relations(a3_bimodule):
    labels = coordinate_labels(a3_bimodule)
    unit = np.eye(a3_bimodule.dim, dtype=np.int64)

    delta = generated_submodule(a3_bimodule, unit[labels.index(DELTA)])
    assert set(support_labels(delta, labels)) == {DELTA, ALPHA, GAMMA}
    assert delta.is_coordinate()

    epsilon = generated_submodule(a3_bimodule, unit[labels.index(EPSILON)])
    assert set(support_labels(epsilon, labels)) == {EPSILON, GAMMA, BETA}

    both = generated_submodule(a3_bimodule, unit[labels.index(DELTA)] + unit[labels.index(EPSILON)])
    assert both.dim == 5


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bimodule_dimension_grows_with_n(n):
    B = build_ext_bimodule(build_algebra(type_a_category(n, "R" * (n - 1), 2)))
    assert B.dim == BIMODULE_DIMS[n]
    assert socle(B).dim == n * (n - 1) // 2


@pytest.mark.parametrize("orientation", ["RL", "LR"])
def test_other_orientations_have_three_ar_sequences(orientation):
    B = build_ext_bimodule(build_algebra(type_a_category(3, orientation, 3)))
    assert socle(B).dim == 3
    assert B.invariant_failures() == []


def test_build_algebra_rejects_non_bricks():
    indecs = type_a_category(2, "R", 2)
    with pytest.raises(ValidationError):
        build_algebra(indecs + [direct_sum(indecs[0], indecs[2]).obj])


def test_build_algebra_rejects_isomorphic_duplicates():
    indecs = type_a_category(2, "R", 2)
    with pytest.raises(ValidationError):
        build_algebra(indecs + [indecs[1].renamed("copy")])


def test_build_algebra_rejects_empty():
    with pytest.raises(ValidationError):
        build_algebra([])


def test_memo_computes_once_per_key(a3_bimodule):
    calls = []

    def compute():
        calls.append(1)
        return object()

    key = ("memo", "once")
    first = a3_bimodule.memo(key, compute)
    assert a3_bimodule.memo(key, compute) is first
    assert len(calls) == 1


def test_memo_under_threads(a3_bimodule):
    key = ("memo", "threads")
    results = parallel_map(lambda _: a3_bimodule.memo(key, object), range(32), workers=8)
    assert all(result is results[0] for result in results)
    assert a3_bimodule.cache[key] is results[0]
