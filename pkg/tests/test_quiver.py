import numpy as np
import pytest

from algebra.quiver import (
    Arrow,
    Quiver,
    RepMorphism,
    Representation,
    cokernel,
    compose,
    direct_sum,
    hom_space,
    identity,
    is_brick,
    kernel,
    nontrivial_idempotents,
    projective,
    projective_cover,
    type_a_category,
    type_a_quiver,
)
from utils.exceptions import DimensionMismatchError, ValidationError


@pytest.fixture(scope="module")
def a3():
    return {X.name: X for X in type_a_category(3, "RR", 2)}


def test_type_a_category_lists_intervals_in_order():
    names = [X.name for X in type_a_category(3, "RR", 2)]
    assert names == ["[1,1]", "[1,2]", "[1,3]", "[2,2]", "[2,3]", "[3,3]"]
    assert len(type_a_category(1, "", 2)) == 1
    assert len(type_a_category(5, "RLRL", 3)) == 15


def test_orientation_directs_arrows():
    quiver = type_a_quiver(3, "RL")
    assert quiver.arrows == (Arrow("a1", 1, 2), Arrow("a2", 3, 2))
    assert quiver.topological_order() == [1, 3, 2]


@pytest.mark.parametrize("orientation", ["R", "RRR", "RX"])
def test_bad_orientation_is_rejected(orientation):
    with pytest.raises(ValidationError):
        type_a_quiver(3, orientation)


def test_cycle_is_rejected():
    with pytest.raises(ValidationError):
        Quiver((1, 2), (Arrow("a", 1, 2), Arrow("b", 2, 1)))


def test_representation_checks_matrix_shapes():
    quiver = type_a_quiver(2, "R")
    with pytest.raises(DimensionMismatchError):
        Representation(quiver, 2, [1, 1], {"a1": [[1, 0]]})
    with pytest.raises(DimensionMismatchError):
        Representation(quiver, 2, [1], {})


def test_every_interval_is_a_brick(a3):
    assert all(is_brick(X) for X in a3.values())
    assert all(not nontrivial_idempotents(X) for X in a3.values())


def test_direct_sum_has_idempotents(a3):
    S = direct_sum(a3["[1,1]"], a3["[3,3]"])
    assert not is_brick(S.obj)
    assert len(nontrivial_idempotents(S.obj)) == 2
    for inj, proj in zip(S.injections, S.projections):
        assert compose(proj, inj) == identity(inj.source)


@pytest.mark.parametrize("v", [1, 2, 3])
def test_hom_from_projective_is_evaluation(a3, v):
    P = projective(type_a_quiver(3, "RR"), 2, v)
    for X in a3.values():
        assert hom_space(P, X).dim == X.dim(v)


def test_projective_shapes():
    quiver = type_a_quiver(3, "RR")
    assert projective(quiver, 2, 1).dims == (1, 1, 1)
    assert projective(quiver, 2, 2).dims == (0, 1, 1)
    assert projective(quiver, 2, 3).dims == (0, 0, 1)


def test_hom_dimensions(a3):
    assert hom_space(a3["[3,3]"], a3["[2,3]"]).dim == 1
    assert hom_space(a3["[2,3]"], a3["[3,3]"]).dim == 0
    assert hom_space(a3["[2,2]"], a3["[1,2]"]).dim == 1
    assert hom_space(a3["[1,2]"], a3["[2,2]"]).dim == 0


def test_hom_coordinates_round_trip(a3):
    hom = hom_space(a3["[2,3]"], a3["[1,3]"])
    for coords in ([0], [1]):
        assert hom.coords(hom.element(coords)).tolist() == coords


def test_non_intertwiner_is_rejected(a3):
    X, Y = a3["[3,3]"], a3["[2,3]"]
    with pytest.raises(ValidationError):
        RepMorphism(Y, X, [np.zeros((0, 0)), np.zeros((0, 1)), np.ones((1, 1))])


def test_kernel_and_cokernel_of_ar_maps(a3):
    inclusion = hom_space(a3["[3,3]"], a3["[2,3]"]).basis[0]
    assert inclusion.is_injective()
    Q, q, _ = cokernel(inclusion)
    assert Q.dims == a3["[2,2]"].dims
    assert compose(q, inclusion).is_zero()

    surjection = hom_space(a3["[2,3]"], a3["[2,2]"]).basis[0]
    assert surjection.is_surjective()
    K, k = kernel(surjection)
    assert K.dims == a3["[3,3]"].dims
    assert compose(surjection, k).is_zero()


def test_projective_cover(a3):
    P, cover = projective_cover(a3["[2,2]"])
    assert P.tops == (2,)
    assert cover.is_surjective()

    P, cover = projective_cover(direct_sum(a3["[1,1]"], a3["[3,3]"]).obj)
    assert P.tops == (1, 3)
    assert P.obj.dims == (1, 1, 2)
