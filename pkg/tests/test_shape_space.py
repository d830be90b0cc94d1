from fractions import Fraction as F

import pytest

from stateint.batteries import balanced_star_shape
from stateint.shape_space import (bracket_matrix, check_gauge_in_weight_kernel, check_moment_map,
                                  check_weights_commute, pachner_poisson_check, poisson_bracket, reduced_dims,
                                  slot_functional, symplectic_form, weight_functional)
from stateint.triangulation import (LeveledShape, TetGluingSpec, build_complex, fixture, simplex_star,
                                    simplex_star_edge, weights)

KNOTS = ["3_1_complement", "4_1_complement", "5_2_complement"]


def single():
    return build_complex(TetGluingSpec(1, ()), (1,))


def test_self_bracket_vanishes():
    X = single()
    for p in range(3):
        a = slot_functional(0, p)
        assert poisson_bracket(a, a, X) == 0


def test_cyclic_pair_bracket():
    X = single()
    assert poisson_bracket(slot_functional(0, 0), slot_functional(0, 1), X) == 1
    assert poisson_bracket(slot_functional(0, 1), slot_functional(0, 2), X) == 1
    assert poisson_bracket(slot_functional(0, 2), slot_functional(0, 0), X) == 1


@pytest.mark.parametrize("name", KNOTS + ["sp_3_ordered"])
def test_bracket_matrix_antisymmetric(name):
    M = bracket_matrix(fixture(name))
    n = len(M)
    assert all(M[i][j] == -M[j][i] for i in range(n) for j in range(n))


def test_trefoil_weights_commute():
    X = fixture("3_1_complement")
    w = [weight_functional(X, e) for e in range(len(X.edge_classes))]
    assert all(poisson_bracket(u, v, X) == 0 for u in w for v in w)


@pytest.mark.parametrize("name", KNOTS)
def test_structure_checks(name):
    X = fixture(name)
    for rep in (check_moment_map(X), check_weights_commute(X), check_gauge_in_weight_kernel(X)):
        assert rep.passed, rep.to_dict()


def test_moment_map_single_tetrahedron():
    assert check_moment_map(single()).passed


def test_symplectic_form_antisymmetric():
    w = symplectic_form(fixture("4_1_complement"))
    assert all(w[i][j] == -w[j][i] for i in range(len(w)) for j in range(len(w)))


def test_reduced_dims():
    assert reduced_dims(single()).as_tuple() == (2, 0, 2, 2)
    assert reduced_dims(fixture("4_1_complement")).as_tuple() == (4, 1, 3, 2)
    assert reduced_dims(fixture("5_2_complement")).as_tuple() == (6, 2, 4, 2)
    assert reduced_dims(fixture("3_1_complement")).dim_weight_fiber == 2


def test_pachner_poisson():
    X = simplex_star()
    e = simplex_star_edge(X)
    reps = pachner_poisson_check(X, balanced_star_shape(X, e), e)
    names = {r.name for r in reps}
    assert names == {"bracket_intertwining", "weight_brackets_preserved", "gauge_to_kernel", "gauge_to_gauge"}
    assert all(r.passed for r in reps)


def test_weight_functional_evaluates_sum():
    X = fixture("3_1_complement")
    s = LeveledShape.from_charges([(F(1, 10), F(1, 5), F(1, 5)), (F(1, 8), F(1, 8), F(1, 4))])
    assert [weight_functional(X, e)(s) for e in range(2)] == weights(X, s)
