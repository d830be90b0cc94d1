import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from stateint.triangulation import (EDGES, PAIR_OF, GluingError, LeveledShape, MoveError, OrientationError,
                                    ShapeError, TetGluingSpec, admissible, apply_gauge, balanced_edges,
                                    build_complex, epsilon_pair, fixture, fixture_names, from_json, homology_h2,
                                    level_shift_oracle, load, pachner32, simplex_star, simplex_star_edge, sp_n,
                                    sp_n_central_edge, smith_normal_form, to_json, weights)

FIXTURES = Path(__file__).parents[1] / "src" / "stateint" / "fixtures"


def single():
    return build_complex(TetGluingSpec(1, ()), (1,))


def test_single_tetrahedron():
    X = single()
    assert X.counts() == {"vertices": 4, "edges": 6, "faces": 4, "tetrahedra": 1, "boundary_faces": 4}
    plus, minus = X.boundary_split()
    assert plus == [(0, 0), (0, 2)] and minus == [(0, 1), (0, 3)]
    s = LeveledShape(((F(1, 2), F(1, 3), F(1, 6)),))
    w = weights(X, s)
    for e in EDGES:
        assert w[X.edge_index(0, e)] == s.angle(0, e)


def test_trefoil_counts_and_weight():
    X = fixture("3_1_complement")
    assert X.counts() == {"vertices": 1, "edges": 2, "faces": 4, "tetrahedra": 2, "boundary_faces": 0}
    c1, c2 = F(1, 5), F(1, 4)
    s = LeveledShape.from_charges([(F(1, 10), F(1, 5), c1), (F(1, 8), F(1, 8), c2)])
    assert weights(X, s)[1] == 2 * (c1 + c2)
    assert sum(weights(X, s)) == 4


def test_figure_eight_weight():
    X = fixture("4_1_complement")
    p, m = (F(1, 10), F(1, 5), F(1, 5)), (F(1, 8), F(1, 8), F(1, 4))
    s = LeveledShape.from_charges([p, m])
    assert weights(X, s)[0] == 2 * (2 * p[0] + p[2] + 2 * m[1] + m[2])


def test_shape_validation():
    with pytest.raises(ShapeError):
        LeveledShape(((F(1, 2), F(1, 2), F(1, 2)),))
    with pytest.raises(ShapeError):
        LeveledShape(((F(1, 2), F(1, 2), F(0)),))
    LeveledShape(((F(3, 2), F(1, 2), F(-1)),), generalized=True)
    with pytest.raises(ShapeError):
        LeveledShape(((0.5, 0.3, 0.3),))
    with pytest.raises(ShapeError):
        weights(fixture("3_1_complement"), LeveledShape(((F(1, 3),) * 3,)))


def test_orientation_and_gluing_errors():
    with pytest.raises(OrientationError):
        build_complex(TetGluingSpec(2, ((0, 0, 1, 2),)), (1, 1))
    with pytest.raises(OrientationError):
        build_complex(TetGluingSpec(1, ()), (2,))
    with pytest.raises(GluingError):
        from_json('{"tetrahedra": 1}')
    with pytest.raises((GluingError, ValueError)):
        build_complex(TetGluingSpec(2, ((0, 0, 1, 1), (0, 0, 1, 3))), (1, 1))


def test_epsilon_pair():
    X = fixture("4_1_complement")
    assert epsilon_pair(X, (0, (0, 1)), (1, (0, 1))) == 0
    assert epsilon_pair(X, (0, (0, 1)), (0, (2, 3))) == 0
    assert epsilon_pair(X, (0, (0, 1)), (0, (0, 2))) == 1
    assert epsilon_pair(X, (0, (0, 2)), (0, (0, 1))) == -1
    assert epsilon_pair(X, (1, (0, 1)), (1, (0, 2))) == -1


def test_gauge_zero_is_identity():
    X = fixture("3_1_complement")
    s = LeveledShape.from_charges([(F(1, 10), F(1, 5), F(1, 5)), (F(1, 8), F(1, 8), F(1, 4))], F(1, 3))
    moved = apply_gauge(X, s, {0: 0, 1: 0})
    assert moved.angles == s.angles and moved.level == s.level


def test_level_shift_matches_oracle():
    X = sp_n(4)
    e = sp_n_central_edge(X)
    s = LeveledShape(((F(1, 2), F(1, 4), F(1, 4)),) * 4)
    g = {e: F(2, 7)}
    assert apply_gauge(X, s, g).level - s.level == level_shift_oracle(X, s, g)


def test_gauge_must_vanish_on_boundary():
    X = sp_n(3)
    s = LeveledShape(((F(1, 3),) * 3,) * 3)
    bnd = sorted(X.boundary_edges())[0]
    with pytest.raises(ShapeError):
        apply_gauge(X, s, {bnd: F(1, 10)})


def balanced_star():
    X = simplex_star()
    e = simplex_star_edge(X)
    angles = []
    for _, ed in X.edge_classes[e]:
        tri = [F(1, 6)] * 3
        tri[PAIR_OF[ed]] = F(2, 3)
        angles.append(tuple(tri))
    return X, e, LeveledShape(tuple(angles))


def test_pachner_symmetric_example():
    X, e, s = balanced_star()
    assert balanced_edges(X, s)[e]
    res = pachner32(X, s, e)
    assert res.complex.tet_count == 2
    assert res.shape.angles == ((F(1, 3),) * 3,) * 2
    before, after = weights(X, s), weights(res.complex, res.shape)
    assert all(before[o] == after[n] for o, n in res.edge_map.items())
    assert len(res.edge_map) == len(X.edge_classes) - 1


def test_pachner_errors():
    X, e, s = balanced_star()
    unbalanced = LeveledShape(((F(1, 3),) * 3,) * 3)
    with pytest.raises(MoveError):
        pachner32(X, unbalanced, e)
    with pytest.raises(MoveError):
        pachner32(X, s, (e + 1) % len(X.edge_classes))
    # the cyclic suspension has no compatible vertex order
    Y = sp_n(3)
    ce = sp_n_central_edge(Y)
    tri = []
    for _, ed in Y.edge_classes[ce]:
        t = [F(1, 6)] * 3
        t[PAIR_OF[ed]] = F(2, 3)
        tri.append(tuple(t))
    with pytest.raises(MoveError):
        pachner32(Y, LeveledShape(tuple(tri)), ce)


def test_smith_normal_form():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert smith_normal_form([[0, 0], [0, 0]]) == []


@pytest.mark.parametrize("name,expected", [("3_1_complement", True), ("4_1_complement", True),
                                           ("5_2_complement", True), ("s2xs1_fixture", False)])
def test_admissibility(name, expected):
    X = fixture(name)
    assert admissible(X) is expected
    if not expected:
        rep = homology_h2(X)
        assert rep.free_rank == 1 and rep.torsion == ()


def test_single_tetrahedron_admissible():
    assert homology_h2(single()).trivial


def test_boundary_split_balanced_on_all_fixtures():
    for name in fixture_names():
        X = fixture(name)
        plus, minus = X.boundary_split()
        assert len(plus) == len(minus)


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_fixtures_round_trip(path):
    text = path.read_text()
    X, s = load(path)
    assert to_json(X, s) == text
    if path.stem in fixture_names():
        assert X.spec == fixture(path.stem).spec and X.signs == fixture(path.stem).signs


def test_json_round_trip_with_shape():
    X, e, s = balanced_star()
    text = to_json(X, s)
    Y, t = from_json(text)
    assert to_json(Y, t) == text and t == s
    doc = json.loads(text)
    assert all(isinstance(a, str) for tri in doc["angles"] for a in tri)
