from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import weighted_complexes
from oracles import regular_oracle
from stellar.complexes import (DeleteMaximal, Identity, Subdivide, WeightedComplex, apply_step,
                               is_isomorphic)
from stellar.exactgeom import den
from stellar.regular import (NotFareyMediant, NotRegular, PointOutsideSupport, RegularComplex,
                             Verdict, blow_up, blow_up_edge, canonical_realization, complex_contains,
                             delta_transform, farey_mediant, mark_validated, skeleton,
                             support_contains, supports_equal, to_mesh, unit_cube, validate_geometric)


def cx1(verts, simps, regular=True):
    return RegularComplex.build([[v] for v in verts], simps, regular=regular)


def test_skeleton_examples():
    w, r = skeleton(cx1([0, F(1, 2), 1], [[0, 1], [1, 2]]))
    assert sorted(w.weights.values()) == [1, 1, 2]
    assert len(w.maximal_faces) == 2
    w, _ = skeleton(cx1([F(1, 3)], [[0]]))
    assert list(w.weights.values()) == [3]
    tri = RegularComplex.build([[0, 0], [1, 0], [1, 1]], [[0, 1, 2]])
    w, _ = skeleton(tri)
    assert set(w.weights.values()) == {1} and len(next(iter(w.maximal_faces))) == 3


def test_canonical_realization_examples():
    seg = WeightedComplex.build([("0", 1), ("1", 1)], [["0", "1"]])
    g = canonical_realization(seg).geometric
    assert g.ambient_dim == 2 and g.geometric_simplexes() == {frozenset({(1, 0), (0, 1)})}
    g = canonical_realization(WeightedComplex.build([("x", 3)], [["x"]])).geometric
    assert g.vertices == ((F(1, 3),),)
    pts = WeightedComplex.build([("a", 2), ("b", 5)], [["a"], ["b"]])
    g = canonical_realization(pts).geometric
    assert set(g.vertices) == {(F(1, 2), F(0)), (F(0), F(1, 5))}
    assert all(regular_oracle(g.simplex_points(s)) for s in g.maximal_simplexes)


def test_farey_mediant_examples():
    assert farey_mediant([(F(0),), (F(1),)]) == (F(1, 2),)
    assert farey_mediant([(F(1, 2),), (F(1),)]) == (F(2, 3),)
    assert farey_mediant([(F(1, 3),), (F(1, 2),)]) == (F(2, 5),)
    with pytest.raises(NotRegular):
        farey_mediant([(F(0),), (F(2, 3),)])


def test_blow_up_examples():
    seg = cx1([0, 1], [[0, 1]])
    out = blow_up(seg, (F(1, 2),))
    assert out.geometric_simplexes() == {frozenset({(F(0),), (F(1, 2),)}), frozenset({(F(1, 2),), (F(1),)})}
    tri = RegularComplex.build([[0, 0], [1, 0], [1, 1]], [[0, 1, 2]])
    out = blow_up(tri, (F(1, 2), F(0)))
    assert len(out.maximal_simplexes) == 2
    shared = frozenset.intersection(*out.geometric_simplexes())
    assert shared == {(F(1, 2), F(0)), (F(1), F(1))}
    with pytest.raises(PointOutsideSupport):
        blow_up(cx1([0, F(1, 2)], [[0, 1]]), (F(3, 4),))
    with pytest.raises(NotFareyMediant):
        blow_up(seg, (F(1, 3),))


def test_delta_transform_examples():
    w = WeightedComplex.build([("v", 1), ("w", 1)], [["v", "w"]])
    r = canonical_realization(w)
    r2 = delta_transform(r, Subdivide(["v", "w"], "a"))
    assert r2.point("a") == (F(1, 2), F(1, 2)) and den(r2.point("a")) == r2.weighted.weights["a"] == 2
    r3 = delta_transform(r, DeleteMaximal(["v", "w"]))
    assert r3.geometric.geometric_simplexes() == {frozenset({(1, 0)}), frozenset({(0, 1)})}
    assert delta_transform(r, Identity()) is r


def test_support_contains_examples():
    seg = cx1([0, 1], [[0, 1]])
    assert support_contains(seg, [(F(1, 4),), (F(1, 2),)]).status is Verdict.YES
    res = support_contains(cx1([0, F(1, 2)], [[0, 1]]), [(F(0),), (F(1),)])
    assert res.status is Verdict.NO and res.witness[0] > F(1, 2)
    halves = cx1([0, F(1, 2), 1], [[0, 1], [1, 2]])
    assert support_contains(halves, [(F(0),), (F(1),)]).status is Verdict.YES


def test_support_contains_gap_witness():
    gap = cx1([0, F(1, 3), F(1, 2), 1], [[0, 1], [2, 3]])
    res = support_contains(gap, [(F(0),), (F(1),)])
    assert res.status is Verdict.NO
    assert F(1, 3) < res.witness[0] < F(1, 2)


def test_support_contains_dim2():
    sq = unit_cube(2)
    tri = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1))]
    assert support_contains(sq, tri).status is Verdict.YES
    half = RegularComplex.build([[0, 0], [1, 0], [1, 1]], [[0, 1, 2]])
    res = support_contains(half, [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))])
    assert res.status is Verdict.NO
    assert not half.contains_point(res.witness)


def test_support_contains_gives_up_at_cap():
    sq = unit_cube(2)
    # a thin triangle straddling the diagonal needs many splits
    thin = [(F(0), F(0)), (F(1), F(1)), (F(1, 2), F(1, 3))]
    assert support_contains(sq, thin, max_blowups=0).status in (Verdict.YES, Verdict.UNKNOWN)


def test_validate_geometric_examples():
    ok = cx1([0, F(1, 2), 1], [[0, 1], [1, 2]])
    assert validate_geometric(ok) == []
    assert mark_validated(ok).validated_geometric
    bad = cx1([0, F(2, 3), F(1, 3), 1], [[0, 1], [2, 3]], regular=False)
    v = validate_geometric(bad)
    assert len(v) == 1 and F(1, 3) <= v[0].witness[0] <= F(2, 3)
    assert validate_geometric(cx1([0, 1], [[0, 1]])) == []


def test_mesh_export():
    text = to_mesh(unit_cube(2))
    assert text.count("\nv ") == 4 and text.count("\nf ") == 2


def _random_blowups(cx, data, steps):
    for _ in range(steps):
        i, j = data.draw(st.sampled_from(cx.edges()))
        d0, d1 = den(cx.vertices[i]), den(cx.vertices[j])
        new, k = blow_up_edge(cx, i, j)
        assert den(new.vertices[k]) == d0 + d1
        cx = new
    return cx


@given(weighted_complexes(max_vertices=4))
def test_roundtrip_canonical(w):
    r = canonical_realization(w)
    r.check()
    back, _ = skeleton(r.geometric)
    assert is_isomorphic(back, w) is not None
    assert all(regular_oracle(r.geometric.simplex_points(s)) for s in r.geometric.maximal_simplexes)


@given(st.integers(1, 3), st.data())
def test_blowups_keep_regularity_and_support(n, data):
    start = unit_cube(n)
    cx = _random_blowups(start, data, data.draw(st.integers(1, 12)))
    for s in cx.maximal_simplexes:
        assert regular_oracle(cx.simplex_points(s))
    assert supports_equal(cx, start) is not Verdict.NO
    if n == 1:
        assert supports_equal(cx, start) is Verdict.YES


@given(weighted_complexes(max_vertices=5), st.data())
def test_delta_transform_commutes_with_skeleton(w, data):
    r = canonical_realization(w)
    options = [Identity()] + [DeleteMaximal(f) for f in sorted(w.maximal_faces, key=sorted)
                              if len(w.maximal_faces) > 1 or len(f) > 1]
    options += [Subdivide(sorted(e), "~n") for e in sorted(w.edges(), key=sorted)]
    s = data.draw(st.sampled_from(options))
    r2 = delta_transform(r, s)
    r2.check()
    assert is_isomorphic(skeleton(r2.geometric)[0], apply_step(w, s)) is not None


@given(st.data())
def test_descending_containment_after_deletion(data):
    cx = _random_blowups(unit_cube(1), data, 4)
    s = data.draw(st.sampled_from(sorted(cx.maximal_simplexes, key=sorted)))
    from stellar.regular import delete_simplex
    smaller, _ = delete_simplex(cx, s)
    assert complex_contains(cx, smaller).status is Verdict.YES
