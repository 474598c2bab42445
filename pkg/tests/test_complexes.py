import pytest
from hypothesis import given, strategies as st

from conftest import weighted_complexes
from stellar.complexes import (DeleteMaximal, Identity, InvalidStep, Subdivide, WeightedComplex,
                               apply_step, is_isomorphic, isomorphisms, validate)


def segment(w=1):
    return WeightedComplex.build([("v", w), ("w", w)], [["v", "w"]])


def test_validate_examples():
    assert validate(WeightedComplex.build([("a", 1)], [["a"]])) == []
    bad = validate(WeightedComplex.build([("a", 1), ("b", 1)], [["a"]]))
    assert [v.kind for v in bad] == ["uncovered-vertex"] and bad[0].witness == "b"
    bad = validate(WeightedComplex.build([("a", 0)], [["a"]]))
    assert any(v.kind == "weight" for v in bad)


def test_validate_nested_faces():
    w = WeightedComplex("ab", frozenset({frozenset("a"), frozenset("ab")}), {"a": 1, "b": 1})
    assert any(v.kind == "non-maximal-face" for v in validate(w))


def test_subdivide_segment():
    w = apply_step(segment(), Subdivide(["v", "w"], "a"))
    assert w.maximal_faces == {frozenset("va"), frozenset("aw")}
    assert w.weights["a"] == 2


def test_delete_segment():
    w = apply_step(segment(), DeleteMaximal(["v", "w"]))
    assert w.maximal_faces == {frozenset("v"), frozenset("w")}
    assert apply_step(segment(), Identity()) == segment()


def test_invalid_steps():
    with pytest.raises(InvalidStep, match="not a maximal face"):
        apply_step(segment(), DeleteMaximal(["v"]))
    with pytest.raises(InvalidStep, match="already in use"):
        apply_step(segment(), Subdivide(["v", "w"], "v"))
    with pytest.raises(InvalidStep, match="not a face"):
        apply_step(WeightedComplex.build([("v", 1), ("w", 1)], [["v"], ["w"]]), Subdivide(["v", "w"], "a"))
    with pytest.raises(InvalidStep, match="only remaining point"):
        apply_step(WeightedComplex.build([("v", 1)], [["v"]]), DeleteMaximal(["v"]))


def test_orphaned_vertex_removed():
    w = WeightedComplex.build([("v", 1), ("s", 3)], [["v"], ["s"]])
    out = apply_step(w, DeleteMaximal(["s"]))
    assert out.vertices == ("v",)
    assert validate(out) == []


def test_isomorphism_examples():
    w = WeightedComplex.build([("a", 1), ("b", 2), ("c", 1)], [["a", "b"], ["b", "c"]])
    relabeled = WeightedComplex.build([("x", 1), ("y", 2), ("z", 1)], [["x", "y"], ["y", "z"]])
    g = is_isomorphic(w, relabeled)
    assert g is not None and g["b"] == "y"
    heavier = WeightedComplex.build([("x", 2), ("y", 2), ("z", 1)], [["x", "y"], ["y", "z"]])
    assert is_isomorphic(w, heavier) is None
    assert is_isomorphic(w, WeightedComplex.build([("a", 1), ("b", 2), ("c", 1)], [["a", "b", "c"]])) is None


def _some_step(w, data):
    options = [Identity()] + [DeleteMaximal(f) for f in sorted(w.maximal_faces, key=sorted)
                              if len(w.maximal_faces) > 1]
    options += [Subdivide(sorted(e), "~new") for e in sorted(w.edges(), key=sorted)]
    return data.draw(st.sampled_from(options))


@given(weighted_complexes(), st.data())
def test_steps_preserve_validity(w, data):
    s = _some_step(w, data)
    out = apply_step(w, s)
    assert validate(out) == []
    if isinstance(s, Subdivide):
        assert len(out.vertices) == len(w.vertices) + 1
    if isinstance(s, DeleteMaximal):
        # the deleted set leaves the face family and nothing else does
        assert w.faces() - out.faces() == {s.face}


@given(weighted_complexes(), st.data())
def test_subdivide_matches_hand_built(w, data):
    edges = sorted(w.edges(), key=sorted)
    if not edges:
        return
    v, u = sorted(data.draw(st.sampled_from(edges)))
    out = apply_step(w, Subdivide([v, u], "~a"))
    faces = set()
    for f in w.maximal_faces:
        if {v, u} <= f:
            faces |= {(f - {u}) | {"~a"}, (f - {v}) | {"~a"}}
        else:
            faces.add(f)
    weights = dict(w.weights)
    weights["~a"] = w.weights[v] + w.weights[u]
    expected = WeightedComplex.build(weights, faces)
    assert is_isomorphic(out, expected) is not None


@given(weighted_complexes(), st.randoms(use_true_random=False))
def test_isomorphism_reflexive_symmetric(w, rnd):
    labels = list(w.vertices)
    shuffled = labels[:]
    rnd.shuffle(shuffled)
    ren = {a: "r" + b for a, b in zip(labels, shuffled)}
    w2 = WeightedComplex.build([(ren[v], w.weights[v]) for v in labels],
                               [[ren[x] for x in f] for f in w.maximal_faces])
    assert is_isomorphic(w, w) is not None
    g = is_isomorphic(w, w2)
    assert g is not None
    back = is_isomorphic(w2, w)
    assert back is not None
    inv = {b: a for a, b in g.items()}
    assert WeightedComplex.build([(inv[v], w2.weights[v]) for v in w2.vertices],
                                 [[inv[x] for x in f] for f in w2.maximal_faces]) == w


@given(weighted_complexes())
def test_weight_multiset_mismatch_rejected(w):
    v = w.vertices[0]
    bumped = dict(w.weights)
    bumped[v] += 1
    assert is_isomorphic(w, WeightedComplex.build(bumped, w.maximal_faces)) is None


def test_isomorphisms_enumerates_all():
    w = WeightedComplex.build([("a", 1), ("b", 1)], [["a", "b"]])
    assert len(list(isomorphisms(w, w))) == 2
