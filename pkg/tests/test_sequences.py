import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from builders import random_weighted
from oracles import convergents
from stellar.complexes import DeleteMaximal, InvalidStep, Subdivide, apply_step
from stellar.regular import (RegularComplex, Verdict, canonical_realization, complex_contains,
                             supports_equal)
from stellar.sequences import (EffrosShen, FiniteSteps, InsufficientDigits, LexZ2,
                               StellarSequence, confluent, constant_segment, family_sequence,
                               family_step, orbit)
from stellar.zhomeo import map_complex, transport


def line(*xs):
    return RegularComplex.build([[x] for x in xs], [[i, i + 1] for i in range(len(xs) - 1)])


def point(x):
    return RegularComplex.build([[x]], [[0]])


def interval(cx):
    xs = [cx.vertices[i][0] for i in cx.used_vertices()]
    return min(xs), max(xs)


def test_constant_orbit():
    o = orbit(constant_segment(), depth=5)
    cxs = o.complexes()
    assert len(cxs) == 6 and all(c.geometric_simplexes() == cxs[0].geometric_simplexes() for c in cxs)
    assert o.tail_start == 0


def test_finite_steps_keep_half_of_the_diagonal():
    seg = constant_segment().initial
    seq = StellarSequence(seg, FiniteSteps([Subdivide(["0", "1"], "m"), DeleteMaximal(["1", "m"])]))
    o = orbit(seq, depth=4)
    # the deleted edge leaves its endpoint behind as a maximal point
    assert o.complex(4).geometric_simplexes() == {frozenset({(F(1), F(0)), (F(1, 2), F(1, 2))}),
                                                  frozenset({(F(0), F(1))})}
    assert o.tail_start == 2
    seq = StellarSequence(seg, FiniteSteps(list(seq.provider.steps) + [DeleteMaximal(["1"])]))
    assert orbit(seq, depth=3).complex(3).geometric_simplexes() == {frozenset({(F(1), F(0)), (F(1, 2), F(1, 2))})}
    with pytest.raises(InvalidStep):
        StellarSequence(seg, FiniteSteps([DeleteMaximal(["0", "m"])]))


def test_effros_shen_rounds_follow_convergents():
    ones = [1] * 9
    conv = convergents(ones)
    o = orbit(family_sequence(EffrosShen(ones)), "default", depth=9)
    for k in range(4):
        lo, hi = interval(o.complex(3 * k))
        a, b = (F(*conv[k]), F(*conv[k + 1]))
        assert {lo, hi} == {a, b}
        assert {lo.denominator, hi.denominator} == {conv[k][1], conv[k + 1][1]}


def test_golden_first_round():
    seq = family_sequence(EffrosShen("golden"))
    o = orbit(seq, "default", depth=3)
    assert interval(o.complex(3)) == (F(1, 2), F(1))
    assert interval(orbit(seq, "default", depth=9).complex(9)) == (F(3, 5), F(2, 3))


def test_finite_digits_run_out():
    o = orbit(family_sequence(EffrosShen([1, 1, 1])), "default", depth=0)
    with pytest.raises(InvalidStep) as info:
        o.extend(30)
    assert isinstance(info.value.__cause__, InsufficientDigits)


def test_lexz2_steps():
    seq = family_sequence(LexZ2(2))
    w0 = seq.initial
    s1 = family_step(seq.provider, w0, 1)
    assert s1 == Subdivide(["0", "1"], "~1")
    w1 = apply_step(w0, s1)
    s2 = family_step(seq.provider, w1, 2)
    assert s2 == DeleteMaximal(["1", "~1"])
    w2 = apply_step(w1, s2)
    assert family_step(seq.provider, w2, 3) == DeleteMaximal(["1"])
    o = orbit(seq, depth=12)
    anchor = o.realizations[0].point("0")
    for k in range(4):
        assert o.complex(3 * k).contains_point(anchor)
        assert complex_contains(o.complex(3 * k), o.complex(3 * k + 3)).status is Verdict.YES
        assert supports_equal(o.complex(3 * k), o.complex(3 * k + 3)) is Verdict.NO


def test_confluent_examples():
    assert confluent([line(0, 1)], [line(0, 1)], 3, a_constant_from=0, b_constant_from=0).status == "certified"
    c = confluent([line(0, 1)], [point(F(1, 2))], 3, a_constant_from=0, b_constant_from=0)
    assert c.status == "refuted"
    es = orbit(family_sequence(EffrosShen("golden")), "default", depth=18).complexes()
    assert confluent(es, es[3:], 10).status == "consistent"
    assert confluent(es[3:], es, 10).status == "consistent"


def test_realization_independence():
    seg = constant_segment().initial
    seq = StellarSequence(seg, FiniteSteps([Subdivide(["0", "1"], "m"), Subdivide(["0", "m"], "n"),
                                            DeleteMaximal(["m", "n"])]))
    oa = orbit(seq, canonical_realization(seg, ["0", "1"]), 3)
    ob = orbit(seq, canonical_realization(seg, ["1", "0"]), 3)
    eta = transport(oa.realizations[0], ob.realizations[0], {"0": "0", "1": "1"})
    for i in range(4):
        assert map_complex(eta, oa.complex(i)).geometric_simplexes() == ob.complex(i).geometric_simplexes()


def random_steps(rng, w, count):
    steps = []
    for k in range(count):
        edges = w.edges()
        if edges and rng.random() < 0.6:
            s = Subdivide(sorted(rng.choice(edges)), f"s{k}")
        elif len(w.maximal_faces) > 1 or len(next(iter(w.maximal_faces))) > 1:
            s = DeleteMaximal(rng.choice(w.sorted_faces()))
        else:
            break
        steps.append(s)
        w = apply_step(w, s)
    return steps


@given(st.integers(0, 10 ** 6))
def test_orbit_supports_descend(seed):
    rng = random.Random(seed)
    w = random_weighted(rng, max_vertices=3)
    seq = StellarSequence(w, FiniteSteps(random_steps(rng, w, 5)))
    o = orbit(seq, depth=seq.tail_start())
    for i, step in enumerate(seq.provider.steps, start=1):
        prev, cur = o.realizations[i - 1], o.realizations[i]
        assert complex_contains(prev.geometric, cur.geometric).status is Verdict.YES
        if isinstance(step, DeleteMaximal):
            assert not cur.weighted.has_face(step.face)
            assert prev.weighted.maximal_faces - {step.face} <= cur.weighted.maximal_faces


@given(st.integers(0, 10 ** 6), st.integers(0, 4))
def test_confluent_symmetric_and_reflexive(seed, depth):
    rng = random.Random(seed)
    w = random_weighted(rng, max_vertices=3)
    sa = StellarSequence(w, FiniteSteps(random_steps(rng, w, 3)))
    sb = StellarSequence(w, FiniteSteps(random_steps(rng, w, 3)))
    A = orbit(sa, depth=sa.tail_start()).complexes()
    B = orbit(sb, depth=sb.tail_start()).complexes()
    ka, kb = sa.tail_start(), sb.tail_start()
    d = max(len(A), len(B), depth)
    ab = confluent(A, B, d, a_constant_from=ka, b_constant_from=kb)
    ba = confluent(B, A, d, a_constant_from=kb, b_constant_from=ka)
    assert ab.status == ba.status
    assert confluent(A, A, d, a_constant_from=ka, b_constant_from=ka).status == "certified"
    assert confluent(A, A, depth).status == "consistent"
