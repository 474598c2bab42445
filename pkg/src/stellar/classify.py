"""Property checkers for stellar sequences and isomorphism verifiers.

Limit-quantified properties are answered Yes/No only from an explicit tail
declaration, a built-in family certificate, or a re-checked witness.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import InvalidStep, WeightedComplex, isomorphisms
from .exactgeom import GeometryError, den
from .regular import RegularComplex, Realization, Verdict, box_complex, complex_contains, skeleton
from .sequences import (EffrosShen, InsufficientDigits, LexZ2, Orbit, StellarSequence, confluent, default_realization, orbit)
from .zhomeo import (NonIntegerInverse, NotInvertible, PLMap, Unknown, common_refinement,
                     apply_point, invert, map_complex, transport)

log = logging.getLogger(__name__)

PROPERTIES = ("finitely_presented", "spectrum_dim_le_1", "simplicial", "archimedean",
              "local", "embeds_in_R", "totally_ordered")

TAIL = "tail-declared"
FAMILY = "family-certificate"
WITNESS = "witness"
BOUND = "bound-exhausted"


@dataclass(frozen=True)
class PropertyResult:
    status: Verdict
    certificate_kind: str | None = None
    witness: object = None


@dataclass
class PropertyReport:
    results: dict = field(default_factory=dict)
    depth: int = 0

    def __getitem__(self, name: str) -> PropertyResult:
        return self.results[name]

    def status(self, name: str) -> Verdict:
        return self.results[name].status


def _reachable_orbit(seq: StellarSequence, r0: Realization, depth: int) -> Orbit:
    """Orbit extended as far as ``depth`` allows; stops early when a family runs out of digits."""
    o = orbit(seq, r0, 0)
    try:
        o.extend(depth)
    except InvalidStep as exc:
        if not isinstance(exc.__cause__, InsufficientDigits):
            raise
        log.info("orbit stops at index %d: %s", len(o.realizations) - 1, exc)
    return o


def _is_point(cx: RegularComplex) -> bool:
    return len(cx.used_vertices()) == 1


def _components(cx: RegularComplex) -> int:
    parent = {i: i for i in cx.used_vertices()}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in cx.maximal_simplexes:
        first, *rest = sorted(s)
        for j in rest:
            parent[find(j)] = find(first)
    return len({find(i) for i in parent})


def _lattice_points(cx: RegularComplex) -> int:
    # integer points of the support are vertices in any regular complex
    return sum(1 for i in cx.used_vertices() if den(cx.vertices[i]) == 1)


@dataclass(frozen=True)
class CoveringPair:
    first: RegularComplex
    second: RegularComplex
    coordinate: int
    cut: Fraction


def covering_pair(final: RegularComplex) -> CoveringPair:
    """Two rational boxes covering the cube, each missing part of ``final``.

    The cut is the Farey mediant of two distinct coordinate values, so it lies
    strictly between them.
    """
    pts = [final.vertices[i] for i in sorted(final.used_vertices())]
    for k in range(final.ambient_dim):
        vals = sorted({p[k] for p in pts})
        if len(vals) > 1:
            a, b = vals[0], vals[-1]
            cut = Fraction(a.numerator + b.numerator, a.denominator + b.denominator)
            n = final.ambient_dim
            lo, hi = [Fraction(0)] * n, [Fraction(1)] * n
            left = box_complex(lo, [cut if j == k else hi[j] for j in range(n)])
            right = box_complex([cut if j == k else lo[j] for j in range(n)], hi)
            return CoveringPair(left, right, k, cut)
    raise GeometryError("a single point cannot be split")


def verify_covering_pair(pair: CoveringPair, final: RegularComplex, max_blowups: int = 64) -> bool:
    """Union covers ``final`` and neither half contains it."""
    k, c = pair.coordinate, pair.cut
    # the two boxes split the cube along x_k = c, so their union is the whole cube
    covers = all(final.vertices[i][k] <= c or final.vertices[i][k] >= c for i in final.used_vertices())
    covers = covers and all(0 <= x <= 1 for i in final.used_vertices() for x in final.vertices[i])
    left = complex_contains(pair.first, final, max_blowups).status
    right = complex_contains(pair.second, final, max_blowups).status
    return covers and left is Verdict.NO and right is Verdict.NO


@dataclass(frozen=True)
class ArchimedeanWitness:
    polyhedron: RegularComplex
    limit_point: tuple
    checked_to: int


def _lexz2_witness(o: Orbit, depth: int, max_blowups: int) -> ArchimedeanWitness | None:
    r0 = o.realizations[0]
    anchor = r0.point(r0.weighted.vertices[0])
    P = RegularComplex(r0.geometric.ambient_dim, (anchor,), frozenset({frozenset({0})}), regular=True)
    cxs = o.complexes(depth)
    for cx in cxs:
        if not cx.contains_point(anchor):
            return None
        if complex_contains(P, cx, max_blowups).status is not Verdict.NO:
            return None
    return ArchimedeanWitness(P, anchor, len(cxs) - 1)


def _diameters_shrink(o: Orbit) -> bool:
    """Successive round supports are strictly nested intervals (checked on the computed prefix)."""
    ends = []
    for k in range(0, len(o.realizations), 3):
        cx = o.realizations[k].geometric
        xs = [cx.vertices[i][0] for i in cx.used_vertices()]
        ends.append((min(xs), max(xs)))
    return all(a1 >= a0 and b1 <= b0 and b1 - a1 < b0 - a0
               for (a0, b0), (a1, b1) in zip(ends, ends[1:]))


def classify(seq: StellarSequence, depth: int = 32, *, realization: Realization | None = None,
             max_blowups: int = 64) -> PropertyReport:
    r0 = realization or default_realization(seq)
    o = _reachable_orbit(seq, r0, depth)
    p = seq.provider
    tail = seq.tail_start()
    res: dict[str, PropertyResult] = {}
    unknown = PropertyResult(Verdict.UNKNOWN, BOUND)

    if tail is not None:
        o.extend(tail)
        fr = o.realizations[tail]
        fw, fcx = fr.weighted, fr.geometric
        sizes = [len(f) for f in fw.maximal_faces]
        res["finitely_presented"] = PropertyResult(Verdict.YES, TAIL, {"constant_from": tail})
        res["spectrum_dim_le_1"] = PropertyResult(Verdict.YES if max(sizes) <= 2 else Verdict.NO, TAIL,
                                                  {"constant_from": tail, "max_face_size": max(sizes)})
        res["simplicial"] = PropertyResult(Verdict.YES if max(sizes) == 1 else Verdict.NO, TAIL,
                                           {"constant_from": tail, "max_face_size": max(sizes)})
        # a constant orbit has the final support as its own zeroset
        res["archimedean"] = PropertyResult(Verdict.YES, TAIL, {"constant_from": tail, "support": fcx})
        if _is_point(fcx):
            pt = fcx.vertices[min(fcx.used_vertices())]
            res["local"] = PropertyResult(Verdict.YES, TAIL, {"point": pt})
            res["totally_ordered"] = PropertyResult(Verdict.YES, TAIL, {"point": pt})
        else:
            res["local"] = PropertyResult(Verdict.NO, TAIL, {"support": fcx})
            pair = covering_pair(fcx)
            if verify_covering_pair(pair, fcx, max_blowups):
                res["totally_ordered"] = PropertyResult(Verdict.NO, WITNESS, pair)
            else:
                res["totally_ordered"] = unknown
    elif isinstance(p, LexZ2):
        cert = {"family": "lex-z2", "n": p.n}
        res["finitely_presented"] = PropertyResult(Verdict.NO, FAMILY, cert)
        res["spectrum_dim_le_1"] = PropertyResult(Verdict.YES, FAMILY, cert)
        res["simplicial"] = PropertyResult(Verdict.NO, FAMILY, cert)
        w = _lexz2_witness(o, depth, max_blowups)
        res["archimedean"] = PropertyResult(Verdict.NO, WITNESS, w) if w else unknown
        res["local"] = PropertyResult(Verdict.YES, FAMILY, cert)
        res["totally_ordered"] = PropertyResult(Verdict.YES, FAMILY, cert)
    elif isinstance(p, EffrosShen):
        cert = {"family": "effros-shen", "cf": p.cf if isinstance(p.cf, str) else list(p.cf),
                "checked_to": len(o.realizations) - 1}
        res["finitely_presented"] = PropertyResult(Verdict.NO, FAMILY, cert)
        res["spectrum_dim_le_1"] = PropertyResult(Verdict.YES, FAMILY, cert)
        res["simplicial"] = PropertyResult(Verdict.NO, FAMILY, cert)
        res["archimedean"] = PropertyResult(Verdict.YES, FAMILY, cert)
        shrink = _diameters_shrink(o)
        res["local"] = PropertyResult(Verdict.YES, FAMILY, cert) if shrink else unknown
        res["totally_ordered"] = PropertyResult(Verdict.YES, FAMILY, cert) if shrink else unknown
    else:
        for name in PROPERTIES:
            res[name] = unknown

    arch, loc = res["archimedean"], res["local"]
    if arch.status is Verdict.YES and loc.status is Verdict.YES:
        kind = FAMILY if FAMILY in (arch.certificate_kind, loc.certificate_kind) else arch.certificate_kind
        res["embeds_in_R"] = PropertyResult(Verdict.YES, kind, {"archimedean": True, "local": True})
    elif Verdict.NO in (arch.status, loc.status):
        bad = "archimedean" if arch.status is Verdict.NO else "local"
        res["embeds_in_R"] = PropertyResult(Verdict.NO, res[bad].certificate_kind, {"fails": bad})
    else:
        res["embeds_in_R"] = unknown
    return PropertyReport({k: res[k] for k in PROPERTIES}, len(o.realizations) - 1)


# --- equivalence -------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceVerdict:
    status: str  # "certified" | "consistent" | "refuted"
    depth: int
    transport: PLMap | None = None
    pivot: tuple | None = None  # (i, j, gamma)
    witness: object = None


def _invariant_difference(a: RegularComplex, b: RegularComplex) -> dict | None:
    """An invariant of integral PL homeomorphism on which the supports differ."""
    for name, fn in (("dimension", RegularComplex.dimension), ("components", _components),
                     ("lattice_points", _lattice_points)):
        x, y = fn(a), fn(b)
        if x != y:
            return {"invariant": name, "a": x, "b": y}
    return None


def _candidate_maps(wa: WeightedComplex, wb: WeightedComplex, limit: int):
    """Isomorphisms ``wa -> wb``, the label-preserving one first when it qualifies."""
    same = {v: v for v in wa.vertices}
    if wa == wb:
        yield same
    for g in itertools.islice(isomorphisms(wa, wb), limit):
        if g != same or wa != wb:
            yield g


def check_equivalence(seqA: StellarSequence, seqB: StellarSequence, pivot: tuple | None = None,
                      depth: int = 32, *, rA: Realization | None = None, rB: Realization | None = None,
                      max_blowups: int = 64, max_isomorphisms: int = 720) -> EquivalenceVerdict:
    """Look for a pivot isomorphism whose transport makes the two orbits confluent.

    ``pivot`` is ``(i, j, gamma)`` (``gamma`` may be None to search) or ``(i,)``
    to fix A's index only.
    """
    oa = _reachable_orbit(seqA, rA or default_realization(seqA), depth)
    ob = _reachable_orbit(seqB, rB or default_realization(seqB), depth)
    ta, tb = seqA.tail_start(), seqB.tail_start()
    if ta is not None:
        oa.extend(ta)
    if tb is not None:
        ob.extend(tb)
    na, nb = len(oa.realizations) - 1, len(ob.realizations) - 1
    A = [r.geometric for r in oa.realizations]
    B = [r.geometric for r in ob.realizations]
    if A[0].ambient_dim != B[0].ambient_dim:
        log.debug("orbits live in cubes of dimension %d and %d", A[0].ambient_dim, B[0].ambient_dim)

    def pairs():
        if pivot is None:
            for i in range(na + 1):
                for j in range(nb + 1):
                    yield i, j, None
        elif len(pivot) == 1:
            for j in range(nb + 1):
                yield pivot[0], j, None
        else:
            yield pivot[0], pivot[1], (pivot[2] if len(pivot) > 2 else None)

    fallback = None
    tried = set()
    for i, j, gamma in pairs():
        if i > na or j > nb:
            raise ValueError(f"pivot ({i}, {j}) is beyond the computed orbits")
        ra, rb = oa.realizations[i], ob.realizations[j]
        key = (ra.weighted, rb.weighted, frozenset(A[i].geometric_simplexes()), frozenset(B[j].geometric_simplexes()),
               ta is not None and i >= ta, tb is not None and j >= tb)
        if gamma is None and key in tried:
            continue
        tried.add(key)
        maps = [gamma] if gamma is not None else _candidate_maps(ra.weighted, rb.weighted, max_isomorphisms)
        for g in maps:
            try:
                eta = transport(ra, rb, g)
            except GeometryError:
                continue
            images = [map_complex(eta, cx) for cx in A[i:]]
            ca = None if ta is None else max(ta - i, 0)
            cb = None if tb is None else max(tb - j, 0)
            conf = confluent(images, B[j:], max(len(images), len(B) - j), a_constant_from=ca,
                             b_constant_from=cb, max_blowups=max_blowups)
            if conf.status == "certified":
                try:
                    invert(eta)
                except (NonIntegerInverse, NotInvertible):
                    continue
                return EquivalenceVerdict("certified", depth, eta, (i, j, dict(g)))
            if conf.status == "consistent" and fallback is None:
                fallback = EquivalenceVerdict("consistent", depth, eta, (i, j, dict(g)))

    if fallback is not None:
        return fallback
    if ta is not None and tb is not None:
        diff = _invariant_difference(A[ta], B[tb])
        if diff is not None:
            return EquivalenceVerdict("refuted", depth, witness=diff)
    return EquivalenceVerdict("consistent", depth)


@dataclass(frozen=True)
class StrongEquivalence:
    weighted: WeightedComplex
    realization_a: Realization
    realization_b: Realization
    transport: PLMap


def strong_equivalence(seqA: StellarSequence, seqB: StellarSequence, depth: int = 32, *,
                       rA: Realization | None = None, rB: Realization | None = None,
                       max_blowups: int = 64) -> StrongEquivalence | Unknown:
    """A constant sequence confluent with both, built from a common refinement of the finals."""
    ta, tb = seqA.tail_start(), seqB.tail_start()
    if ta is None or tb is None:
        return Unknown("both sequences must be eventually constant")
    v = check_equivalence(seqA, seqB, None, max(depth, ta, tb), rA=rA, rB=rB, max_blowups=max_blowups)
    if v.status != "certified":
        return Unknown(f"equivalence is {v.status}, not certified")
    oa = orbit(seqA, rA or default_realization(seqA), ta)
    ob = orbit(seqB, rB or default_realization(seqB), tb)
    fa, fb = oa.complex(ta), ob.complex(tb)
    back = map_complex(invert(v.transport), fb)
    cx = common_refinement(fa, back, max_blowups)
    if isinstance(cx, Unknown):
        return cx
    w, ra = skeleton(cx)
    image = map_complex(v.transport, cx)
    vmap = {lbl: image.index_of(apply_point(v.transport, ra.point(lbl))) for lbl in w.vertices}
    rb = Realization(w, image, vmap)
    rb.check()
    return StrongEquivalence(w, ra, rb, v.transport)

