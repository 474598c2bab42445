"""Regular rational complexes in the unit cube and their realizations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _lp
from .complexes import (DeleteMaximal, Identity, InvalidStep, StellarStep, Subdivide,
                        WeightedComplex, apply_step, check_step, validate)
from .exactgeom import (GeometryError, Point, RationalSimplex, SimplexLocator, den, format_point,
                        homogeneous, is_regular, locator, make_point, mediant, sq_dist)


class NotRegular(GeometryError):
    pass


class PointOutsideSupport(GeometryError):
    pass


class NotFareyMediant(GeometryError):
    pass


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Containment:
    status: Verdict
    witness: Point | None = None
    blowups: int = 0

    def __bool__(self):
        return self.status is Verdict.YES


@dataclass(frozen=True, eq=False)
class RegularComplex:
    """Finite face-closed family of rational simplexes, stored by maximal simplexes.

    ``regular=False`` marks a plain rational complex (used for auxiliary
    polyhedra); every complex produced by the stellar machinery is regular.
    """

    ambient_dim: int
    vertices: tuple
    maximal_simplexes: frozenset
    regular: bool = True
    validated_geometric: bool = False
    _index: dict = field(default=None, repr=False, compare=False)
    _locators: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def build(cls, vertices: Iterable, maximal_simplexes: Iterable[Iterable[int]], *,
              ambient_dim: int | None = None, regular: bool = True, check: bool = True) -> "RegularComplex":
        verts = tuple(make_point(v) for v in vertices)
        if ambient_dim is None:
            if not verts:
                raise GeometryError("ambient_dim required for an empty complex")
            ambient_dim = len(verts[0])
        simp = frozenset(frozenset(int(i) for i in s) for s in maximal_simplexes)
        cx = cls(ambient_dim, verts, simp, regular)
        if check:
            cx.check()
        return cx

    def check(self) -> None:
        n = self.ambient_dim
        if n < 1:
            raise GeometryError("ambient dimension must be positive")
        if len(self._index) != len(self.vertices):
            raise GeometryError("repeated vertex in vertex table")
        for v in self.vertices:
            if len(v) != n:
                raise GeometryError(f"vertex {format_point(v)} is not in dimension {n}")
            if any(c < 0 or c > 1 for c in v):
                raise GeometryError(f"vertex {format_point(v)} outside the unit cube")
        for s in self.maximal_simplexes:
            if not s or any(i < 0 or i >= len(self.vertices) for i in s):
                raise GeometryError(f"bad simplex index set {sorted(s)}")
            for t in self.maximal_simplexes:
                if s < t:
                    raise GeometryError(f"simplex {sorted(s)} is not maximal")
            pts = [self.vertices[i] for i in sorted(s)]
            RationalSimplex(pts)  # affine independence
            if self.regular and not is_regular(pts):
                raise NotRegular(f"simplex {[format_point(p) for p in pts]} is not regular")

    # -- queries ---------------------------------------------------------

    def index_of(self, p: Point) -> int | None:
        return self._index.get(tuple(p))

    def used_vertices(self) -> set[int]:
        return set().union(*self.maximal_simplexes) if self.maximal_simplexes else set()

    def simplex_points(self, s: Iterable[int]) -> list[Point]:
        return [self.vertices[i] for i in sorted(s)]

    def sorted_simplexes(self) -> list[list[int]]:
        return sorted(sorted(s) for s in self.maximal_simplexes)

    def faces(self) -> set[frozenset]:
        out = set()
        for s in self.maximal_simplexes:
            items = sorted(s)
            for k in range(1, len(items) + 1):
                out.update(frozenset(c) for c in itertools.combinations(items, k))
        return out

    def edges(self) -> list[tuple[int, int]]:
        es = set()
        for s in self.maximal_simplexes:
            es.update(itertools.combinations(sorted(s), 2))
        return sorted(es)

    def dimension(self) -> int:
        return max((len(s) for s in self.maximal_simplexes), default=0) - 1

    def contains_point(self, x: Sequence[Fraction]) -> bool:
        x = tuple(x)
        if x in self._index and self._index[x] in self.used_vertices():
            return True
        xh = homogeneous(x)
        return any(loc.contains(x, xh) for _, loc in self.locators())

    def locate(self, x: Sequence[Fraction]) -> frozenset | None:
        """Some maximal simplex containing ``x`` (deterministic choice)."""
        xh = homogeneous(x)
        for s, loc in self.locators():
            if loc.contains(x, xh):
                return s
        return None

    def locators(self) -> list[tuple[frozenset, SimplexLocator]]:
        """Maximal simplexes in sorted order with their point locators (computed once)."""
        if self._locators is None:
            out = [(s, locator(tuple(self.simplex_points(s)))) for s in sorted(self.maximal_simplexes, key=sorted)]
            object.__setattr__(self, "_locators", out)
        return self._locators

    def __eq__(self, other):
        if not isinstance(other, RegularComplex):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.geometric_simplexes() == other.geometric_simplexes())

    def __hash__(self):
        return hash((self.ambient_dim, frozenset(self.geometric_simplexes())))

    def geometric_simplexes(self) -> set[frozenset]:
        return {frozenset(self.vertices[i] for i in s) for s in self.maximal_simplexes}

    def __repr__(self):
        simps = [[format_point(self.vertices[i]) for i in sorted(s)] for s in self.maximal_simplexes]
        return f"RegularComplex(dim={self.ambient_dim}, {sorted(simps)})"


# --- constructions -----------------------------------------------------------


def unit_cube(n: int) -> RegularComplex:
    """Standard (Kuhn) unimodular triangulation of [0,1]^n."""
    return box_complex([Fraction(0)] * n, [Fraction(1)] * n, regular=True)


def box_complex(lo: Sequence, hi: Sequence, *, regular: bool = False) -> RegularComplex:
    """Kuhn triangulation of the box ``prod [lo_i, hi_i]`` (degenerate sides allowed)."""
    lo = [Fraction(x) for x in lo]
    hi = [Fraction(x) for x in hi]
    n = len(lo)
    free = [i for i in range(n) if hi[i] > lo[i]]
    verts: list[Point] = []
    index: dict = {}

    def vid(p):
        if p not in index:
            index[p] = len(verts)
            verts.append(p)
        return index[p]

    simplexes = []
    for perm in itertools.permutations(free):
        cur = list(lo)
        s = [vid(tuple(cur))]
        for i in perm:
            cur[i] = hi[i]
            s.append(vid(tuple(cur)))
        simplexes.append(s)
    return RegularComplex.build(verts, simplexes, ambient_dim=n, regular=regular)


def compact(cx: RegularComplex) -> tuple[RegularComplex, dict[int, int]]:
    """Drop vertices used by no simplex; returns the complex and old->new indices."""
    used = sorted(cx.used_vertices())
    remap = {old: new for new, old in enumerate(used)}
    verts = tuple(cx.vertices[i] for i in used)
    simps = frozenset(frozenset(remap[i] for i in s) for s in cx.maximal_simplexes)
    return RegularComplex(cx.ambient_dim, verts, simps, cx.regular), remap


def farey_mediant(edge: RationalSimplex | Sequence[Point]) -> Point:
    """Farey mediant of a regular 1-simplex."""
    verts = edge.vertices if isinstance(edge, RationalSimplex) else tuple(tuple(v) for v in edge)
    if len(verts) != 2:
        raise GeometryError("Farey mediants are defined for 1-simplexes")
    if not is_regular(verts):
        raise NotRegular(f"edge {[format_point(v) for v in verts]} is not regular")
    return mediant(*verts)


def blow_up_edge(cx: RegularComplex, i: int, j: int) -> tuple[RegularComplex, int]:
    """Binary Farey blow-up at the mediant of the edge ``{i, j}``.

    Returns the new complex and the index of the new vertex (appended last).
    """
    e = frozenset((i, j))
    if len(e) != 2 or not any(e <= s for s in cx.maximal_simplexes):
        raise GeometryError(f"{sorted(e)} is not an edge of the complex")
    p = farey_mediant([cx.vertices[i], cx.vertices[j]])
    k = len(cx.vertices)
    simps = set()
    for s in cx.maximal_simplexes:
        if e <= s:
            simps.add((s - {j}) | {k})
            simps.add((s - {i}) | {k})
        else:
            simps.add(s)
    new = RegularComplex(cx.ambient_dim, cx.vertices + (p,), frozenset(simps), cx.regular)
    return new, k


def blow_up(cx: RegularComplex, p: Sequence[Fraction]) -> RegularComplex:
    """Blow up at ``p``, which must be the Farey mediant of an edge."""
    p = tuple(Fraction(c) for c in p)
    for i, j in cx.edges():
        if mediant(cx.vertices[i], cx.vertices[j]) == p:
            return blow_up_edge(cx, i, j)[0]
    if not cx.contains_point(p):
        raise PointOutsideSupport(f"{format_point(p)} is not in the support")
    raise NotFareyMediant(f"{format_point(p)} is not the Farey mediant of an edge")


def delete_simplex(cx: RegularComplex, s: Iterable[int]) -> tuple[RegularComplex, dict[int, int]]:
    """Remove a maximal simplex, keeping its proper faces; compacts unused vertices."""
    s = frozenset(s)
    if s not in cx.maximal_simplexes:
        raise GeometryError(f"{sorted(s)} is not a maximal simplex")
    rest = set(cx.maximal_simplexes - {s})
    for x in s:
        facet = s - {x}
        if facet and not any(facet <= t for t in rest):
            rest.add(facet)
    rest = {t for t in rest if not any(t < u for u in rest)}
    return compact(RegularComplex(cx.ambient_dim, cx.vertices, frozenset(rest), cx.regular))


def subcomplex(cx: RegularComplex, simplexes: Iterable[Iterable[int]]) -> RegularComplex:
    """Complex generated by the given faces of ``cx`` (compacted)."""
    fs = {frozenset(s) for s in simplexes}
    fs = {t for t in fs if not any(t < u for u in fs)}
    out, _ = compact(RegularComplex(cx.ambient_dim, cx.vertices, frozenset(fs), cx.regular))
    return out


# --- realizations ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Realization:
    """Identification of a weighted complex with the skeleton of a regular complex."""

    weighted: WeightedComplex
    geometric: RegularComplex
    vertex_map: Mapping[str, int]

    def point(self, label: str) -> Point:
        return self.geometric.vertices[self.vertex_map[label]]

    def check(self) -> None:
        w, g, iota = self.weighted, self.geometric, self.vertex_map
        if set(iota) != set(w.vertices):
            raise GeometryError("realization map must cover exactly the vertex labels")
        if len(set(iota.values())) != len(iota):
            raise GeometryError("realization map is not injective")
        if set(iota.values()) != g.used_vertices():
            raise GeometryError("realization map must hit every vertex of the complex")
        for v in w.vertices:
            if den(self.point(v)) != w.weights[v]:
                raise GeometryError(f"den of the image of {v} differs from its weight")
        image = frozenset(frozenset(iota[x] for x in f) for f in w.maximal_faces)
        if image != g.maximal_simplexes:
            raise GeometryError("faces do not correspond to simplexes")


def skeleton(cx: RegularComplex) -> tuple[WeightedComplex, Realization]:
    """Skeleton with fresh labels ``v<i>`` and its trivial realization."""
    used = sorted(cx.used_vertices())
    labels = {i: f"v{i}" for i in used}
    weights = [(labels[i], den(cx.vertices[i])) for i in used]
    faces = [[labels[i] for i in s] for s in cx.maximal_simplexes]
    w = WeightedComplex.build(weights, faces)
    return w, Realization(w, cx, {labels[i]: i for i in used})


def canonical_realization(w: WeightedComplex, vertex_order: Sequence[str] | None = None) -> Realization:
    """Vertex ``v_i`` goes to ``e_i / weight(v_i)``; default order is lexicographic."""
    problems = validate(w)
    if problems:
        raise GeometryError("; ".join(p.message for p in problems))
    order = list(vertex_order) if vertex_order is not None else sorted(w.vertices)
    if sorted(order) != sorted(w.vertices):
        raise GeometryError("vertex_order must be a permutation of the vertices")
    n = len(order)
    verts = []
    for i, v in enumerate(order):
        p = [Fraction(0)] * n
        p[i] = Fraction(1, w.weights[v])
        verts.append(tuple(p))
    idx = {v: i for i, v in enumerate(order)}
    simps = frozenset(frozenset(idx[x] for x in f) for f in w.maximal_faces)
    g = RegularComplex(n, tuple(verts), simps)
    return Realization(w, g, idx)


def delta_transform(r: Realization, s: StellarStep) -> Realization:
    """Carry a stellar step on the weighted complex over to its realization."""
    check_step(r.weighted, s)
    if isinstance(s, Identity):
        return r
    w2 = apply_step(r.weighted, s)
    if isinstance(s, DeleteMaximal):
        g2, remap = delete_simplex(r.geometric, (r.vertex_map[x] for x in s.face))
        iota = {v: remap[r.vertex_map[v]] for v in w2.vertices}
        return Realization(w2, g2, iota)
    if isinstance(s, Subdivide):
        a, b = s.edge
        g2, k = blow_up_edge(r.geometric, r.vertex_map[a], r.vertex_map[b])
        iota = dict(r.vertex_map)
        iota[s.new_label] = k
        return Realization(w2, g2, iota)
    raise InvalidStep(f"unknown step {s!r}")


# --- support containment -------------------------------------------------------


def _intervals(cx: RegularComplex) -> list[tuple[Fraction, Fraction]]:
    """Support of a 1-dimensional complex as sorted disjoint closed intervals."""
    raw = sorted((min(cx.vertices[i][0] for i in s), max(cx.vertices[i][0] for i in s))
                 for s in cx.maximal_simplexes)
    merged: list[list[Fraction]] = []
    for a, b in raw:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def _interval_contains(cx: RegularComplex, lo: Fraction, hi: Fraction) -> Containment:
    ivs = _intervals(cx)
    for a, b in ivs:
        if a <= lo and hi <= b:
            return Containment(Verdict.YES)
    # find a point of [lo, hi] outside every interval
    if not any(a <= lo <= b for a, b in ivs):
        return Containment(Verdict.NO, (lo,))
    start = next(b for a, b in ivs if a <= lo <= b)
    nxt = min((a for a, _ in ivs if a > start), default=None)
    if nxt is None or nxt > hi:
        return Containment(Verdict.NO, (hi,))
    return Containment(Verdict.NO, ((start + nxt) / 2,))


def support_contains(cx: RegularComplex, simplex: RationalSimplex | Sequence[Point],
                     max_blowups: int = 64) -> Containment:
    """Decide whether a rational simplex lies inside the support of ``cx``.

    Pieces are split at mediants of their edges until each fits in a single
    simplex of ``cx``. Exact and complete in ambient dimension 1.
    """
    verts = simplex.vertices if isinstance(simplex, RationalSimplex) else [tuple(v) for v in simplex]
    verts = [tuple(Fraction(c) for c in v) for v in verts]
    if any(len(v) != cx.ambient_dim for v in verts):
        raise GeometryError("ambient dimensions differ")
    if not cx.maximal_simplexes:
        return Containment(Verdict.NO, verts[0])
    if cx.ambient_dim == 1:
        xs = [v[0] for v in verts]
        return _interval_contains(cx, min(xs), max(xs))
    locs = [loc for _, loc in cx.locators()]
    vertex_set = set(cx.vertices[i] for i in cx.used_vertices())
    membership: dict = {}

    def homes(p):
        if p not in membership:
            ph = homogeneous(p)
            membership[p] = frozenset(k for k, loc in enumerate(locs) if loc.contains(p, ph))
        return membership[p]

    budget = [max_blowups]
    witness: list = []

    def aligned(piece):
        return all(p in vertex_set for p in piece)

    def cover(piece):
        # YES, NO (witness recorded) or UNKNOWN for this piece
        sets = [homes(p) for p in piece]
        for p, h in zip(piece, sets):
            if not h:
                witness.append(p)
                return Verdict.NO
        if frozenset.intersection(*sets):
            return Verdict.YES
        if len(piece) > 1:
            bary = tuple(sum(c) / len(piece) for c in zip(*piece))
            if not homes(bary):
                witness.append(bary)
                return Verdict.NO
        if len(piece) == 1:
            return Verdict.UNKNOWN
        pairs = list(itertools.combinations(range(len(piece)), 2))
        hits = [(a, b) for a, b in pairs if mediant(piece[a], piece[b]) in vertex_set]
        if hits:
            # blow-ups of different edges do not commute, so try each order
            hits.sort(key=lambda ab: (den(mediant(piece[ab[0]], piece[ab[1]])), ab))
            choices = hits
        elif aligned(piece):
            # a piece spanned by vertices of cx that no blow-up touched is a dead end
            return Verdict.UNKNOWN
        else:
            choices = [max(pairs, key=lambda ab: (sq_dist(piece[ab[0]], piece[ab[1]]), -ab[0], -ab[1]))]
        for a, b in choices:
            if budget[0] <= 0:
                return Verdict.UNKNOWN
            budget[0] -= 1
            m = mediant(piece[a], piece[b])
            outcome = Verdict.YES
            for child in ([m if k == b else p for k, p in enumerate(piece)],
                          [m if k == a else p for k, p in enumerate(piece)]):
                outcome = cover(child)
                if outcome is not Verdict.YES:
                    break
            if outcome is not Verdict.UNKNOWN:
                return outcome
        return Verdict.UNKNOWN

    verdict = cover(verts)
    used = max_blowups - budget[0]
    return Containment(verdict, witness[0] if witness else None, used)


def complex_contains(outer: RegularComplex, inner: RegularComplex, max_blowups: int = 64) -> Containment:
    """Is ``|inner|`` a subset of ``|outer|``? Budget is per maximal simplex."""
    if outer.ambient_dim != inner.ambient_dim:
        raise GeometryError("ambient dimensions differ")
    unknown = None
    for s in sorted(inner.maximal_simplexes, key=sorted):
        res = support_contains(outer, inner.simplex_points(s), max_blowups)
        if res.status is Verdict.NO:
            return res
        if res.status is Verdict.UNKNOWN:
            unknown = res
    return unknown or Containment(Verdict.YES)


def supports_equal(a: RegularComplex, b: RegularComplex, max_blowups: int = 64) -> Verdict:
    x = complex_contains(a, b, max_blowups).status
    y = complex_contains(b, a, max_blowups).status
    if Verdict.NO in (x, y):
        return Verdict.NO
    if Verdict.UNKNOWN in (x, y):
        return Verdict.UNKNOWN
    return Verdict.YES


# --- geometric validation ----------------------------------------------------


@dataclass(frozen=True)
class Overlap:
    first: tuple
    second: tuple
    witness: Point


def _improper_point(S: list[Point], T: list[Point]) -> Point | None:
    """A point of conv(S) ∩ conv(T) outside conv(S ∩ T), or None."""
    common = set(S) & set(T)
    n = len(S[0])
    ns, nt = len(S), len(T)
    c = [0 if p in common else 1 for p in S] + [0 if p in common else 1 for p in T]
    A = [[S[k][i] for k in range(ns)] + [-T[k][i] for k in range(nt)] for i in range(n)]
    A.append([1] * ns + [0] * nt)
    A.append([0] * ns + [1] * nt)
    b = [0] * n + [1, 1]
    try:
        val, x = _lp.lp_max(c, A, b)
    except _lp.Infeasible:
        return None
    if val == 0:
        return None
    return tuple(sum(x[k] * S[k][i] for k in range(ns)) for i in range(n))


def validate_geometric(cx: RegularComplex) -> list[Overlap]:
    """Pairs of maximal simplexes meeting in something other than a common face."""
    simps = sorted(cx.maximal_simplexes, key=sorted)
    out = []
    for s, t in itertools.combinations(simps, 2):
        p = _improper_point(cx.simplex_points(s), cx.simplex_points(t))
        if p is not None:
            out.append(Overlap(tuple(sorted(s)), tuple(sorted(t)), p))
    return out


def mark_validated(cx: RegularComplex) -> RegularComplex:
    """Copy of ``cx`` flagged as geometrically validated; raises on overlaps."""
    bad = validate_geometric(cx)
    if bad:
        raise GeometryError(f"simplexes {bad[0].first} and {bad[0].second} overlap improperly")
    return replace(cx, validated_geometric=True)


# --- export ------------------------------------------------------------------


def to_mesh(cx: RegularComplex) -> str:
    """Wavefront-style text mesh (decimal coordinates, 1-based indices). Lossy."""
    if cx.ambient_dim > 3:
        raise GeometryError("mesh export supports ambient dimension <= 3")
    lines = [f"# {len(cx.vertices)} vertices, {len(cx.maximal_simplexes)} maximal simplexes"]
    for v in cx.vertices:
        coords = [float(c) for c in v] + [0.0] * (3 - len(v))
        lines.append("v " + " ".join(f"{c:.12g}" for c in coords))
    for s in cx.sorted_simplexes():
        ids = [i + 1 for i in s]
        if len(ids) == 1:
            lines.append(f"p {ids[0]}")
        elif len(ids) == 2:
            lines.append(f"l {ids[0]} {ids[1]}")
        elif len(ids) == 3:
            lines.append("f " + " ".join(map(str, ids)))
        else:
            for tri in itertools.combinations(ids, 3):
                lines.append("f " + " ".join(map(str, tri)))
    return "\n".join(lines) + "\n"
