"""Integer piecewise-linear maps between regular complexes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import _lp
from .complexes import WeightedComplex
from .exactgeom import (GeometryError, NonIntegral, Point, apply_affine, den, format_point,
                        in_simplex, integer_affine_fit, is_regular, mediant, rational_rank, sq_dist)
from .regular import RegularComplex, Realization, blow_up_edge


class DenominatorMismatch(GeometryError):
    pass


class NotIsomorphism(GeometryError):
    pass


class OutsideDomain(GeometryError):
    pass


class DegenerateImage(GeometryError):
    pass


class NotInvertible(GeometryError):
    pass


class NonIntegerInverse(GeometryError):
    pass


class SupportMismatch(GeometryError):
    pass


@dataclass(frozen=True)
class Unknown:
    """Bounded search gave up; ``reason`` says which bound."""

    reason: str = "blow-up bound exhausted"


@dataclass(frozen=True, eq=False)
class PLMap:
    """Piecewise-affine map, one integer affine piece per maximal domain simplex."""

    domain: RegularComplex
    codomain_dim: int
    pieces: Mapping[frozenset, tuple]  # simplex -> (matrix, offset)

    def check(self) -> None:
        for s in self.domain.maximal_simplexes:
            if s not in self.pieces:
                raise GeometryError(f"no piece for simplex {sorted(s)}")
        for s, (mat, off) in self.pieces.items():
            if any(not isinstance(a, int) for row in mat for a in row) or any(not isinstance(b, int) for b in off):
                raise NonIntegral("pieces must have integer entries")
        # pieces agree on shared vertices (enough, pieces being affine)
        seen: dict[int, Point] = {}
        for s in sorted(self.pieces, key=sorted):
            mat, off = self.pieces[s]
            for i in s:
                y = apply_affine(mat, off, self.domain.vertices[i])
                if seen.setdefault(i, y) != y:
                    raise GeometryError(f"pieces disagree at vertex {format_point(self.domain.vertices[i])}")

    def vertex_image(self, i: int) -> Point:
        s = next(s for s in sorted(self.pieces, key=sorted) if i in s)
        mat, off = self.pieces[s]
        return apply_affine(mat, off, self.domain.vertices[i])

    def __call__(self, x):
        return apply_point(self, x)


def _piece(src: Sequence[Point], dst: Sequence[Point]):
    for p, q in zip(src, dst):
        if den(p) != den(q):
            raise DenominatorMismatch(f"den({format_point(p)}) != den({format_point(q)})")
    return integer_affine_fit(src, dst)


def transport_complexes(dom: RegularComplex, cod: RegularComplex, vertex_map: Mapping[int, int]) -> PLMap:
    """Barycentric transport along a vertex bijection that matches simplexes."""
    used = dom.used_vertices()
    if set(vertex_map) != used or set(vertex_map.values()) != cod.used_vertices() \
            or len(set(vertex_map.values())) != len(vertex_map):
        raise NotIsomorphism("vertex map is not a bijection between the vertex sets")
    image = frozenset(frozenset(vertex_map[i] for i in s) for s in dom.maximal_simplexes)
    if image != cod.maximal_simplexes:
        raise NotIsomorphism("vertex map does not carry simplexes onto simplexes")
    pieces = {}
    for s in dom.maximal_simplexes:
        idx = sorted(s)
        src = [dom.vertices[i] for i in idx]
        dst = [cod.vertices[vertex_map[i]] for i in idx]
        try:
            pieces[s] = _piece(src, dst)
        except NonIntegral as exc:  # only possible for non-regular input
            raise NotIsomorphism(str(exc)) from exc
    return PLMap(dom, cod.ambient_dim, pieces)


def _check_combinatorial(w1: WeightedComplex, w2: WeightedComplex, gamma: Mapping[str, str]) -> None:
    if set(gamma) != set(w1.vertices) or set(gamma.values()) != set(w2.vertices) \
            or len(set(gamma.values())) != len(gamma):
        raise NotIsomorphism("gamma is not a bijection of vertex sets")
    for v, t in gamma.items():
        if w1.weights[v] != w2.weights[t]:
            raise DenominatorMismatch(f"weight of {v} is {w1.weights[v]}, of {t} is {w2.weights[t]}")
    image = frozenset(frozenset(gamma[x] for x in f) for f in w1.maximal_faces)
    if image != w2.maximal_faces:
        raise NotIsomorphism("gamma does not preserve faces")


def transport(src: Realization, dst: Realization, gamma: Mapping[str, str]) -> PLMap:
    """The map of ``|src|`` onto ``|dst|`` sending ``src(v)`` to ``dst(gamma(v))``, linear per simplex."""
    _check_combinatorial(src.weighted, dst.weighted, gamma)
    vmap = {src.vertex_map[v]: dst.vertex_map[gamma[v]] for v in src.weighted.vertices}
    return transport_complexes(src.geometric, dst.geometric, vmap)


def apply_point(eta: PLMap, x: Sequence[Fraction]) -> Point:
    x = tuple(Fraction(c) for c in x)
    s = eta.domain.locate(x)
    if s is None:
        raise OutsideDomain(f"{format_point(x)} is outside the domain")
    mat, off = eta.pieces[s]
    return apply_affine(mat, off, x)


def image_complex(eta: PLMap) -> RegularComplex:
    """Images of the domain simplexes; vertex ``i`` of the result is the image of vertex ``i``."""
    dom = eta.domain
    verts = []
    for i in range(len(dom.vertices)):
        if i in dom.used_vertices():
            verts.append(eta.vertex_image(i))
        else:
            verts.append(None)
    used = [v for v in verts if v is not None]
    if len(set(used)) != len(used):
        raise DegenerateImage("two vertices have the same image")
    if any(c < 0 or c > 1 for v in used for c in v):
        raise GeometryError("image leaves the unit cube")
    for s in dom.maximal_simplexes:
        pts = [verts[i] for i in sorted(s)]
        if rational_rank([p + (1,) for p in pts]) != len(pts):
            raise DegenerateImage(f"piece on {sorted(s)} is not injective")
        if not is_regular(pts):
            raise GeometryError(f"image simplex {[format_point(p) for p in pts]} is not regular")
    if len(used) == len(verts):
        return RegularComplex(eta.codomain_dim, tuple(verts), dom.maximal_simplexes)
    keep = [i for i, v in enumerate(verts) if v is not None]
    remap = {old: new for new, old in enumerate(keep)}
    simps = frozenset(frozenset(remap[i] for i in s) for s in dom.maximal_simplexes)
    return RegularComplex(eta.codomain_dim, tuple(verts[i] for i in keep), simps)


def invert(eta: PLMap) -> PLMap:
    """Inverse map on the image complex; every piece must be integral."""
    dom = eta.domain
    img = image_complex(eta)
    vmap = {}
    for i in dom.used_vertices():
        vmap[img.index_of(eta.vertex_image(i))] = i
    pieces = {}
    for s in dom.maximal_simplexes:
        idx = sorted(s)
        src = [eta.vertex_image(i) for i in idx]
        dst = [dom.vertices[i] for i in idx]
        try:
            pieces[frozenset(img.index_of(p) for p in src)] = _piece(src, dst)
        except (DenominatorMismatch, NonIntegral) as exc:
            raise NonIntegerInverse(str(exc)) from exc
    if len(pieces) != len(dom.maximal_simplexes):
        raise NotInvertible("distinct simplexes share an image")
    return PLMap(img, dom.ambient_dim, pieces)


def compose(outer: PLMap, inner: PLMap) -> Callable[[Sequence[Fraction]], Point]:
    return lambda x: apply_point(outer, apply_point(inner, x))


# --- refinement --------------------------------------------------------------


def _meets_relint(S: list[Point], D: list[Point]) -> bool:
    """Does simplex D contain a point of the relative interior of S?"""
    if len(S) == 1:
        return in_simplex(D, S[0])
    n = len(S[0])
    ns, nd = len(S), len(D)
    # variables: lambda (ns), mu (nd), t, slack (ns) with lambda_i - t - slack_i = 0
    nv = ns + nd + 1 + ns
    A, b = [], []
    for i in range(n):
        A.append([S[k][i] for k in range(ns)] + [-D[k][i] for k in range(nd)] + [0] + [0] * ns)
        b.append(0)
    A.append([1] * ns + [0] * nd + [0] + [0] * ns)
    b.append(1)
    A.append([0] * ns + [1] * nd + [0] + [0] * ns)
    b.append(1)
    for k in range(ns):
        row = [0] * nv
        row[k] = 1
        row[ns + nd] = -1
        row[ns + nd + 1 + k] = -1
        A.append(row)
        b.append(0)
    c = [0] * (ns + nd) + [1] + [0] * ns
    try:
        val, _ = _lp.lp_max(c, A, b)
    except _lp.Infeasible:
        return False
    return val > 0


def _linear_on(eta: PLMap, S: list[Point], values: list[Point]) -> bool:
    dom = eta.domain
    homes = [frozenset(s for s in dom.maximal_simplexes if in_simplex(dom.simplex_points(s), p)) for p in S]
    if frozenset.intersection(*homes):
        return True
    if dom.ambient_dim == 1:
        lo, hi = min(p[0] for p in S), max(p[0] for p in S)
        if lo == hi:
            return True
        f_lo, f_hi = (values[0], values[1]) if S[0][0] == lo else (values[1], values[0])
        for i in dom.used_vertices():
            c = dom.vertices[i][0]
            if lo < c < hi:
                t = (c - lo) / (hi - lo)
                interp = tuple(a + t * (b - a) for a, b in zip(f_lo, f_hi))
                if apply_point(eta, (c,)) != interp:
                    return False
        return True
    for s in sorted(dom.maximal_simplexes, key=sorted):
        D = dom.simplex_points(s)
        if _meets_relint(S, D):
            mat, off = eta.pieces[s]
            if any(apply_affine(mat, off, p) != v for p, v in zip(S, values)):
                return False
    return True


def refine(cx: RegularComplex, needs_split: Callable[[list[Point]], tuple[int, int] | None],
           max_blowups: int) -> RegularComplex | Unknown:
    """Farey-blow up ``cx`` until ``needs_split`` accepts every maximal simplex.

    ``needs_split`` gets the simplex's vertices and returns a pair of positions
    whose edge should be split, or None.
    """
    done: set[frozenset] = set()
    used = 0
    while True:
        todo = None
        for s in sorted(cx.maximal_simplexes, key=sorted):
            key = frozenset(cx.vertices[i] for i in s)
            if key in done:
                continue
            idx = sorted(s)
            pts = [cx.vertices[i] for i in idx]
            e = needs_split(pts)
            if e is None:
                done.add(key)
                continue
            todo = (idx[e[0]], idx[e[1]])
            break
        if todo is None:
            return cx
        if used >= max_blowups:
            return Unknown(f"more than {max_blowups} blow-ups needed")
        cx, _ = blow_up_edge(cx, *todo)
        used += 1


def _split_edge(S: list[Point], probe: Callable[[Point, int, int], bool] | None = None) -> tuple[int, int]:
    pairs = list(itertools.combinations(range(len(S)), 2))
    if probe is not None:
        for a, b in pairs:
            if probe(mediant(S[a], S[b]), a, b):
                return a, b
    return max(pairs, key=lambda ab: (sq_dist(S[ab[0]], S[ab[1]]), -ab[0], -ab[1]))


def linearize(cx: RegularComplex, eta: PLMap, max_blowups: int = 64) -> RegularComplex | Unknown:
    """Subdivide ``cx`` by Farey blow-ups until ``eta`` is linear on each simplex."""
    dom = eta.domain
    for s in cx.maximal_simplexes:
        for p in cx.simplex_points(s):
            if not dom.contains_point(p):
                raise SupportMismatch(f"{format_point(p)} is outside the map's domain")

    def needs_split(S):
        values = [apply_point(eta, p) for p in S]
        if _linear_on(eta, S, values):
            return None

        def off_line(m, a, b):
            # barycentric weights of the mediant are den(a), den(b) normalised
            da, db = den(S[a]), den(S[b])
            interp = tuple((da * x + db * y) / (da + db) for x, y in zip(values[a], values[b]))
            return apply_point(eta, m) != interp
        return _split_edge(S, off_line)

    return refine(cx, needs_split, max_blowups)


def common_refinement(cx: RegularComplex, other: RegularComplex, max_blowups: int = 64) -> RegularComplex | Unknown:
    """Subdivide ``cx`` until every simplex sits inside a single simplex of ``other``."""
    simps = [other.simplex_points(s) for s in sorted(other.maximal_simplexes, key=sorted)]
    verts = {other.vertices[i] for i in other.used_vertices()}

    def needs_split(S):
        homes = [frozenset(k for k, D in enumerate(simps) if in_simplex(D, p)) for p in S]
        if any(not h for h in homes):
            raise SupportMismatch(f"{format_point(S[0])}... leaves the other support")
        if frozenset.intersection(*homes):
            return None
        return _split_edge(S, lambda m, a, b: m in verts)

    return refine(cx, needs_split, max_blowups)


def map_complex(eta: PLMap, cx: RegularComplex) -> RegularComplex:
    """Image of ``cx`` under ``eta``; each simplex of ``cx`` must lie in one domain simplex."""
    dom = eta.domain
    order = sorted(dom.maximal_simplexes, key=sorted)
    verts: list[Point] = []
    index: dict[Point, int] = {}
    simps = set()
    for s in sorted(cx.maximal_simplexes, key=sorted):
        pts = cx.simplex_points(s)
        home = next((d for d in order if all(in_simplex(dom.simplex_points(d), p) for p in pts)), None)
        if home is None:
            raise SupportMismatch("simplex is not inside a single linear piece of the map")
        mat, off = eta.pieces[home]
        ids = []
        for p in pts:
            q = apply_affine(mat, off, p)
            if q not in index:
                index[q] = len(verts)
                verts.append(q)
            ids.append(index[q])
        if len(set(ids)) != len(ids):
            raise DegenerateImage("map collapses a simplex")
        simps.add(frozenset(ids))
    return RegularComplex(eta.codomain_dim, tuple(verts), frozenset(simps), cx.regular)
