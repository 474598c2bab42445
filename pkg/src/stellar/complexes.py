"""Weighted abstract simplicial complexes and stellar transformations.

Faces are stored as maximal faces only; the downward closure is derived.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, NamedTuple, Sequence

log = logging.getLogger(__name__)

#: prefix for labels generated by the library
RESERVED_PREFIX = "~"


class InvalidStep(ValueError):
    pass


class Violation(NamedTuple):
    kind: str
    witness: object
    message: str


@dataclass(frozen=True, eq=False)
class WeightedComplex:
    """Vertex labels in declared order, maximal faces, positive integer weights."""

    vertices: tuple
    maximal_faces: frozenset
    weights: Mapping[str, int] = field(repr=False)

    @classmethod
    def build(cls, weights: Mapping[str, int] | Sequence[tuple[str, int]], maximal_faces) -> "WeightedComplex":
        items = list(weights.items()) if isinstance(weights, Mapping) else list(weights)
        verts = tuple(str(lbl) for lbl, _ in items)
        w = {str(lbl): wt for lbl, wt in items}
        faces = frozenset(frozenset(str(v) for v in f) for f in maximal_faces)
        return cls(verts, faces, w)

    @classmethod
    def from_faces(cls, weights, faces) -> "WeightedComplex":
        """Build from any generating family of faces, keeping only the maximal ones."""
        fs = {frozenset(str(v) for v in f) for f in faces}
        return cls.build(weights, _maximal(fs))

    def __eq__(self, other):
        if not isinstance(other, WeightedComplex):
            return NotImplemented
        return (set(self.vertices) == set(other.vertices)
                and self.maximal_faces == other.maximal_faces
                and dict(self.weights) == dict(other.weights))

    def __hash__(self):
        return hash((frozenset(self.vertices), self.maximal_faces))

    def faces(self) -> set[frozenset]:
        """All nonempty faces (the downward closure of the maximal faces)."""
        out = set()
        for f in self.maximal_faces:
            items = sorted(f)
            for k in range(1, len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, k))
        return out

    def has_face(self, s) -> bool:
        s = frozenset(s)
        return any(s <= f for f in self.maximal_faces)

    def edges(self) -> list[frozenset]:
        return sorted((f for f in self.faces() if len(f) == 2), key=sorted)

    def dimension(self) -> int:
        return max((len(f) for f in self.maximal_faces), default=0) - 1

    def sorted_faces(self) -> list[list[str]]:
        return sorted(sorted(f) for f in self.maximal_faces)

    def __repr__(self):
        ws = ", ".join(f"{v}:{self.weights[v]}" for v in self.vertices)
        return f"WeightedComplex([{ws}], {self.sorted_faces()})"


def _maximal(faces) -> frozenset:
    faces = set(faces)
    return frozenset(f for f in faces if not any(f < g for g in faces))


def validate(w: WeightedComplex) -> list[Violation]:
    """Return the list of violated invariants; empty means valid."""
    out: list[Violation] = []
    if not w.vertices:
        out.append(Violation("empty", None, "vertex set is empty"))
    if len(set(w.vertices)) != len(w.vertices):
        out.append(Violation("duplicate-label", None, "vertex labels repeat"))
    vs = set(w.vertices)
    covered = set().union(*w.maximal_faces) if w.maximal_faces else set()
    for v in w.vertices:
        if v not in covered:
            out.append(Violation("uncovered-vertex", v, f"vertex {v} lies in no face"))
    for v in sorted(covered - vs):
        out.append(Violation("unknown-vertex", v, f"face uses undeclared vertex {v}"))
    for f in w.maximal_faces:
        if not f:
            out.append(Violation("empty-face", None, "empty set listed as a maximal face"))
        for g in w.maximal_faces:
            if f < g:
                out.append(Violation("non-maximal-face", sorted(f),
                                     f"face {sorted(f)} is contained in {sorted(g)}"))
    for v in w.vertices:
        wt = w.weights.get(v)
        if not isinstance(wt, int) or isinstance(wt, bool) or wt < 1:
            out.append(Violation("weight", v, f"weight of {v} is {wt!r}, must be an integer >= 1"))
    return out


# --- stellar steps -----------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class DeleteMaximal:
    face: frozenset

    def __init__(self, face):
        object.__setattr__(self, "face", frozenset(str(v) for v in face))


@dataclass(frozen=True)
class Subdivide:
    edge: tuple
    new_label: str

    def __init__(self, edge, new_label):
        e = tuple(sorted(str(v) for v in edge))
        object.__setattr__(self, "edge", e)
        object.__setattr__(self, "new_label", str(new_label))


StellarStep = Identity | DeleteMaximal | Subdivide


def check_step(w: WeightedComplex, s: StellarStep) -> None:
    if isinstance(s, Identity):
        return
    if isinstance(s, DeleteMaximal):
        if s.face not in w.maximal_faces:
            raise InvalidStep(f"{sorted(s.face)} is not a maximal face")
        if len(w.maximal_faces) == 1 and len(s.face) == 1:
            raise InvalidStep("cannot delete the only remaining point")
        return
    if isinstance(s, Subdivide):
        if len(set(s.edge)) != 2:
            raise InvalidStep(f"subdivision needs a two-element set, got {list(s.edge)}")
        if not w.has_face(s.edge):
            raise InvalidStep(f"{list(s.edge)} is not a face")
        if s.new_label in w.weights:
            raise InvalidStep(f"label {s.new_label} already in use")
        return
    raise InvalidStep(f"unknown step {s!r}")


def apply_step(w: WeightedComplex, s: StellarStep) -> WeightedComplex:
    """Apply a stellar transformation, raising InvalidStep when it does not apply."""
    check_step(w, s)
    if isinstance(s, Identity):
        return w
    if isinstance(s, DeleteMaximal):
        rest = set(w.maximal_faces - {s.face})
        for x in s.face:
            facet = s.face - {x}
            if facet and not any(facet <= g for g in rest):
                rest.add(facet)
        faces = _maximal(rest)
        covered = set().union(*faces)
        orphans = [v for v in w.vertices if v not in covered]
        if orphans:
            log.debug("deleting %s drops orphaned vertices %s", sorted(s.face), orphans)
        weights = [(v, w.weights[v]) for v in w.vertices if v in covered]
        return WeightedComplex.build(weights, faces)
    v, u = s.edge
    a = s.new_label
    faces = set()
    for f in w.maximal_faces:
        if v in f and u in f:
            faces.add((f - {u}) | {a})
            faces.add((f - {v}) | {a})
        else:
            faces.add(f)
    weights = [(x, w.weights[x]) for x in w.vertices]
    weights.append((a, w.weights[v] + w.weights[u]))
    return WeightedComplex.build(weights, faces)


# --- combinatorial isomorphism ----------------------------------------------


def _signature(w: WeightedComplex, v: str):
    sizes = sorted(len(f) for f in w.maximal_faces if v in f)
    return (w.weights[v], tuple(sizes))


def isomorphisms(w1: WeightedComplex, w2: WeightedComplex) -> Iterator[dict]:
    """Yield every weight- and face-preserving bijection, in a fixed order."""
    if len(w1.vertices) != len(w2.vertices) or len(w1.maximal_faces) != len(w2.maximal_faces):
        return
    sig1 = {v: _signature(w1, v) for v in w1.vertices}
    sig2 = {v: _signature(w2, v) for v in w2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return
    order = sorted(w1.vertices, key=lambda v: (sum(1 for x in sig1.values() if x == sig1[v]), v))
    targets = sorted(w2.vertices)
    faces2 = w2.maximal_faces
    faces1 = sorted(w1.maximal_faces, key=sorted)

    def consistent(mapping):
        # every fully mapped maximal face of w1 must go to a face of w2
        for f in faces1:
            if all(x in mapping for x in f):
                if not w2.has_face(mapping[x] for x in f):
                    return False
        return True

    def extend(i, mapping, used):
        if i == len(order):
            if frozenset(frozenset(mapping[x] for x in f) for f in faces1) == faces2:
                yield dict(mapping)
            return
        v = order[i]
        for t in targets:
            if t in used or sig2[t] != sig1[v]:
                continue
            mapping[v] = t
            used.add(t)
            if consistent(mapping):
                yield from extend(i + 1, mapping, used)
            used.discard(t)
            del mapping[v]

    yield from extend(0, {}, set())


def is_isomorphic(w1: WeightedComplex, w2: WeightedComplex) -> dict | None:
    """A combinatorial isomorphism ``w1 -> w2`` or None."""
    return next(isomorphisms(w1, w2), None)
