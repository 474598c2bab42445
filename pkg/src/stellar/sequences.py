"""Stellar sequences, their orbits, and the built-in infinite families."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .complexes import (DeleteMaximal, Identity, InvalidStep, StellarStep, Subdivide,
                        WeightedComplex, apply_step)
from .exactgeom import GeometryError
from .regular import (RegularComplex, Realization, Verdict, canonical_realization,
                      complex_contains, delta_transform, skeleton)

log = logging.getLogger(__name__)


class MalformedState(ValueError):
    pass


class AmbientMismatch(GeometryError):
    pass


class InsufficientDigits(ValueError):
    """The continued-fraction prefix does not decide the next round."""


# --- providers -----------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSteps:
    steps: tuple

    def __init__(self, steps):
        object.__setattr__(self, "steps", tuple(steps))


@dataclass(frozen=True)
class ConstantW:
    pass


@dataclass(frozen=True)
class SimplicialWeights:
    weights: tuple

    def __init__(self, *weights):
        if len(weights) == 1 and isinstance(weights[0], (list, tuple)):
            weights = tuple(weights[0])
        if not weights or any(not isinstance(n, int) or n < 1 for n in weights):
            raise ValueError("simplicial weights must be positive integers")
        object.__setattr__(self, "weights", tuple(weights))


@dataclass(frozen=True)
class SkeletonConstant:
    complex: RegularComplex


@dataclass(frozen=True)
class LexZ2:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("LexZ2 needs a positive integer n")


QUADRATIC = {
    # name -> (a, b, c) with xi = (sqrt(a) - b) / c, plus its repeating digit
    "golden": ((5, 1, 2), 1),
    "silver": ((2, 1, 1), 2),
}


@dataclass(frozen=True)
class EffrosShen:
    """Nested Farey intervals around ``xi = [0; a1, a2, ...]``.

    ``cf`` is either a named quadratic irrational or a finite list of partial
    quotients read as the known prefix of an irrational's expansion.
    """

    cf: tuple | str

    def __init__(self, cf):
        if isinstance(cf, str):
            if cf not in QUADRATIC:
                raise ValueError(f"unknown named irrational {cf!r}; known: {sorted(QUADRATIC)}")
        else:
            cf = tuple(cf)
            if not cf or any(not isinstance(a, int) or a < 1 for a in cf):
                raise ValueError("continued fraction digits must be a nonempty list of positive integers")
        object.__setattr__(self, "cf", cf)

    def digits(self, k: int) -> list[int]:
        if isinstance(self.cf, str):
            return [QUADRATIC[self.cf][1]] * k
        return list(self.cf[:k])

    def below(self, m: Fraction) -> bool:
        """Is xi < m?  Exact."""
        if isinstance(self.cf, str):
            (a, b, c), _ = QUADRATIC[self.cf]
            # sqrt(a) < c*m + b, both sides positive
            rhs = c * m + b
            return rhs > 0 and a < rhs * rhs
        val = cf_value(self.cf)
        if val == m:
            raise InsufficientDigits(f"{len(self.cf)} digits do not decide the side of {m}")
        return val < m


@dataclass(frozen=True)
class Callback:
    """In-library provider: ``fn(i, W_{i-1})`` returns step ``i``; never serialized."""

    fn: Callable[[int, WeightedComplex], StellarStep]
    eventually_constant_from: int | None = None


Provider = FiniteSteps | ConstantW | SimplicialWeights | SkeletonConstant | LexZ2 | EffrosShen | Callback


def cf_value(digits: Sequence[int]) -> Fraction:
    x = Fraction(0)
    for a in reversed(digits):
        x = 1 / (a + x)
    return x


# --- sequences -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StellarSequence:
    initial: WeightedComplex
    provider: Provider = field(default_factory=ConstantW)

    def __post_init__(self):
        if isinstance(self.provider, FiniteSteps):
            w = self.initial
            for k, s in enumerate(self.provider.steps, start=1):
                try:
                    w = apply_step(w, s)
                except InvalidStep as exc:
                    raise InvalidStep(f"step {k}: {exc}") from exc

    def tail_start(self) -> int | None:
        """Index from which the sequence is declared constant, or None when open."""
        p = self.provider
        if isinstance(p, FiniteSteps):
            return len(p.steps)
        if isinstance(p, (ConstantW, SimplicialWeights, SkeletonConstant)):
            return 0
        if isinstance(p, Callback):
            return p.eventually_constant_from
        return None

    def step(self, i: int, w: WeightedComplex) -> StellarStep:
        """Step producing ``W_i`` from ``w = W_{i-1}`` (``i >= 1``)."""
        p = self.provider
        if isinstance(p, FiniteSteps):
            return p.steps[i - 1] if i <= len(p.steps) else Identity()
        if isinstance(p, (ConstantW, SimplicialWeights, SkeletonConstant)):
            return Identity()
        if isinstance(p, Callback):
            return p.fn(i, w)
        return family_step(p, w, i)


def _segment(weight: int) -> WeightedComplex:
    return WeightedComplex.build([("0", weight), ("1", weight)], [["0", "1"]])


def family_sequence(provider: Provider, initial: WeightedComplex | None = None) -> StellarSequence:
    """The sequence a family descriptor stands for (``initial`` only for ConstantW/FiniteSteps)."""
    if isinstance(provider, LexZ2):
        return StellarSequence(_segment(provider.n), provider)
    if isinstance(provider, EffrosShen):
        return StellarSequence(_segment(1), provider)
    if isinstance(provider, SimplicialWeights):
        labels = [f"w{k}" for k in range(1, len(provider.weights) + 1)]
        w = WeightedComplex.build(list(zip(labels, provider.weights)), [[x] for x in labels])
        return StellarSequence(w, provider)
    if isinstance(provider, SkeletonConstant):
        return StellarSequence(skeleton(provider.complex)[0], provider)
    if initial is None:
        raise ValueError("this provider needs an explicit initial complex")
    return StellarSequence(initial, provider)


def constant_segment() -> StellarSequence:
    """The constant sequence on the full segment with both weights 1."""
    return StellarSequence(_segment(1), ConstantW())


# --- family rules ------------------------------------------------------------


def _unique(items, what):
    items = list(items)
    if len(items) != 1:
        raise MalformedState(f"expected exactly one {what}, found {len(items)}")
    return items[0]


def _round_label(r: int) -> str:
    return f"~{r}"


def effros_shen_interval(desc: EffrosShen, rounds: int) -> tuple[tuple[Fraction, str], tuple[Fraction, str]]:
    """Endpoints (value, label) of the retained interval after ``rounds`` rounds."""
    lo, hi = (Fraction(0), "0"), (Fraction(1), "1")
    for r in range(1, rounds + 1):
        m = Fraction(lo[0].numerator + hi[0].numerator, lo[0].denominator + hi[0].denominator)
        if desc.below(m):
            hi = (m, _round_label(r))
        else:
            lo = (m, _round_label(r))
    return lo, hi


def family_step(desc: LexZ2 | EffrosShen, w: WeightedComplex, i: int) -> StellarStep:
    """Step ``i`` of a built-in family, given ``w = W_{i-1}``."""
    if i < 1:
        raise ValueError("step indices start at 1")
    r, phase = (i + 2) // 3, i % 3
    edges = [f for f in w.maximal_faces if len(f) == 2]
    if phase == 1:
        e = _unique(edges, "two-element maximal face")
        return Subdivide(sorted(e), _round_label(r))
    if phase == 2:
        if isinstance(desc, LexZ2):
            anchor = w.vertices[0]
            return DeleteMaximal(_unique([e for e in edges if anchor not in e], "edge avoiding the anchor"))
        lo, hi = effros_shen_interval(desc, r)
        m = _round_label(r)
        if lo[1] == m:
            drop = [e for e in edges if e != frozenset({m, hi[1]})]
        else:
            drop = [e for e in edges if e != frozenset({lo[1], m})]
        return DeleteMaximal(_unique(drop, "edge away from xi"))
    single = [f for f in w.maximal_faces if len(f) == 1]
    return DeleteMaximal(_unique(single, "maximal singleton"))


# --- realizations and orbits -----------------------------------------------------


def default_realization(seq: StellarSequence) -> Realization:
    """Canonical realization, except for families with a natural one."""
    p = seq.provider
    if isinstance(p, EffrosShen):
        g = RegularComplex(1, ((Fraction(0),), (Fraction(1),)), frozenset({frozenset({0, 1})}))
        return Realization(seq.initial, g, {"0": 0, "1": 1})
    if isinstance(p, SkeletonConstant):
        return skeleton(p.complex)[1]
    return canonical_realization(seq.initial)


@dataclass
class Orbit:
    """Realizations ``r_0, r_1, ...`` of a sequence, extended on demand.

    Not safe for concurrent extension; separate orbits are independent.
    """

    sequence: StellarSequence
    realizations: list

    @property
    def tail_start(self) -> int | None:
        return self.sequence.tail_start()

    @property
    def eventually_constant(self) -> bool:
        return self.tail_start is not None

    def extend(self, depth: int) -> "Orbit":
        while len(self.realizations) <= depth:
            i = len(self.realizations)
            r = self.realizations[-1]
            try:
                s = self.sequence.step(i, r.weighted)
                self.realizations.append(delta_transform(r, s))
            except (InvalidStep, MalformedState, InsufficientDigits) as exc:
                raise InvalidStep(f"step {i}: {exc}") from exc
        return self

    def complex(self, i: int) -> RegularComplex:
        self.extend(i)
        return self.realizations[i].geometric

    def complexes(self, depth: int | None = None) -> list[RegularComplex]:
        if depth is not None:
            self.extend(depth)
            return [r.geometric for r in self.realizations[:depth + 1]]
        return [r.geometric for r in self.realizations]

    def final(self) -> Realization:
        """Last distinct realization; only for eventually-constant sequences."""
        if self.tail_start is None:
            raise ValueError("sequence has an open tail")
        self.extend(self.tail_start)
        return self.realizations[self.tail_start]


def orbit(seq: StellarSequence, r0: Realization | str = "canonical", depth: int = 0) -> Orbit:
    if isinstance(r0, str):
        if r0 == "canonical":
            r0 = canonical_realization(seq.initial)
        elif r0 == "default":
            r0 = default_realization(seq)
        else:
            raise ValueError(f"unknown realization {r0!r}")
    if r0.weighted != seq.initial:
        raise GeometryError("realization does not realize the initial complex")
    r0.check()
    return Orbit(seq, [r0]).extend(depth)


# --- confluence --------------------------------------------------------------


@dataclass(frozen=True)
class Confluence:
    status: str  # "certified" | "consistent" | "refuted"
    depth: int
    witness: object = None


def confluent(A: Sequence[RegularComplex], B: Sequence[RegularComplex], depth: int, *,
              a_constant_from: int | None = None, b_constant_from: int | None = None,
              max_blowups: int = 64) -> Confluence:
    """Compare two descending chains of supports for mutual minorization.

    ``*_constant_from`` declares the index after which a chain no longer
    changes; the lists must reach that index for the declaration to be used.
    """
    for cx in list(A) + list(B):
        if cx.ambient_dim != A[0].ambient_dim:
            raise AmbientMismatch("chains live in different cubes")
    A, B = list(A[:depth + 1]), list(B[:depth + 1])
    fa = A[a_constant_from] if a_constant_from is not None and a_constant_from < len(A) else None
    fb = B[b_constant_from] if b_constant_from is not None and b_constant_from < len(B) else None

    # a constant chain minorizes the other only if every element of the other contains its final support
    for final, other, side in ((fa, B, "A"), (fb, A, "B")):
        if final is None:
            continue
        for j, cx in enumerate(other):
            c = complex_contains(cx, final, max_blowups)
            if c.status is Verdict.NO:
                return Confluence("refuted", depth, {"final_of": side, "index": j, "point": c.witness})
    if fa is not None and fb is not None:
        ab = complex_contains(fa, fb, max_blowups)
        ba = complex_contains(fb, fa, max_blowups)
        if ab.status is Verdict.YES and ba.status is Verdict.YES:
            return Confluence("certified", depth)
    return Confluence("consistent", depth)
