"""Integer piecewise-linear functions on regular complexes, and l-group terms.

A function is stored by its values at the vertices of a regular carrier
complex. Regularity makes the integer-coefficient condition checkable from
those values alone.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactgeom import GeometryError, Point, barycentric, format_point, integer_affine_fit
from .regular import (Containment, RegularComplex, Verdict, compact, complex_contains, unit_cube)
from .zhomeo import Unknown, common_refinement, refine


class MalformedTerm(ValueError):
    pass


class OutsideCarrier(GeometryError):
    pass


class PreconditionFailed(GeometryError):
    def __init__(self, message: str, witness: Point | None = None):
        super().__init__(message)
        self.witness = witness


class AmbientMismatch(GeometryError):
    pass


# --- terms -------------------------------------------------------------------


class Term:
    def __add__(self, other):
        return Add(self, _lift(other))

    def __radd__(self, other):
        return Add(_lift(other), self)

    def __sub__(self, other):
        return Sub(self, _lift(other))

    def __rsub__(self, other):
        return Sub(_lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __rmul__(self, k: int):
        return Scale(k, self)

    def __or__(self, other):
        return Join(self, _lift(other))

    def __and__(self, other):
        return Meet(self, _lift(other))


def _lift(x) -> Term:
    if isinstance(x, Term):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return ONE if x == 1 else Scale(x, ONE)
    raise MalformedTerm(f"cannot use {x!r} in a term")


@dataclass(frozen=True)
class Var(Term):
    index: int  # 1-based

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise MalformedTerm(f"generator index must be >= 1, got {self.index!r}")

    def __str__(self):
        return f"p{self.index}"


@dataclass(frozen=True)
class One(Term):
    def __str__(self):
        return "1"


ONE = One()


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term

    def __str__(self):
        return f"({self.left} - {self.right})"


@dataclass(frozen=True)
class Neg(Term):
    arg: Term

    def __str__(self):
        return f"-{self.arg}"


@dataclass(frozen=True)
class Scale(Term):
    k: int
    arg: Term

    def __str__(self):
        return f"{self.k}*{self.arg}"


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term

    def __str__(self):
        return f"({self.left} v {self.right})"


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term

    def __str__(self):
        return f"({self.left} ^ {self.right})"


def pi(i: int) -> Var:
    return Var(i)


def arity(t: Term) -> int:
    """Largest generator index used (0 for constant terms)."""
    if isinstance(t, Var):
        return t.index
    if isinstance(t, One):
        return 0
    if isinstance(t, (Neg, Scale)):
        return arity(t.arg)
    if isinstance(t, (Add, Sub, Join, Meet)):
        return max(arity(t.left), arity(t.right))
    raise MalformedTerm(f"not a term: {t!r}")


def evaluate(t: Term, x: Sequence[Fraction]) -> Fraction:
    """Direct recursive evaluation at a point."""
    if isinstance(t, Var):
        if t.index > len(x):
            raise MalformedTerm(f"{t} needs at least {t.index} coordinates")
        return Fraction(x[t.index - 1])
    if isinstance(t, One):
        return Fraction(1)
    if isinstance(t, Neg):
        return -evaluate(t.arg, x)
    if isinstance(t, Scale):
        return t.k * evaluate(t.arg, x)
    if isinstance(t, Add):
        return evaluate(t.left, x) + evaluate(t.right, x)
    if isinstance(t, Sub):
        return evaluate(t.left, x) - evaluate(t.right, x)
    if isinstance(t, Join):
        return max(evaluate(t.left, x), evaluate(t.right, x))
    if isinstance(t, Meet):
        return min(evaluate(t.left, x), evaluate(t.right, x))
    raise MalformedTerm(f"not a term: {t!r}")


_TOKEN = re.compile(r"\s*(?:(p\d+)|(\d+)|([-+*^v()∨∧]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedTerm(f"unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append({"∨": "v", "∧": "^"}.get(tok, tok))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise MalformedTerm(f"expected {expect or 'a token'} at token {self.i}, got {tok!r}")
        self.i += 1
        return tok

    # infix ------------------------------------------------------------
    def join(self):
        t = self.meet()
        while self.peek() == "v":
            self.take()
            t = Join(t, self.meet())
        return t

    def meet(self):
        t = self.sum()
        while self.peek() == "^":
            self.take()
            t = Meet(t, self.sum())
        return t

    def sum(self):
        t = self.prod()
        while self.peek() in ("+", "-"):
            op = self.take()
            r = self.prod()
            t = Add(t, r) if op == "+" else Sub(t, r)
        return t

    def prod(self):
        tok = self.peek()
        if tok is not None and tok.isdigit():
            k = int(self.take())
            if self.peek() == "*":
                self.take()
                return Scale(k, self.unary())
            if self.peek() is not None and (self.peek().startswith("p") or self.peek() == "("):
                return Scale(k, self.unary())
            return _lift(k) if k != 0 else Scale(0, ONE)
        return self.unary()

    def unary(self):
        if self.peek() == "-":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok.startswith("p"):
            return Var(int(tok[1:]))
        if tok.isdigit():
            return _lift(int(tok)) if int(tok) != 0 else Scale(0, ONE)
        if tok == "(":
            t = self.join()
            self.take(")")
            return t
        raise MalformedTerm(f"unexpected token {tok!r}")

    # prefix -----------------------------------------------------------
    def sexpr(self):
        tok = self.take()
        if tok != "(":
            if tok.startswith("p"):
                return Var(int(tok[1:]))
            if tok.isdigit():
                return _lift(int(tok)) if int(tok) != 0 else Scale(0, ONE)
            raise MalformedTerm(f"unexpected token {tok!r}")
        op = self.take()
        args = []
        while self.peek() != ")":
            if self.peek() is None:
                raise MalformedTerm("unbalanced parentheses")
            args.append(self.sexpr())
        self.take(")")
        if op == "-" and len(args) == 1:
            return Neg(args[0])
        if op == "*" and len(args) == 2 and isinstance(args[0], (One, Scale)) and _is_const(args[0]):
            return Scale(_const(args[0]), args[1])
        if len(args) < 2 or op not in "+-^v":
            raise MalformedTerm(f"bad prefix form for operator {op!r}")
        ctor = {"+": Add, "-": Sub, "^": Meet, "v": Join}[op]
        t = args[0]
        for a in args[1:]:
            t = ctor(t, a)
        return t


def _is_const(t):
    return isinstance(t, One) or (isinstance(t, Scale) and isinstance(t.arg, One))


def _const(t):
    return 1 if isinstance(t, One) else t.k


def parse_term(text: str) -> Term:
    """Parse infix (``2p1 ^ (1 - p1)``) or prefix (``(^ (* 2 p1) (- 1 p1))``) syntax."""
    toks = _tokenize(text)
    if not toks:
        raise MalformedTerm("empty term")
    if len(toks) > 1 and toks[0] == "(" and toks[1] in ("+", "-", "*", "^", "v"):
        p = _Parser(toks)
        try:
            t = p.sexpr()
            if p.peek() is None:
                return t
        except MalformedTerm:
            pass
    p = _Parser(toks)
    t = p.join()
    if p.peek() is not None:
        raise MalformedTerm(f"trailing input at token {p.i}: {p.peek()!r}")
    return t


# --- piecewise linear functions ---------------------------------------------


@dataclass(frozen=True, eq=False)
class PLFunc:
    """Continuous function, affine on each simplex of ``carrier``."""

    carrier: RegularComplex
    values: tuple  # one Fraction per vertex of the carrier
    _pieces: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != len(self.carrier.vertices):
            raise GeometryError("need one value per carrier vertex")
        object.__setattr__(self, "values", vals)
        pieces = {}
        for s in self.carrier.maximal_simplexes:
            idx = sorted(s)
            pts = [self.carrier.vertices[i] for i in idx]
            pieces[s] = integer_affine_fit(pts, [(vals[i],) for i in idx])
        object.__setattr__(self, "_pieces", pieces)

    def piece(self, s: frozenset) -> tuple[tuple[int, ...], int]:
        mat, off = self._pieces[s]
        return mat[0], off[0]

    def __call__(self, x):
        return eval_at(self, x)


def eval_at(f: PLFunc, x: Sequence[Fraction]) -> Fraction:
    """Value of ``f`` at ``x`` by interpolation on a containing simplex."""
    x = tuple(Fraction(c) for c in x)
    cx = f.carrier
    i = cx.index_of(x)
    if i is not None and i in cx.used_vertices():
        return f.values[i]
    s = cx.locate(x)
    if s is None:
        raise OutsideCarrier(f"{format_point(x)} is outside the carrier")
    idx = sorted(s)
    lam = barycentric([cx.vertices[j] for j in idx], x)
    return sum(l * f.values[j] for l, j in zip(lam, idx))


def plfunc_from_values(carrier: RegularComplex, values) -> PLFunc:
    return PLFunc(carrier, tuple(values))


def _node_values(t: Term, x: Point, memo: dict) -> Fraction:
    key = (id(t), x)
    if key not in memo:
        memo[key] = evaluate(t, x)
    return memo[key]


def _offending_edge(t: Term, pts: list[Point], memo: dict) -> tuple[int, int] | None:
    """An edge across which some join/meet of ``t`` switches branches, or None."""
    if isinstance(t, (Var, One)):
        return None
    if isinstance(t, (Neg, Scale)):
        return _offending_edge(t.arg, pts, memo)
    for child in (t.left, t.right):
        e = _offending_edge(child, pts, memo)
        if e is not None:
            return e
    if isinstance(t, (Join, Meet)):
        d = [_node_values(t.left, p, memo) - _node_values(t.right, p, memo) for p in pts]
        pos = [i for i, v in enumerate(d) if v > 0]
        neg = [i for i, v in enumerate(d) if v < 0]
        if pos and neg:
            return (min(pos[0], neg[0]), max(pos[0], neg[0]))
    return None


def term_to_plfunc(t: Term, ambient: RegularComplex | None = None, max_blowups: int = 64) -> PLFunc | Unknown:
    """Function of ``t`` on ``ambient`` (default: the unit cube in dimension arity(t))."""
    n = max(arity(t), 1)
    if ambient is None:
        ambient = unit_cube(n)
    if arity(t) > ambient.ambient_dim:
        raise MalformedTerm(f"term uses p{arity(t)} but the ambient dimension is {ambient.ambient_dim}")
    memo: dict = {}
    cx = refine(ambient, lambda pts: _offending_edge(t, pts, memo), max_blowups)
    if isinstance(cx, Unknown):
        return cx
    values = [_node_values(t, v, memo) if i in cx.used_vertices() else Fraction(0)
              for i, v in enumerate(cx.vertices)]
    return PLFunc(cx, tuple(values))


def _sign_change(vals: list[Fraction]) -> tuple[int, int] | None:
    pos = [i for i, v in enumerate(vals) if v > 0]
    neg = [i for i, v in enumerate(vals) if v < 0]
    if pos and neg:
        a, b = pos[0], neg[0]
        return (min(a, b), max(a, b))
    return None


def zeroset(f: PLFunc, max_blowups: int = 64) -> RegularComplex | Unknown:
    """Subcomplex, of a Farey refinement of the carrier, on which ``f`` vanishes."""
    cx = refine(f.carrier, lambda pts: _sign_change([eval_at(f, p) for p in pts]), max_blowups)
    if isinstance(cx, Unknown):
        return cx
    zero_faces = set()
    for s in cx.maximal_simplexes:
        z = frozenset(i for i in s if eval_at(f, cx.vertices[i]) == 0)
        if z:
            zero_faces.add(z)
    zero_faces = {z for z in zero_faces if not any(z < y for y in zero_faces)}
    out, _ = compact(RegularComplex(cx.ambient_dim, cx.vertices, frozenset(zero_faces)))
    return out


@dataclass(frozen=True)
class Membership:
    status: Verdict
    index: int | None = None
    witness: Point | None = None
    value: Fraction | None = None


def ideal_member(f: PLFunc, supports: Sequence[RegularComplex], depth: int, *,
                 eventually_constant: bool = False, max_blowups: int = 64) -> Membership:
    """Does ``f`` vanish on some listed support?

    Answers NO only when the listed chain is declared eventually constant and
    its final support is not inside the zeroset.
    """
    for cx in supports:
        if cx.ambient_dim != f.carrier.ambient_dim:
            raise AmbientMismatch("support and function live in different cubes")
    z = zeroset(f, max_blowups)
    if isinstance(z, Unknown):
        return Membership(Verdict.UNKNOWN)
    upto = list(supports[:depth + 1])
    last: Containment | None = None
    for i, cx in enumerate(upto):
        last = complex_contains(z, cx, max_blowups) if z.maximal_simplexes else \
            Containment(Verdict.NO, _any_point(cx))
        if last.status is Verdict.YES:
            return Membership(Verdict.YES, i)
    if eventually_constant and len(upto) == len(supports) and last is not None \
            and last.status is Verdict.NO:
        w = last.witness
        return Membership(Verdict.NO, len(upto) - 1, w, eval_at(f, w))
    return Membership(Verdict.UNKNOWN)


def _any_point(cx: RegularComplex):
    return cx.vertices[min(cx.used_vertices())] if cx.maximal_simplexes else None


def dominance_witness(f: PLFunc, g: PLFunc, max_blowups: int = 64) -> int | Unknown:
    """Least integer ``m >= 0`` with ``m*g >= f`` at the vertices of a common refinement.

    Both functions must be nonnegative and ``g`` may vanish only where ``f`` does.
    """
    if f.carrier.ambient_dim != g.carrier.ambient_dim:
        raise AmbientMismatch("functions live in different cubes")
    cx = common_refinement(f.carrier, g.carrier, max_blowups)
    if isinstance(cx, Unknown):
        return cx
    m = 0
    for i in sorted(cx.used_vertices()):
        v = cx.vertices[i]
        fv, gv = eval_at(f, v), eval_at(g, v)
        if fv < 0 or gv < 0:
            raise PreconditionFailed(f"negative value at {format_point(v)}", v)
        if gv == 0:
            if fv > 0:
                raise PreconditionFailed(f"g vanishes at {format_point(v)} where f does not", v)
            continue
        m = max(m, math.ceil(fv / gv))
    return m
