"""Reference computations written independently of the library.

Each helper uses the most direct method available (cofactor expansion,
textbook recurrences, exhaustive grids) so that agreement with the library
is meaningful.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def lcm_den(p) -> int:
    return math.lcm(*(Fraction(c).denominator for c in p))


def det_cofactor(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det_cofactor(minor)
    return total


def minor_gcd(rows) -> int:
    rows = [list(r) for r in rows]
    k, n = len(rows), len(rows[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = math.gcd(g, det_cofactor([[r[c] for c in cols] for r in rows]))
    return g


def homogeneous_oracle(p) -> tuple[int, ...]:
    d = lcm_den(p)
    return tuple(int(Fraction(c) * d) for c in p) + (d,)


def regular_oracle(points) -> bool:
    return minor_gcd([homogeneous_oracle(p) for p in points]) == 1


def convergents(digits) -> list[Fraction]:
    """Convergents p_k/q_k of [0; a1, a2, ...], starting with p_0/q_0 = 0/1."""
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    out = [(p, q)]
    for a in digits:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append((p, q))
    return out


# --- random terms as plain tuples -----------------------------------------------


def term_text(t) -> str:
    op = t[0]
    if op == "var":
        return f"p{t[1]}"
    if op == "one":
        return "1"
    if op == "neg":
        return f"-({term_text(t[1])})"
    if op == "scale":
        return f"{t[1]}({term_text(t[2])})"
    sym = {"add": "+", "sub": "-", "join": "v", "meet": "^"}[op]
    return f"({term_text(t[1])} {sym} {term_text(t[2])})"


def term_eval(t, x) -> Fraction:
    op = t[0]
    if op == "var":
        return Fraction(x[t[1] - 1])
    if op == "one":
        return Fraction(1)
    if op == "neg":
        return -term_eval(t[1], x)
    if op == "scale":
        return t[1] * term_eval(t[2], x)
    a, b = term_eval(t[1], x), term_eval(t[2], x)
    return {"add": a + b, "sub": a - b, "join": max(a, b), "meet": min(a, b)}[op]


def rationals_up_to(n: int):
    """Every rational in [0, 1] with denominator at most ``n``."""
    return sorted({Fraction(p, q) for q in range(1, n + 1) for p in range(q + 1)})
