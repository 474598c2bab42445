"""Exact rational geometry: denominators, homogeneous correspondents, unimodularity.

Rationals are :class:`fractions.Fraction`; points are tuples of fractions.
Nothing in here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Point = tuple  # tuple[Fraction, ...]


class GeometryError(ValueError):
    """Raised for degenerate or ill-formed geometric input."""


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ints are accepted as well)."""
    if isinstance(text, bool):
        raise GeometryError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise GeometryError(f"not a rational: {text!r}")
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"not a rational: {text!r}") from exc
    return value


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def make_point(coords: Iterable, *, check_cube: bool = True) -> Point:
    p = tuple(parse_rational(c) for c in coords)
    if not p:
        raise GeometryError("points need at least one coordinate")
    if check_cube and any(c < 0 or c > 1 for c in p):
        raise GeometryError(f"point {format_point(p)} lies outside the unit cube")
    return p


def format_point(p: Sequence[Fraction]) -> list[str]:
    return [format_rational(c) for c in p]


def den(p: Sequence[Fraction]) -> int:
    """Least common denominator of the coordinates of ``p``."""
    return math.lcm(*(Fraction(c).denominator for c in p))


def homogeneous(p: Sequence[Fraction]) -> tuple[int, ...]:
    """Homogeneous correspondent ``den(p) * (p, 1)`` as an integer vector."""
    d = den(p)
    return tuple(int(c * d) for c in p) + (d,)


def from_homogeneous(v: Sequence[int]) -> Point:
    """Inverse of :func:`homogeneous` for vectors with a positive last entry."""
    if v[-1] <= 0:
        raise GeometryError("last homogeneous entry must be positive")
    return tuple(Fraction(x, v[-1]) for x in v[:-1])


# --- integer linear algebra -------------------------------------------------


def column_echelon(rows: Sequence[Sequence[int]]):
    """Column-reduce an integer matrix with unimodular column operations.

    Returns ``(H, U, Uinv)`` with ``rows @ U == H``, ``U @ Uinv == I`` and
    ``H`` lower triangular in its first ``len(rows)`` columns, zero beyond.
    A zero pivot means the rows are rationally dependent.
    """
    r = len(rows)
    c = len(rows[0]) if r else 0
    if r > c:
        raise GeometryError("need at least as many columns as rows")
    H = [list(map(int, row)) for row in rows]
    U = [[int(i == j) for j in range(c)] for i in range(c)]
    Uinv = [[int(i == j) for j in range(c)] for i in range(c)]

    def add_col(dst, src, q):
        # col_dst -= q * col_src ; inverse: row_src += q * row_dst of Uinv
        for row in H:
            row[dst] -= q * row[src]
        for row in U:
            row[dst] -= q * row[src]
        Uinv[src] = [a + q * b for a, b in zip(Uinv[src], Uinv[dst])]

    def swap_col(i, j):
        for row in H:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]
        Uinv[i], Uinv[j] = Uinv[j], Uinv[i]

    def negate_col(i):
        for row in H:
            row[i] = -row[i]
        for row in U:
            row[i] = -row[i]
        Uinv[i] = [-a for a in Uinv[i]]

    pivot = 0
    for i in range(r):
        if pivot >= c:
            break
        for j in range(pivot + 1, c):
            while H[i][j] != 0:
                q = H[i][pivot] // H[i][j]
                add_col(pivot, j, q)
                swap_col(pivot, j)
        if H[i][pivot] < 0:
            negate_col(pivot)
        if H[i][pivot] != 0:
            pivot += 1
    return H, U, Uinv


def maximal_minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of all maximal minors; 0 iff the rows are rationally dependent."""
    r = len(rows)
    if r == 0:
        return 1
    H, _, _ = column_echelon(rows)
    prod = 1
    for i in range(r):
        prod *= H[i][i]
    return abs(prod)


def maximal_minor_gcd_bruteforce(rows: Sequence[Sequence[int]]) -> int:
    """Reference computation enumerating every maximal minor."""
    r = len(rows)
    c = len(rows[0])
    g = 0
    for cols in combinations(range(c), r):
        g = math.gcd(g, bareiss_det([[row[j] for j in cols] for row in rows]))
    return g


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def extend_to_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Complete unimodular rows (minor gcd 1) to a basis of Z^c.

    The given rows come first in the returned list.
    """
    if maximal_minor_gcd(rows) != 1:
        raise GeometryError("rows are not part of a lattice basis")
    r = len(rows)
    _, _, Uinv = column_echelon(rows)
    return [list(row) for row in rows] + [list(row) for row in Uinv[r:]]


def rational_rank(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][col] != 0:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """Solve ``A x = b`` exactly; ``A`` may be tall.

    Returns the unique solution, or None when the system is inconsistent.
    Raises GeometryError when the solution is not unique.
    """
    m = len(A)
    n = len(A[0])
    aug = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[i][n] != 0 for i in range(row, m)):
        return None
    if len(pivots) < n:
        raise GeometryError("system has no unique solution")
    return [aug[i][n] for i in range(n)]


def invert_matrix(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [[Fraction(x) for x in A[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise GeometryError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


# --- simplexes ---------------------------------------------------------------


@dataclass(frozen=True)
class RationalSimplex:
    """Convex hull of affinely independent rational points."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(Fraction(c) for c in v) for v in self.vertices)
        if not verts:
            raise GeometryError("a simplex needs at least one vertex")
        dims = {len(v) for v in verts}
        if len(dims) != 1:
            raise GeometryError("vertices live in different ambient dimensions")
        if len(set(verts)) != len(verts):
            raise GeometryError("repeated vertex")
        if rational_rank([v + (1,) for v in verts]) != len(verts):
            raise GeometryError("vertices are affinely dependent")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def homogeneous_matrix(self) -> list[tuple[int, ...]]:
        return [homogeneous(v) for v in self.vertices]

    def barycenter(self) -> Point:
        k = len(self.vertices)
        return tuple(sum(c) / k for c in zip(*self.vertices))


def is_regular(simplex: RationalSimplex | Sequence[Point]) -> bool:
    """True iff the homogeneous vertex vectors are part of a basis of Z^{n+1}."""
    verts = simplex.vertices if isinstance(simplex, RationalSimplex) else simplex
    return maximal_minor_gcd([homogeneous(v) for v in verts]) == 1


class SimplexLocator:
    """Integer data for locating points in a fixed simplex.

    With ``H`` the homogeneous vertex rows, picks columns ``C`` where ``H[:, C]``
    is invertible and keeps its adjugate and determinant, so membership tests
    use integer arithmetic only. Queries take homogeneous correspondents.
    """

    __slots__ = ("H", "cols", "adj", "det", "lo", "hi")

    def __init__(self, vertices: Sequence[Point]):
        H = [homogeneous(v) for v in vertices]
        k = len(H)
        for cols in combinations(range(len(H[0])), k):
            sub = [[row[c] for c in cols] for row in H]
            d = bareiss_det(sub)
            if d:
                break
        else:
            raise GeometryError("vertices are affinely dependent")
        # adj[i][j] is the (j, i) cofactor, so sub^-1 = adj / d
        self.adj = [[(-1) ** (i + j) * bareiss_det([r[:i] + r[i + 1:] for t, r in enumerate(sub) if t != j])
                     for j in range(k)] for i in range(k)]
        self.H, self.cols, self.det = H, cols, d
        n = len(H[0]) - 1
        self.lo = tuple(min(v[c] for v in vertices) for c in range(n))
        self.hi = tuple(max(v[c] for v in vertices) for c in range(n))

    def coords(self, xh: Sequence[int]) -> list[int] | None:
        """``nu`` with ``sum nu_j H_j = det * xh``, or None off the affine hull."""
        H, adj = self.H, self.adj
        k = len(H)
        nu = [sum(xh[c] * adj[i][j] for i, c in enumerate(self.cols)) for j in range(k)]
        d = self.det
        for c in range(len(xh)):
            if sum(nu[j] * H[j][c] for j in range(k)) != d * xh[c]:
                return None
        return nu

    def contains(self, x: Sequence[Fraction], xh: Sequence[int] | None = None) -> bool:
        for c, v in enumerate(x):
            if v < self.lo[c] or v > self.hi[c]:
                return False
        nu = self.coords(xh if xh is not None else homogeneous(x))
        return nu is not None and all(n * self.det >= 0 for n in nu)


@lru_cache(maxsize=1 << 14)
def locator(vertices: tuple) -> SimplexLocator:
    return SimplexLocator(vertices)


def barycentric(vertices: Sequence[Point], x: Sequence[Fraction]):
    """Barycentric coordinates of ``x`` in the affine hull, or None if outside it."""
    loc = locator(tuple(tuple(v) for v in vertices))
    nu = loc.coords(homogeneous(x))
    if nu is None:
        return None
    dx = den(x)
    # x~ = den(x) (x, 1) and H_j = den(v_j) (v_j, 1), so lambda_j = nu_j den(v_j) / (det den(x))
    return [Fraction(nu[j] * loc.H[j][-1], loc.det * dx) for j in range(len(loc.H))]


def in_simplex(vertices: Sequence[Point], x: Sequence[Fraction]) -> bool:
    if len(x) == 1:
        xs = [v[0] for v in vertices]
        return min(xs) <= x[0] <= max(xs)
    return locator(tuple(tuple(v) for v in vertices)).contains(x)


def mediant(p: Sequence[Fraction], q: Sequence[Fraction]) -> Point:
    """Point whose homogeneous correspondent is the sum of those of p and q."""
    hp, hq = homogeneous(p), homogeneous(q)
    return from_homogeneous([a + b for a, b in zip(hp, hq)])


def sq_dist(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(p, q))


class NonIntegral(GeometryError):
    """An affine piece that should have integer coefficients does not."""


def integer_affine_fit(points: Sequence[Point], values: Sequence[Sequence[Fraction]]):
    """Integer affine map ``x -> M x + b`` taking ``points[i]`` to ``values[i]``.

    ``points`` must span a regular simplex. Directions transverse to the
    simplex are sent to zero, so the fit is integral exactly when
    ``den(p_i) * values[i]`` is integral for every vertex. Raises
    :class:`NonIntegral` otherwise.
    """
    rows = [homogeneous(p) for p in points]
    m = len(points[0])
    basis = extend_to_basis(rows)
    k = len(points)
    n_out = len(values[0])
    # image of each basis vector, one output coordinate at a time
    images = []
    for i, b in enumerate(basis):
        if i < k:
            d = b[-1]
            images.append([Fraction(values[i][r]) * d for r in range(n_out)])
        else:
            images.append([Fraction(0)] * n_out)
    binv_t = invert_matrix([list(col) for col in zip(*basis)])  # (B^T)^-1
    matrix, offset = [], []
    for r in range(n_out):
        row = [sum(images[i][r] * binv_t[i][j] for i in range(len(basis))) for j in range(m + 1)]
        if any(x.denominator != 1 for x in row):
            raise NonIntegral(f"affine piece has non-integer coefficients {row}")
        matrix.append(tuple(int(x) for x in row[:m]))
        offset.append(int(row[m]))
    return tuple(matrix), tuple(offset)


def apply_affine(matrix, offset, x: Sequence[Fraction]) -> Point:
    return tuple(sum(a * c for a, c in zip(row, x)) + b for row, b in zip(matrix, offset))
