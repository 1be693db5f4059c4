"""
Exact rational geometry: vectors, hyperplanes, half-spaces, rank and
dimension, convex-hull membership and LP feasibility.

Every decision here is made in exact arithmetic.  The LP engine is a
fraction-free (integer-preserving) tableau simplex with Bland's rule, so
results and witnesses are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

LE = "le"
GE = "ge"


class EmptyInput(ValueError):
    pass


def qvec(values: Iterable) -> tuple[Fraction, ...]:
    """Coerce an iterable of ints / Fractions / decimal strings to a rational vector."""
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q by Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {v : row . v = 0 for every row}, via reduced row echelon form."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [a / pv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def affine_dimension(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points``."""
    if len(points) == 0:
        raise EmptyInput("affine_dimension of an empty point list")
    p0 = points[0]
    n = len(p0)
    if any(len(p) != n for p in points):
        raise ValueError("points of different lengths")
    return rank([[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in points[1:]])


def _lead_normalize(normal: tuple[Fraction, ...], offset: Fraction):
    lead = next((a for a in normal if a != 0), None)
    if lead is None:
        raise ValueError("hyperplane normal must be nonzero")
    return tuple(a / lead for a in normal), offset / lead, lead


@dataclass(frozen=True)
class Hyperplane:
    """The locus ``normal . x = offset``, stored with leading coefficient +1."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        normal, offset, _ = _lead_normalize(qvec(self.normal), Fraction(self.offset))
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def from_set(cls, S: Iterable[int], n: int, offset=1) -> "Hyperplane":
        """``sum_{i in S} x_i = offset`` with 1-based indices."""
        S = set(S)
        return cls(tuple(Fraction(1 if i + 1 in S else 0) for i in range(n)), Fraction(offset))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, x: Sequence) -> Fraction:
        """``normal . x - offset``; the sign locates x against the plane."""
        return dot(self.normal, x) - self.offset

    def reduced(self, total=2) -> "Hyperplane":
        """Canonical form modulo the ambient plane ``sum x_i = total``.

        Two hyperplanes that cut ``sum x = total`` in the same locus reduce to
        the same object, so this is the deduplication key.
        """
        n = len(self.normal)
        shift = sum(self.normal) / n
        normal = tuple(a - shift for a in self.normal)
        if all(a == 0 for a in normal):
            raise ValueError("hyperplane is parallel to the ambient plane")
        return Hyperplane(normal, self.offset - total * shift)

    def __str__(self):
        terms = []
        for i, a in enumerate(self.normal):
            if a == 0:
                continue
            coef = "" if a == 1 else ("-" if a == -1 else f"{a}*")
            terms.append(f"{coef}x{i + 1}")
        return " + ".join(terms).replace("+ -", "- ") + f" = {self.offset}"


@dataclass(frozen=True)
class HalfSpace:
    hyperplane: Hyperplane
    direction: str = LE

    def __post_init__(self):
        if self.direction not in (LE, GE):
            raise ValueError(f"direction must be {LE!r} or {GE!r}")

    def value(self, x) -> Fraction:
        """Nonnegative iff x satisfies the (closed) half-space."""
        v = self.hyperplane.value(x)
        return -v if self.direction == LE else v

    def contains(self, x, strict=False) -> bool:
        v = self.value(x)
        return v > 0 if strict else v >= 0


# ---------------------------------------------------------------------------
# Fraction-free simplex
# ---------------------------------------------------------------------------

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _int_row(coeffs: Sequence, rhs) -> tuple[list[int], int]:
    if type(rhs) is int and all(type(a) is int for a in coeffs):
        return list(coeffs), rhs
    fr =[Fraction(a) for a in coeffs] + [Fraction(rhs)]
    m = lcm(*(f.denominator for f in fr))
    ints = [int(f * m) for f in fr]
    return ints[:-1], ints[-1]


class _Tableau:
    """Integer tableau: the true tableau is ``T / d`` with ``d > 0``."""

    def __init__(self, T, basis, d=1):
        self.T = T
        self.basis = basis
        self.d = d

    def pivot(self, r: int, c: int):
        T, d = self.T, self.d
        row_r = T[r]
        p = row_r[c]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f == 0:
                if p != d:
                    T[i] = [a * p // d for a in row]
            else:
                T[i] = [(a * p - f * b) // d for a, b in zip(row, row_r)]
        self.d = p
        self.basis[r] = c
        if self.d < 0:
            self.T = [[-a for a in row] for row in self.T]
            self.d = -self.d

    def run(self, obj: int, allowed, nrows: int) -> str:
        """Maximize the objective stored in row ``obj`` (reduced costs) with Bland's rule."""
        T = self.T
        while True:
            T = self.T
            orow = T[obj]
            basic = set(self.basis)
            enter = next((j for j in allowed if orow[j] < 0 and j not in basic), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i in range(nrows):
                a = T[i][enter]
                if a <= 0:
                    continue
                b = T[i][-1]
                if best is None:
                    best = i
                    continue
                bb, ba = T[best][-1], T[best][enter]
                lhs, rhs = b * ba, bb * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
            if best is None:
                return UNBOUNDED
            self.pivot(best, enter)


def maximize(c: Sequence, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    """Exact LP ``max c.y  s.t.  A_ub y <= b_ub, A_eq y = b_eq, y >= 0``.

    Returns ``(status, value, y)`` where value and y are Fractions (None unless
    optimal).  Pivoting follows Bland's rule, which cannot cycle.
    """
    nv = len(c)
    rows = []  # (coeffs over original vars, slack coefficient or None, rhs)
    for a, b in zip(A_ub, b_ub):
        ia, ib = _int_row(a, b)
        rows.append((ia, 1, ib))
    for a, b in zip(A_eq, b_eq):
        ia, ib = _int_row(a, b)
        rows.append((ia, None, ib))
    m = len(rows)
    ns = sum(1 for r in rows if r[1] is not None)
    # flip rows with negative rhs
    norm = []
    for ia, slack, ib in rows:
        if ib < 0:
            ia = [-v for v in ia]
            ib = -ib
            slack = None if slack is None else -1
        norm.append((ia, slack, ib))
    need_art = [i for i, (_, s, _) in enumerate(norm) if s != 1]
    na = len(need_art)
    width = nv + ns + na + 1
    T = []
    basis = []
    si = 0
    ai = 0
    for i, (ia, slack, ib) in enumerate(norm):
        row = [0] * width
        row[:nv] = ia
        if slack is not None:
            row[nv + si] = slack
            if slack == 1:
                basis.append(nv + si)
            si += 1
        if slack != 1:
            row[nv + ns + ai] = 1
            basis.append(nv + ns + ai)
            ai += 1
        row[-1] = ib
        T.append(row)
    ic, _ = _int_row(c, 0)
    obj2 = [-v for v in ic] + [0] * (ns + na + 1)
    obj1 = [0] * width
    for i in need_art:
        for j in range(nv + ns):
            obj1[j] -= T[i][j]
        obj1[-1] -= T[i][-1]
    T.append(obj2)
    T.append(obj1)
    tab = _Tableau(T, basis + [-1, -2])
    art_start = nv + ns
    real_cols = range(art_start)
    if na:
        tab.run(m + 1, range(width - 1), m)
        if tab.T[m + 1][-1] != 0:
            return INFEASIBLE, None, None
        # drive remaining (zero-level) artificials out of the basis
        r = 0
        while r < m:
            if tab.basis[r] >= art_start:
                col = next((j for j in real_cols if tab.T[r][j] != 0), None)
                if col is None:
                    del tab.T[r]
                    del tab.basis[r]
                    m -= 1
                    continue
                tab.pivot(r, col)
            r += 1
    status = tab.run(m, real_cols, m)
    if status != OPTIMAL:
        return status, None, None
    d = tab.d
    y = [Fraction(0)] * nv
    for i in range(m):
        j = tab.basis[i]
        if j < nv:
            y[j] = Fraction(tab.T[i][-1], d)
    # objective row holds -(c_B B^-1 b) convention: value = T[m][-1] / d, rescaled
    value = dot(c, y)
    return OPTIMAL, value, tuple(y)


def _constraint_rows(constraints, n):
    """Split mixed HalfSpace/Hyperplane input into <= rows and = rows."""
    ub, eq = [], []
    for k, con in enumerate(constraints):
        if isinstance(con, Hyperplane):
            if con.dim != n:
                raise ValueError("constraint dimension mismatch")
            eq.append((k, list(con.normal), con.offset))
        elif isinstance(con, HalfSpace):
            h = con.hyperplane
            if h.dim != n:
                raise ValueError("constraint dimension mismatch")
            if con.direction == LE:
                ub.append((k, list(h.normal), h.offset))
            else:
                ub.append((k, [-a for a in h.normal], -h.offset))
        else:
            raise TypeError(f"unsupported constraint {con!r}")
    return ub, eq


def lp_feasible(constraints: Sequence, strict: Iterable[int] = (), nonnegative=False):
    """A rational point satisfying every constraint, or None.

    ``strict`` holds indices of half-space constraints that must hold with
    strict inequality.  Variables are free unless ``nonnegative`` is set.
    """
    constraints = list(constraints)
    if not constraints:
        raise EmptyInput("no constraints")
    first = constraints[0]
    n = first.dim if isinstance(first, Hyperplane) else first.hyperplane.dim
    strict = set(strict)
    ub, eq = _constraint_rows(constraints, n)
    # variables: x (split as x+ - x- unless nonnegative), then t
    nx = n if nonnegative else 2 * n

    def expand(a):
        return list(a) if nonnegative else list(a) + [-v for v in a]

    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for k, a, b in ub:
        A_ub.append(expand(a) + [1 if k in strict else 0])
        b_ub.append(b)
    for k, a, b in eq:
        A_eq.append(expand(a) + [0])
        b_eq.append(b)
    A_ub.append([0] * nx + [1])  # t <= 1 keeps the problem bounded
    b_ub.append(1)
    status, value, y = maximize([0] * nx + [1], A_ub, b_ub, A_eq, b_eq)
    if status != OPTIMAL:
        return None
    if strict and value <= 0:
        return None
    x = y[:n] if nonnegative else tuple(a - b for a, b in zip(y[:n], y[n:nx]))
    return tuple(x)


def hull_membership(vertices: Sequence[Sequence], x: Sequence, strict=False) -> bool:
    """Is x a convex combination of ``vertices`` (with all weights > 0 if strict)?

    Strict membership is exactly membership in the relative interior.
    """
    if len(vertices) == 0:
        raise EmptyInput("hull_membership with no vertices")
    n = len(x)
    if any(len(v) != n for v in vertices):
        raise ValueError("dimension mismatch between vertices and point")
    k = len(vertices)
    # weights lambda_v >= 0 and slack t: lambda_v - t >= 0
    A_eq = [[Fraction(v[i]) for v in vertices] + [0] for i in range(n)]
    b_eq = [Fraction(xi) for xi in x]
    A_eq.append([1] * k + [0])
    b_eq.append(1)
    A_ub = []
    b_ub = []
    if strict:
        for j in range(k):
            row = [0] * (k + 1)
            row[j] = -1
            row[k] = 1
            A_ub.append(row)
            b_ub.append(0)
    A_ub.append([0] * k + [1])
    b_ub.append(1)
    status, value, _ = maximize([0] * k + [1], A_ub, b_ub, A_eq, b_eq)
    if status != OPTIMAL:
        return False
    return value > 0 if strict else True
