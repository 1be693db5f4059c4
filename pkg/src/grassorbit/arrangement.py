"""
The chamber complex of Delta_{n,2} cut by the interior planes sum_S x = 1.

A chamber is a relatively open face of the arrangement restricted to the
hypersimplex.  It is keyed by its boundary flags (which coordinates are
pinned at 0 or 1) and its sign vector (the side of every interior plane).

Enumeration first lists the relatively open faces of Delta itself, then
branches over the planes in canonical order, deciding which of the three
children (+, 0, -) of each region exist.  Two independent deciders are
available: vertex tracking of the region's closure (default) and exact LP
bounds of the plane's linear form over that closure.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from . import core_geometry as geometry
from .admissible import (
    FULL,
    HALFSPACES,
    HYPERPLANE,
    AdmissiblePolytope,
    canonical_side,
    interior_catalogue,
    interior_sets,
)
from .hypersimplex import NotInHypersimplex, Permutation, permute

DEFAULT_MAX_N = 6
SNAP_TOL = 1e-9
WORKERS_ENV = "GRASSORBIT_WORKERS"

FREE = None


class ComplexityGuard(ValueError):
    pass


class LocateError(ValueError):
    pass


@dataclass(frozen=True)
class Chamber:
    n: int
    signs: tuple[int, ...]  # -1, 0, +1 per interior plane
    flags: tuple  # per coordinate: 0, 1 or None (free)
    dim: int
    witness: tuple[Fraction, ...]
    omega: frozenset = frozenset()
    index: int = -1

    @property
    def key(self):
        return (self.flags, self.signs)

    @property
    def id(self) -> str:
        return f"C{self.index}"

    @property
    def interior(self) -> bool:
        return all(f is FREE for f in self.flags)

    def sign_string(self) -> str:
        return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in self.signs)

    def flag_string(self) -> str:
        return "".join("*" if f is FREE else str(f) for f in self.flags)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "signs": self.sign_string(),
            "flags": self.flag_string(),
            "dim": self.dim,
            "interior": self.interior,
            "witness": [str(v) for v in self.witness],
            "omega": sorted(self.omega),
        }


@dataclass(frozen=True)
class FOmegaProfile:
    top_strata: tuple[str, ...]
    q: int


@dataclass
class ChamberComplex:
    n: int
    sets: list[tuple[int, ...]]
    hyperplanes: list[geometry.Hyperplane]
    chambers: list[Chamber]

    def __post_init__(self):
        self._by_key = {c.key: c for c in self.chambers}

    def __len__(self):
        return len(self.chambers)

    def __iter__(self):
        return iter(self.chambers)

    def by_key(self, key) -> Chamber | None:
        return self._by_key.get(key)

    def interior_chambers(self) -> list[Chamber]:
        return [c for c in self.chambers if c.interior]

    def counts_by_dim(self, interior_only=True) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.chambers:
            if interior_only and not c.interior:
                continue
            out[c.dim] = out.get(c.dim, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "hyperplanes": [list(S) for S in self.sets],
            "chambers": [c.to_json() for c in self.chambers],
        }


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def delta_faces(n: int):
    """Relatively open faces of Delta_{n,2} as (flags, witness)."""
    out = []
    idx = range(n)
    for n_one in range(0, 3):
        for ones in combinations(idx, n_one):
            rest = [i for i in idx if i not in ones]
            for n_zero in range(0, len(rest) + 1):
                for zeros in combinations(rest, n_zero):
                    free = [i for i in rest if i not in zeros]
                    f = len(free)
                    if n_one == 2:
                        ok = f == 0
                    else:
                        ok = f >= 3 - n_one
                    if not ok:
                        continue
                    flags = [FREE] * n
                    w = [Fraction(0)] * n
                    for i in ones:
                        flags[i] = 1
                        w[i] = Fraction(1)
                    for i in zeros:
                        flags[i] = 0
                    for i in free:
                        w[i] = Fraction(2 - n_one, f)
                    out.append((tuple(flags), tuple(w)))
    return out


class _Search:
    """Branching over the interior planes inside one face of Delta."""

    def __init__(self, n, sets, flags):
        self.n = n
        self.flags = flags
        self.free = [i for i in range(n) if flags[i] is FREE]
        self.pos = {i: k for k, i in enumerate(self.free)}
        ones = sum(1 for f in flags if f == 1)
        # each plane as (coefficients over free variables, constant)
        self.forms = []
        for S in sets:
            coeffs = [0] * len(self.free)
            const = -1
            for i in S:
                i -= 1
                if flags[i] == 1:
                    const += 1
                elif flags[i] is FREE:
                    coeffs[self.pos[i]] = 1
            self.forms.append((coeffs, const))
        self.total = 2 - ones
        self.sets = sets

    def value(self, k, x):
        S = self.sets[k]
        return sum(x[i - 1] for i in S) - 1

    def extreme(self, k, rows, sense):
        """max (sense=+1) or min (sense=-1) of plane k over the closed region."""
        f = len(self.free)
        coeffs, const = self.forms[k]
        if not any(coeffs):
            return Fraction(const), None
        A_ub = [[1 if j == t else 0 for j in range(f)] for t in range(f)]
        b_ub = [1] * f
        A_eq = [[1] * f]
        b_eq = [self.total]
        for (c, b), s in rows:
            if s > 0:  # c.x + b >= 0
                A_ub.append([-v for v in c])
                b_ub.append(b)
            elif s < 0:
                A_ub.append(list(c))
                b_ub.append(-b)
            else:
                A_eq.append(list(c))
                b_eq.append(-b)
        obj = [sense * v for v in coeffs]
        status, val, y = geometry.maximize(obj, A_ub, b_ub, A_eq, b_eq)
        if status != geometry.OPTIMAL:
            raise RuntimeError("closed region unexpectedly empty")
        point = list(self.base)
        for j, i in enumerate(self.free):
            point[i] = y[j]
        return sense * val + const, tuple(point)

    def run(self, witness):
        self.base = [Fraction(1) if f == 1 else Fraction(0) for f in self.flags]
        out = []
        self._branch(0, [], [], witness, out)
        return out

    def _branch(self, k, rows, signs, w, out):
        if k == len(self.sets):
            out.append((tuple(signs), w))
            return
        form = self.forms[k]
        if not any(form[0]):
            s = (form[1] > 0) - (form[1] < 0)
            self._branch(k + 1, rows, signs + [s], w, out)
            return
        g = self.value(k, w)
        children = []
        if g > 0:
            lo, vmin = self.extreme(k, rows, -1)
            children.append((1, w))
            if lo < 0:
                children.append((0, _on_segment(w, vmin, g / (g - lo))))
                children.append((-1, _on_segment(w, vmin, (g / (g - lo) + 1) / 2)))
        elif g < 0:
            hi, vmax = self.extreme(k, rows, 1)
            children.append((-1, w))
            if hi > 0:
                children.append((0, _on_segment(w, vmax, g / (g - hi))))
                children.append((1, _on_segment(w, vmax, (g / (g - hi) + 1) / 2)))
        else:
            hi, vmax = self.extreme(k, rows, 1)
            lo, vmin = self.extreme(k, rows, -1)
            children.append((0, w))
            if hi > 0:
                children.append((1, _on_segment(w, vmax, Fraction(1, 2))))
            if lo < 0:
                children.append((-1, _on_segment(w, vmin, Fraction(1, 2))))
        for s, wc in sorted(children, key=lambda t: -t[0]):
            self._branch(k + 1, rows + [(form, s)], signs + [s], wc, out)


class _Splitter:
    """Vertex-tracking branching over the interior planes inside one face of Delta.

    The closure of every region is a polytope kept as its vertex list, each
    vertex tagged with the bitmask of inequalities tight at it.  Splitting by a
    plane needs only the plane's values at the vertices plus the crossing
    points of edges, and edges are recognized combinatorially: u, v span an
    edge iff no third vertex is tight on every inequality common to u and v.
    The witness of a region is the centroid of its closure's vertices.
    """

    def __init__(self, n, sets, flags):
        self.n = n
        self.sets = sets
        self.flags = flags
        self.base = 2 * n  # plane k owns bit base + k

    def start(self):
        n, flags = self.n, self.flags
        verts = []
        for i, j in combinations(range(n), 2):
            if flags[i] == 0 or flags[j] == 0:
                continue
            if any(f == 1 for t, f in enumerate(flags) if t not in (i, j)):
                continue
            p = [Fraction(0)] * n
            p[i] = p[j] = Fraction(1)
            mask = 0
            for t in range(n):
                if flags[t] is FREE:
                    mask |= (1 << t) if p[t] == 0 else (1 << (n + t))
            verts.append((tuple(p), mask))
        return verts

    def run(self):
        out = []
        self._branch(0, [], self.start(), out)
        return out

    def _branch(self, k, signs, verts, out):
        if k == len(self.sets):
            out.append((tuple(signs), _centroid([v for v, _ in verts])))
            return
        S = self.sets[k]
        bit = 1 << (self.base + k)
        vals = [sum(p[i - 1] for i in S) - 1 for p, _ in verts]
        pos = [t for t, g in enumerate(vals) if g > 0]
        neg = [t for t, g in enumerate(vals) if g < 0]
        zero = [(verts[t][0], verts[t][1] | bit) for t, g in enumerate(vals) if g == 0]
        if not neg:
            s = 1 if pos else 0
            self._branch(k + 1, signs + [s], [(p, m | bit) if g == 0 else (p, m) for (p, m), g in zip(verts, vals)], out)
            return
        if not pos:
            self._branch(k + 1, signs + [-1], [(p, m | bit) if g == 0 else (p, m) for (p, m), g in zip(verts, vals)], out)
            return
        masks = [m for _, m in verts]
        cross = []
        for a in pos:
            pa, ma = verts[a]
            for b in neg:
                pb, mb = verts[b]
                common = ma & mb
                if any((masks[t] & common) == common for t in range(len(verts)) if t != a and t != b):
                    continue
                lam = vals[a] / (vals[a] - vals[b])
                cross.append((_on_segment(pa, pb, lam), common | bit))
        rim = zero + cross
        self._branch(k + 1, signs + [1], [verts[t] for t in pos] + rim, out)
        self._branch(k + 1, signs + [0], rim, out)
        self._branch(k + 1, signs + [-1], [verts[t] for t in neg] + rim, out)


def _centroid(points):
    m = len(points)
    return tuple(sum(col) / m for col in zip(*points))


def _on_segment(w, v, lam):
    return tuple(a + lam * (b - a) for a, b in zip(w, v))


def _face_dimension(n, flags, sets, signs) -> int:
    rows = [[1] * n]
    for i, f in enumerate(flags):
        if f is not FREE:
            rows.append([1 if j == i else 0 for j in range(n)])
    for S, s in zip(sets, signs):
        if s == 0:
            rows.append([1 if j + 1 in S else 0 for j in range(n)])
    return n - geometry.rank(rows)


def _enumerate_face(args):
    n, sets, flags, witness, method = args
    if method == "lp":
        found = _Search(n, sets, flags).run(witness)
    else:
        found = _Splitter(n, sets, flags).run()
    return [(flags, signs, w, _face_dimension(n, flags, sets, signs)) for signs, w in found]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def omega_requirements(n: int, sets, catalogue: Sequence[AdmissiblePolytope]):
    """Per polytope, the (plane index, sign) pairs that put a chamber in its interior.

    For a half-space sum_S x <= 1 whose canonical plane is the complement,
    sum_S x < 1 reads sum_{S^c} x > 1, hence the sign flip.
    """
    where = {S: k for k, S in enumerate(sets)}
    reqs = []
    for P in catalogue:
        kind = P.system.kind
        if kind == FULL:
            reqs.append((P.id, ()))
        elif kind == HYPERPLANE:
            reqs.append((P.id, ((where[P.system.sets[0]], 0),)))
        elif kind == HALFSPACES:
            need = []
            for S in P.system.sets:
                c = canonical_side(S, n)
                need.append((where[c], -1 if c == tuple(S) else 1))
            reqs.append((P.id, tuple(need)))
    return reqs


def omega_from_signs(n: int, sets, signs, catalogue=None, requirements=None) -> frozenset:
    """Ids of catalogue polytopes whose relative interior contains an interior chamber."""
    if requirements is None:
        requirements = omega_requirements(n, sets, catalogue)
    return frozenset(pid for pid, need in requirements if all(signs[k] == s for k, s in need))


@lru_cache(maxsize=None)
def _build(n: int, method: str = "vertex") -> ChamberComplex:
    sets = interior_sets(n)
    jobs = [(n, sets, flags, w, method) for flags, w in delta_faces(n)]
    workers = _workers()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_enumerate_face, jobs))
    else:
        results = [_enumerate_face(j) for j in jobs]
    reqs = omega_requirements(n, sets, interior_catalogue(n))
    raw = []
    for res in results:
        for flags, signs, w, dim in res:
            interior = all(f is FREE for f in flags)
            omega = omega_from_signs(n, sets, signs, requirements=reqs) if interior else frozenset()
            raw.append((flags, signs, w, dim, omega))
    raw.sort(key=lambda r: (any(f is not FREE for f in r[0]), -r[3], _flag_key(r[0]), tuple(-s for s in r[1])))
    chambers = [Chamber(n, signs, flags, dim, w, omega, k) for k, (flags, signs, w, dim, omega) in enumerate(raw)]
    return ChamberComplex(n, sets, [geometry.Hyperplane.from_set(S, n) for S in sets], chambers)


def _flag_key(flags):
    return tuple(2 if f is FREE else f for f in flags)


def build_complex(n: int, max_n: int = DEFAULT_MAX_N, method: str = "vertex") -> ChamberComplex:
    """All relatively open faces of the arrangement inside Delta_{n,2}.

    ``method`` is "vertex" (vertex-tracking splits, the default) or "lp"
    (interval tests by exact LP); the two are independent and must agree.
    """
    if n < 4:
        raise ValueError(f"chamber complex needs n >= 4, got {n}")
    if n > max_n:
        raise ComplexityGuard(f"n={n} exceeds the configured limit {max_n}")
    if method not in ("vertex", "lp"):
        raise ValueError(f"unknown method {method!r}")
    return _build(n, method)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def _sign(v, tol):
    if tol and abs(v) <= tol:
        return 0
    return (v > 0) - (v < 0)


def chamber_key(n: int, sets, x, tol: float = 0.0):
    """(flags, signs) of a point; floats are snapped with absolute tolerance ``tol``."""
    flags = []
    for v in x:
        if _sign(v, tol) == 0:
            flags.append(0)
        elif _sign(v - 1, tol) == 0:
            flags.append(1)
        else:
            flags.append(FREE)
    signs = tuple(_sign(sum(x[i - 1] for i in S) - 1, tol) for S in sets)
    return tuple(flags), signs


def _is_exact(x) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def locate(cx: ChamberComplex, x) -> Chamber:
    """The chamber containing x (exact for rationals, snapped at SNAP_TOL for floats)."""
    if len(x) != cx.n:
        raise ValueError("point dimension does not match the complex")
    if _is_exact(x):
        x = geometry.qvec(x)
        if sum(x) != 2 or any(v < 0 or v > 1 for v in x):
            raise NotInHypersimplex("point is not in the hypersimplex")
        tol = 0.0
    else:
        x = [float(v) for v in x]
        if abs(sum(x) - 2) > 1e-6 or any(v < -SNAP_TOL or v > 1 + SNAP_TOL for v in x):
            raise NotInHypersimplex("point is not in the hypersimplex")
        tol = SNAP_TOL
    key = chamber_key(cx.n, cx.sets, x, tol)
    ch = cx.by_key(key)
    if ch is None:
        raise LocateError(f"no chamber with flags/signs {key}")
    return ch


def omega_by_membership(chamber: Chamber, catalogue: Sequence[AdmissiblePolytope], point=None) -> frozenset:
    """omega recomputed by strict hull membership of a point of the chamber."""
    x = chamber.witness if point is None else point
    return frozenset(P.id for P in catalogue if geometry.hull_membership(P.points(), x, strict=True))


def omega_of(cx: ChamberComplex, chamber: Chamber, catalogue=None) -> frozenset:
    if catalogue is None:
        return chamber.omega
    if not chamber.interior:
        return frozenset()
    return omega_from_signs(cx.n, cx.sets, chamber.signs, catalogue)


def f_omega_profile(chamber: Chamber, catalogue: Sequence[AdmissiblePolytope] | None = None) -> FOmegaProfile:
    n = chamber.n
    if not chamber.interior:
        raise ValueError("F_omega profiles are defined for interior chambers only")
    by_id = {P.id: P for P in (catalogue or interior_catalogue(n))}
    top = tuple(sorted(pid for pid in chamber.omega if by_id[pid].dim == n - 1))
    q = sum(1 for pid in chamber.omega if by_id[pid].dim == n - 2)
    return FOmegaProfile(top, q)


def second_witness(cx: ChamberComplex, chamber: Chamber) -> tuple[Fraction, ...]:
    """Another relative-interior point, from an LP with a different objective.

    The LP maximizes the slack of every strict condition, so the optimum lies
    strictly inside whenever the chamber is nonempty.
    """
    n = cx.n
    cons = [geometry.Hyperplane([1] * n, 2)]
    strict = []
    for i, f in enumerate(chamber.flags):
        e = geometry.Hyperplane.from_set([i + 1], n, 0)
        if f is FREE:
            strict.append(len(cons))
            cons.append(geometry.HalfSpace(e, geometry.GE))
            strict.append(len(cons))
            cons.append(geometry.HalfSpace(geometry.Hyperplane.from_set([i + 1], n, 1), geometry.LE))
        else:
            cons.append(geometry.Hyperplane.from_set([i + 1], n, f))
    for H, s in zip(cx.hyperplanes, chamber.signs):
        if s == 0:
            cons.append(H)
        else:
            strict.append(len(cons))
            cons.append(geometry.HalfSpace(H, geometry.GE if s > 0 else geometry.LE))
    x = geometry.lp_feasible(cons, strict=strict)
    if x is None:
        raise RuntimeError(f"chamber {chamber.id} has no strict LP point")
    return x


def adjacency(cx: ChamberComplex) -> list[tuple[str, str]]:
    """Pairs of chambers whose sign vectors differ in one place, 0 against +/-."""
    by_key = {c.key: c for c in cx.chambers}
    edges = []
    for c in cx.chambers:
        for k, s in enumerate(c.signs):
            if s != 0:
                continue
            for t in (1, -1):
                other = by_key.get((c.flags, c.signs[:k] + (t,) + c.signs[k + 1 :]))
                if other is not None:
                    edges.append((c.id, other.id))
    return edges


def to_dot(cx: ChamberComplex, interior_only=True) -> str:
    keep = {c.id for c in cx.chambers if c.interior or not interior_only}
    lines = [f"graph chambers_n{cx.n} {{"]
    for c in cx.chambers:
        if c.id in keep:
            lines.append(f'  {c.id} [label="{c.id}\\n{c.sign_string()}\\ndim {c.dim}"];')
    for a, b in adjacency(cx):
        if a in keep and b in keep:
            lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def summary_rows(cx: ChamberComplex) -> list[dict]:
    """Per-dimension counts for the CSV summary."""
    rows = []
    dims = sorted({c.dim for c in cx.chambers}, reverse=True)
    for d in dims:
        inside = [c for c in cx.chambers if c.dim == d and c.interior]
        rows.append(
            {
                "dim": d,
                "interior": len(inside),
                "boundary": sum(1 for c in cx.chambers if c.dim == d and not c.interior),
                "interior_orbits": len(chamber_orbits(cx, d)) if inside else 0,
                "mean_omega": (sum(len(c.omega) for c in inside) / len(inside)) if inside else 0.0,
            }
        )
    return rows


def permute_chamber(cx: ChamberComplex, chamber: Chamber, s: Permutation) -> Chamber:
    return locate(cx, permute(s, chamber.witness))


def chamber_orbits(cx: ChamberComplex, dim: int | None = None, interior_only=True) -> list[list[str]]:
    """S_n orbits of chambers, by union-find over (1 2) and the n-cycle."""
    chosen = [c for c in cx.chambers if (c.interior or not interior_only) and (dim is None or c.dim == dim)]
    parent = {c.id: c.id for c in chosen}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gens = [Permutation.transposition(cx.n, 1, 2), Permutation.cycle(cx.n)]
    for c in chosen:
        for g in gens:
            d = permute_chamber(cx, c, g).id
            ra, rb = find(c.id), find(d)
            if ra != rb:
                parent[max(ra, rb, key=_cid)] = min(ra, rb, key=_cid)
    groups: dict[str, list[str]] = {}
    for c in chosen:
        groups.setdefault(find(c.id), []).append(c.id)
    return sorted(groups.values(), key=lambda g: _cid(g[0]))


def _cid(s: str) -> int:
    return int(s[1:])


def complex_json(cx: ChamberComplex) -> str:
    return json.dumps(cx.to_json(), indent=2)
