"""
Admissible polytopes of Delta_{n,2}.

A polytope is identified with its vertex set, a set of pairs (i, j) standing
for the vertices Lambda_{ij}.  Interior polytopes come in two families:

* codimension two: the slice of Delta by a plane sum_{i in S} x_i = 1;
* full dimension: Delta cut by half-spaces sum_{i in S_m} x_i <= 1 for a
  collection of pairwise disjoint S_m (and Delta itself).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .core_geometry import GE, LE, HalfSpace, Hyperplane, affine_dimension, lp_feasible, nullspace, rank
from .hypersimplex import Permutation, pairs, vertex_point
from .pluecker import StratumSignature

FULL = "full"
HYPERPLANE = "hyperplane"
HALFSPACES = "halfspaces"
BOUNDARY = "boundary"

_TYPE_ORDER = {FULL: 0, HALFSPACES: 1, HYPERPLANE: 2, BOUNDARY: 3}


@dataclass(frozen=True)
class System:
    """How a polytope is cut out of Delta_{n,2}."""

    kind: str
    sets: tuple[tuple[int, ...], ...] = ()

    def key(self):
        return (_TYPE_ORDER[self.kind], len(self.sets), self.sets)

    def to_json(self) -> dict:
        return {"type": self.kind, "sets": [list(s) for s in self.sets]}

    def permute(self, s: Permutation) -> "System":
        sets = tuple(sorted(s.apply_set(S) for S in self.sets))
        if self.kind == HYPERPLANE:
            sets = (canonical_side(sets[0], s.n),)
        return System(self.kind, sets)

    def __str__(self):
        if self.kind == FULL:
            return "Delta"
        body = "|".join("".join(map(str, S)) if max(S) < 10 else "-".join(map(str, S)) for S in self.sets)
        return f"{'H' if self.kind == HYPERPLANE else 'L'}[{body}]"


@dataclass(frozen=True)
class AdmissiblePolytope:
    n: int
    vertex_pairs: tuple[tuple[int, int], ...]
    dim: int
    system: System
    embedding: tuple[int, int] | None = field(default=None)  # (q, 0 or 1) for boundary pieces

    @property
    def id(self) -> str:
        tag = "" if self.embedding is None else f"@x{self.embedding[0]}={self.embedding[1]}"
        return f"n{self.n}:{self.system}{tag}"

    @property
    def sigma(self) -> StratumSignature:
        return StratumSignature(self.n, frozenset(self.vertex_pairs))

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertex_pairs)

    def points(self):
        return [vertex_point(p, self.n) for p in self.vertex_pairs]

    def constraints(self) -> list:
        """Half-spaces / hyperplanes cutting this polytope out of Delta_{n,2}."""
        n = self.n
        if self.system.kind == HYPERPLANE:
            return [Hyperplane.from_set(self.system.sets[0], n)]
        if self.system.kind == HALFSPACES:
            return [HalfSpace(Hyperplane.from_set(S, n), LE) for S in self.system.sets]
        if self.system.kind == FULL:
            return []
        raise ValueError("boundary pieces are described by their vertex sets only")

    def to_json(self, orbit: int | None = None) -> dict:
        out = {
            "id": self.id,
            "dim": self.dim,
            "system": self.system.to_json(),
            "vertices": [list(p) for p in self.vertex_pairs],
            "orbit": orbit,
        }
        if self.embedding is not None:
            out["embedding"] = {"q": self.embedding[0], "value": self.embedding[1]}
        return out


def canonical_side(S: Sequence[int], n: int) -> tuple[int, ...]:
    """The representative of {S, complement}: smaller one, lexicographically least on ties."""
    S = tuple(sorted(S))
    comp = tuple(i for i in range(1, n + 1) if i not in S)
    if len(comp) < len(S) or (len(comp) == len(S) and comp < S):
        return comp
    return S


def _check_n(n: int):
    if n < 4:
        raise ValueError(f"admissible polytope enumeration needs n >= 4, got {n}")


def interior_sets(n: int) -> list[tuple[int, ...]]:
    """Canonical index sets S of the interior planes sum_S x = 1."""
    _check_n(n)
    out = []
    for p in range(2, n // 2 + 1):
        for S in combinations(range(1, n + 1), p):
            if canonical_side(S, n) == S:
                out.append(S)
    return out


def interior_hyperplanes(n: int) -> list[Hyperplane]:
    return [Hyperplane.from_set(S, n) for S in interior_sets(n)]


def split_vertices(S, n: int) -> tuple[tuple[int, int], ...]:
    """Pairs with exactly one index in S."""
    S = set(S)
    return tuple(p for p in pairs(n) if (p[0] in S) != (p[1] in S))


def avoid_vertices(sets, n: int) -> tuple[tuple[int, int], ...]:
    """Pairs not contained in any of ``sets``."""
    sets = [set(S) for S in sets]
    return tuple(p for p in pairs(n) if not any(p[0] in S and p[1] in S for S in sets))


@lru_cache(maxsize=None)
def interior_codim2_polytopes(n: int) -> tuple[AdmissiblePolytope, ...]:
    out = []
    for S in interior_sets(n):
        verts = split_vertices(S, n)
        dim = affine_dimension([vertex_point(p, n) for p in verts])
        out.append(AdmissiblePolytope(n, verts, dim, System(HYPERPLANE, (S,))))
    return tuple(out)


def disjoint_collections(n: int):
    """Nonempty collections of pairwise disjoint subsets of 1..n with 2 <= |S| <= n-2.

    Blocks are emitted in increasing order of their least element.
    """
    blocks = [S for p in range(2, n - 1) for S in combinations(range(1, n + 1), p)]
    blocks.sort()

    def extend(start, used, chosen):
        for k in range(start, len(blocks)):
            B = blocks[k]
            if used.isdisjoint(B):
                new = chosen + (B,)
                yield new
                yield from extend(k + 1, used | set(B), new)

    yield from extend(0, set(), ())


@lru_cache(maxsize=None)
def interior_fulldim_polytopes(n: int) -> tuple[AdmissiblePolytope, ...]:
    _check_n(n)
    full = AdmissiblePolytope(n, tuple(pairs(n)), n - 1, System(FULL))
    found: dict[frozenset, AdmissiblePolytope] = {}
    for coll in disjoint_collections(n):
        verts = avoid_vertices(coll, n)
        key = frozenset(verts)
        sys_ = System(HALFSPACES, tuple(sorted(coll)))
        if key in found and found[key].system.key() <= sys_.key():
            continue
        dim = affine_dimension([vertex_point(p, n) for p in verts])
        if dim != n - 1:
            continue
        found[key] = AdmissiblePolytope(n, verts, dim, sys_)
    rest = sorted(found.values(), key=lambda P: P.system.key())
    return (full, *rest)


def interior_catalogue(n: int) -> tuple[AdmissiblePolytope, ...]:
    """Every admissible polytope meeting the interior: full-dimensional first."""
    return interior_fulldim_polytopes(n) + interior_codim2_polytopes(n)


def type_counts(polys) -> dict[tuple[int, int], int]:
    """Histogram keyed by (dim, number of vertices)."""
    hist: dict[tuple[int, int], int] = {}
    for P in polys:
        key = (P.dim, len(P.vertex_pairs))
        hist[key] = hist.get(key, 0) + 1
    return hist


def halfspace_shape(P: AdmissiblePolytope) -> tuple[int, ...]:
    """Sorted block sizes of the defining collection (empty for Delta)."""
    return tuple(sorted(len(S) for S in P.system.sets))


# ---------------------------------------------------------------------------
# S_n orbits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    representative: AdmissiblePolytope
    size: int
    members: tuple[str, ...]


def permute_polytope(P: AdmissiblePolytope, s: Permutation) -> frozenset:
    return frozenset(s.apply_pair(p) for p in P.vertex_pairs)


def sn_orbits(polytopes: Sequence[AdmissiblePolytope]) -> list[Orbit]:
    """Orbits of S_n acting on index sets, by union-find over two generators."""
    polytopes = list(polytopes)
    if not polytopes:
        return []
    n = polytopes[0].n
    if any(P.n != n for P in polytopes):
        raise ValueError("polytopes from different n")
    index = {P.vertex_set: k for k, P in enumerate(polytopes)}
    parent = list(range(len(polytopes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gens = [Permutation.transposition(n, 1, 2), Permutation.cycle(n)]
    for k, P in enumerate(polytopes):
        for g in gens:
            j = index.get(permute_polytope(P, g))
            if j is not None:
                ra, rb = find(k), find(j)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for k in range(len(polytopes)):
        groups.setdefault(find(k), []).append(k)
    orbits = []
    for members in groups.values():
        rep = min((polytopes[k] for k in members), key=lambda P: P.system.key())
        orbits.append(Orbit(rep, len(members), tuple(polytopes[k].id for k in members)))
    orbits.sort(key=lambda o: o.representative.system.key())
    return orbits


def orbit_index(polytopes) -> dict[str, int]:
    return {pid: k for k, o in enumerate(sn_orbits(polytopes)) for pid in o.members}


def hyperplane_orbit_count(n: int) -> int:
    """S_n orbits on the interior planes; computed by orbit enumeration."""
    return len(sn_orbits(interior_codim2_polytopes(n)))


# ---------------------------------------------------------------------------
# The plane families Pi_{ij}
# ---------------------------------------------------------------------------


def pi_ij_planes(n: int, i: int = 1, j: int = 2) -> list[Hyperplane]:
    """Planes through Lambda_ij spanned by adjacent edge directions that meet int Delta.

    The plane for a subset S of the remaining indices is Lambda_ij plus the span
    of e_j - e_s (s in S) and e_i - e_q (q outside S).  Every subset is tried and
    the interior condition is decided by exact LP, so the count is an
    independent check of 2^{n-2} - 2.
    """
    _check_n(n)
    rest = [k for k in range(1, n + 1) if k not in (i, j)]
    base = vertex_point((i, j), n)
    ones = [Fraction(1)] * n
    found: dict[Hyperplane, None] = {}
    for size in range(len(rest) + 1):
        for S in combinations(rest, size):
            dirs = []
            for s in rest:
                v = [Fraction(0)] * n
                if s in S:
                    v[j - 1], v[s - 1] = Fraction(1), Fraction(-1)
                else:
                    v[i - 1], v[s - 1] = Fraction(1), Fraction(-1)
                dirs.append(v)
            if rank(dirs) != n - 2:
                continue
            normals = nullspace(dirs + [ones], n)
            if len(normals) != 1:
                continue
            a = normals[0]
            offset = sum(x * y for x, y in zip(a, base))
            plane = Hyperplane(a, offset)
            box = [HalfSpace(Hyperplane.from_set([k], n, 0), GE) for k in range(1, n + 1)]
            box += [HalfSpace(Hyperplane.from_set([k], n, 1), LE) for k in range(1, n + 1)]
            cons = [plane, Hyperplane(ones, 2)] + box
            if lp_feasible(cons, strict=range(2, len(cons))) is None:
                continue
            found[plane.reduced()] = None
    return list(found)


def pi_ij_count(n: int) -> int:
    """|Pi_ij| = 2^{n-2} - 2, cross-checked against direct enumeration."""
    formula = 2 ** (n - 2) - 2
    direct = len(pi_ij_planes(n))
    if direct != formula:
        raise AssertionError(f"Pi_ij enumeration gives {direct}, formula gives {formula}")
    return formula


# ---------------------------------------------------------------------------
# Boundary pieces
# ---------------------------------------------------------------------------


def _faces_of_simplex(labels, n, q, value) -> list[AdmissiblePolytope]:
    out = []
    for size in range(1, len(labels) + 1):
        for verts in combinations(labels, size):
            verts = tuple(sorted(verts))
            dim = affine_dimension([vertex_point(p, n) for p in verts])
            sys_ = System(BOUNDARY, tuple(tuple(p) for p in verts))
            out.append(AdmissiblePolytope(n, verts, dim, sys_, (q, value)))
    return out


def boundary_polytopes(n: int, q: int, value: int) -> list[AdmissiblePolytope]:
    """Admissible polytopes of the facet x_q = value of Delta_{n,2}.

    x_q = 0 is a copy of Delta_{n-1,2}: its interior catalogue re-indexed
    (for n = 4 the facet is a triangle and every face is returned).
    x_q = 1 is the simplex on the vertices Lambda_{qj}: every face is returned.
    """
    _check_n(n)
    if not 1 <= q <= n:
        raise ValueError(f"q must lie in 1..{n}, got {q}")
    if value not in (0, 1):
        raise ValueError("facet value must be 0 or 1")
    others = [k for k in range(1, n + 1) if k != q]
    if value == 1:
        return _faces_of_simplex([tuple(sorted((q, j))) for j in others], n, q, 1)
    if n == 4:
        return _faces_of_simplex(list(combinations(others, 2)), n, q, 0)
    relabel = dict(enumerate(others, start=1))
    out = []
    for P in interior_catalogue(n - 1):
        verts = tuple(sorted((relabel[a], relabel[b]) for a, b in P.vertex_pairs))
        sets = tuple(tuple(relabel[k] for k in S) for S in P.system.sets)
        out.append(AdmissiblePolytope(n, verts, P.dim, System(P.system.kind, sets), (q, 0)))
    return out


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def catalogue_dict(n: int, dim: int | None = None) -> dict:
    polys = interior_catalogue(n)
    orbit_of = {}
    for pid, k in orbit_index(interior_fulldim_polytopes(n)).items():
        orbit_of[pid] = k
    offset = len(set(orbit_of.values()))
    for pid, k in orbit_index(interior_codim2_polytopes(n)).items():
        orbit_of[pid] = offset + k
    chosen = [P for P in polys if dim is None or P.dim == dim]
    return {"n": n, "polytopes": [P.to_json(orbit_of[P.id]) for P in chosen]}


def catalogue_json(n: int, dim: int | None = None) -> str:
    return json.dumps(catalogue_dict(n, dim), indent=2)


def polytope_by_id(n: int) -> dict[str, AdmissiblePolytope]:
    return {P.id: P for P in interior_catalogue(n)}
