"""
Descriptor-level model of the spaces of parameters F_sigma and the virtual
spaces F~_sigma.

In the chart M_ab a plane is the matrix with identity in columns a, b and
columns (z_i, w_i) elsewhere, so that P^{ai} = w_i and P^{bi} = -z_i.  For
non-chart i < j the orbit parameter is (c_ij : c'_ij) = (z_i w_j : z_j w_i).
Each such factor of (CP^1)^N gets a label:

* both products nonzero and P^{ij} != 0 -> punctured at A = {(1:0),(0:1),(1:1)}
* both products nonzero and P^{ij} == 0 -> the point (1:1)
* exactly one product zero -> the point (1:0) or (0:1)
* both products zero -> the whole CP^1 (virtual space only)

A zero triangle of non-chart indices whose z and w are all nonzero fixes its
three factors at (1:1); in the compactification that point is blown up, so
the virtual space carries an exceptional component there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from . import core_geometry as geometry
from .admissible import AdmissiblePolytope, interior_catalogue
from .arrangement import locate
from .hypersimplex import pairs
from .pluecker import ChartUnavailable, StratumSignature

FIXED = "FIXED"
FULL = "FULL"
PUNCTURED = "PUNCTURED"


class NotAFacet(ValueError):
    pass


class IndeterminatePoint(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


@dataclass(frozen=True)
class CP1Point:
    """A point (a : b) of CP^1, stored as (a/b : 1) or (1 : 0)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        if a == 0 and b == 0:
            raise ValueError("(0:0) is not a point of CP^1")
        if b == 0:
            a = Fraction(1)
        else:
            a, b = a / b, Fraction(1)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def pair(self) -> list[int | str]:
        return [_num(self.a), _num(self.b)]

    def __str__(self):
        return f"({self.a}:{self.b})"


def _num(q: Fraction):
    return q.numerator if q.denominator == 1 else str(q)


ZERO = CP1Point(0, 1)  # (0:1)
INF = CP1Point(1, 0)  # (1:0)
ONE = CP1Point(1, 1)  # (1:1)
A_SET = frozenset({INF, ZERO, ONE})
B_SET = frozenset({INF, ZERO})


@dataclass(frozen=True)
class FactorLabel:
    kind: str
    point: CP1Point | None = None
    excluded: frozenset = frozenset()

    def __post_init__(self):
        if self.kind == FIXED and self.point is None:
            raise ValueError("FIXED label needs a point")
        if self.kind == PUNCTURED and not self.excluded:
            raise ValueError("PUNCTURED label needs a nonempty excluded set")

    def contains(self, p: CP1Point) -> bool:
        if self.kind == FULL:
            return True
        if self.kind == FIXED:
            return p == self.point
        return p not in self.excluded

    def subset_of(self, other: "FactorLabel") -> bool:
        if other.kind == FULL:
            return True
        if self.kind == FULL:
            return False
        if self.kind == FIXED:
            return other.contains(self.point)
        if other.kind == FIXED:
            return False
        return other.excluded <= self.excluded

    def disjoint_from(self, other: "FactorLabel") -> bool:
        if self.kind == FIXED:
            return not other.contains(self.point)
        if other.kind == FIXED:
            return not self.contains(other.point)
        return False  # CP^1 minus finitely many points always meet

    def to_json(self) -> dict:
        out: dict = {"label": self.kind}
        if self.kind == FIXED:
            out["point"] = self.point.pair()
        elif self.kind == PUNCTURED:
            out["excluded"] = sorted(p.pair() for p in self.excluded)
        return out

    def __str__(self):
        if self.kind == FIXED:
            return str(self.point)
        if self.kind == FULL:
            return "CP1"
        return "CP1_A" if self.excluded == A_SET else "CP1_B" if self.excluded == B_SET else "CP1*"


FULL_LABEL = FactorLabel(FULL)
PUNCTURED_A = FactorLabel(PUNCTURED, excluded=A_SET)


def fixed(p: CP1Point) -> FactorLabel:
    return FactorLabel(FIXED, p)


@dataclass(frozen=True)
class ParamSpaceDescriptor:
    n: int
    chart: tuple[int, int]
    labels: dict = field(hash=False)  # (i, j) -> FactorLabel, i < j non-chart
    relations: int
    complex_dim: int
    virtual: bool
    exceptional: tuple[tuple[int, int, int], ...] = ()

    def factors(self) -> list[tuple[int, int]]:
        return sorted(self.labels)

    def nonfixed(self) -> int:
        return sum(1 for lab in self.labels.values() if lab.kind != FIXED) + len(self.exceptional)

    def is_point(self) -> bool:
        return self.complex_dim == 0 and not self.exceptional and all(lab.kind == FIXED for lab in self.labels.values())

    def contains_point(self, point: Sequence[CP1Point]) -> bool:
        """Membership of a tuple of CP^1 points, one per factor in sorted order."""
        return all(lab.contains(p) for lab, p in zip((self.labels[f] for f in self.factors()), point))

    def describe(self) -> str:
        parts = [str(self.labels[f]) for f in self.factors()]
        parts += [f"E{''.join(map(str, t))}" for t in self.exceptional]
        return " x ".join(parts) if parts else "pt"

    def to_json(self) -> dict:
        out = {
            "chart": list(self.chart),
            "factors": {f"{i}{j}" if self.n < 10 else f"{i}-{j}": self.labels[(i, j)].to_json() for i, j in self.factors()},
            "relations": self.relations,
            "cdim": self.complex_dim,
        }
        if self.exceptional:
            out["exceptional"] = [list(t) for t in self.exceptional]
        return out


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _classes(indices, sigma) -> list[list[int]]:
    """Group indices into parallel classes (P^{ij} = 0 means same class)."""
    groups: list[list[int]] = []
    for i in indices:
        for g in groups:
            if (min(i, g[0]), max(i, g[0])) not in sigma:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _label_cdim(labels: dict) -> int:
    """Complex dimension recovered from labels alone.

    Indices appearing in punctured or (1:1) factors have both chart
    coordinates nonzero; (1:1) factors glue indices into one class.
    """
    parent: dict[int, int] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j), lab in labels.items():
        if lab.kind == PUNCTURED or (lab.kind == FIXED and lab.point == ONE):
            parent.setdefault(i, i)
            parent.setdefault(j, j)
            if lab.kind == FIXED:
                parent[find(i)] = find(j)
    m = len({find(i) for i in parent})
    return max(m - 1, 0)


def _descriptor(sigma: StratumSignature, chart, virtual: bool) -> ParamSpaceDescriptor:
    a, b = sorted(chart)
    n = sigma.n
    if (a, b) not in sigma:
        raise ChartUnavailable(f"P^{{{a}{b}}} vanishes on the stratum; chart ({a},{b}) does not contain it")
    sig = sigma.sigma
    non = [i for i in range(1, n + 1) if i not in (a, b)]
    zc = {i: (min(b, i), max(b, i)) in sig for i in non}
    wc = {i: (min(a, i), max(a, i)) in sig for i in non}
    labels = {}
    for i, j in combinations(non, 2):
        left = zc[i] and wc[j]
        right = zc[j] and wc[i]
        if left and right:
            labels[(i, j)] = PUNCTURED_A if (i, j) in sig else fixed(ONE)
        elif left:
            labels[(i, j)] = fixed(INF)
        elif right:
            labels[(i, j)] = fixed(ZERO)
        elif virtual:
            labels[(i, j)] = FULL_LABEL
    generic = [i for i in non if zc[i] and wc[i]]
    cdim = max(len(_classes(generic, sig)) - 1, 0)
    exceptional: tuple = ()
    if virtual:
        exceptional = tuple(
            t
            for t in combinations(generic, 3)
            if (t[0], t[1]) not in sig and (t[0], t[2]) not in sig and (t[1], t[2]) not in sig
        )
        cdim += sum(1 for lab in labels.values() if lab.kind == FULL) + len(exceptional)
    nonfixed = sum(1 for lab in labels.values() if lab.kind != FIXED) + len(exceptional)
    return ParamSpaceDescriptor(n, (a, b), labels, nonfixed - cdim, cdim, virtual, exceptional)


def preferred_chart(*sigmas: StratumSignature) -> tuple[int, int]:
    """Lexicographically least pair common to every signature."""
    common = set(sigmas[0].sigma)
    for s in sigmas[1:]:
        common &= s.sigma
    if not common:
        raise ChartUnavailable("no Pluecker chart contains all the given strata")
    return min(common)


def main_stratum_descriptor(n: int, chart=(1, 2)) -> ParamSpaceDescriptor:
    if n < 4:
        raise ValueError("need n >= 4")
    return _descriptor(StratumSignature.full(n), chart, virtual=False)


def virtual_descriptor(sigma: StratumSignature, chart=None) -> ParamSpaceDescriptor:
    return _descriptor(sigma, chart or preferred_chart(sigma), virtual=True)


def actual_descriptor(sigma: StratumSignature, chart=None) -> ParamSpaceDescriptor:
    return _descriptor(sigma, chart or preferred_chart(sigma), virtual=False)


def descriptor_singular(sigma: StratumSignature, chart=None) -> bool:
    """True iff the virtual space is strictly bigger than the actual one."""
    v = virtual_descriptor(sigma, chart)
    return any(lab.kind == FULL for lab in v.labels.values()) or bool(v.exceptional)


# ---------------------------------------------------------------------------
# Containment and disjointness
# ---------------------------------------------------------------------------


def _contained(small: ParamSpaceDescriptor, big: ParamSpaceDescriptor) -> bool:
    if small.chart != big.chart:
        raise ValueError("descriptors live in different charts")
    for f, lab in small.labels.items():
        if not lab.subset_of(big.labels[f]):
            return False
    for t in small.exceptional:
        tri = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
        if t not in big.exceptional and not all(big.labels[p].kind == FULL for p in tri):
            return False
    return True


def facet_side(sigma: StratumSignature, facet: StratumSignature) -> tuple[int, ...]:
    """The index set S with P_facet = P_sigma cut by sum_S x = 1; raises NotAFacet."""
    classes = facet.parallel_classes
    if classes is None or len(classes) != 2 or facet.loops:
        raise NotAFacet("the facet stratum is not an interior codimension-two stratum")
    S, T = sorted(classes)
    if len(S) < 2 or len(T) < 2:
        raise NotAFacet("the facet plane does not meet the interior")
    if not facet.sigma <= sigma.sigma:
        raise NotAFacet("facet vertices are not vertices of P_sigma")
    if sigma.polytope_dim != sigma.n - 1:
        raise NotAFacet("P_sigma is not full-dimensional")
    inside_S = any(p[0] in S and p[1] in S for p in sigma.sigma)
    inside_T = any(p[0] in T and p[1] in T for p in sigma.sigma)
    if inside_S and inside_T:
        raise NotAFacet("the plane cuts through the interior of P_sigma")
    return tuple(S)


def containment(sigma: StratumSignature, facet: StratumSignature, chart=None) -> bool:
    """F~_sigma inside F~_facet for a full-dimensional P_sigma with facet P_facet."""
    facet_side(sigma, facet)
    chart = chart or preferred_chart(facet, sigma)
    return _contained(virtual_descriptor(sigma, chart), virtual_descriptor(facet, chart))


def common_interior_point(sigmas: Sequence[StratumSignature]):
    """A rational point in int P_s for every s and in int Delta, or None."""
    n = sigmas[0].n
    blocks = [s.sorted_pairs() for s in sigmas]
    nv = sum(len(b) for b in blocks) + 1  # weights, then t
    t = nv - 1
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    starts = []
    k = 0
    for blk in blocks:
        starts.append(k)
        row = [0] * nv
        for j in range(len(blk)):
            row[k + j] = 1
            lam = [0] * nv
            lam[k + j], lam[t] = -1, 1  # t <= weight
            A_ub.append(lam)
            b_ub.append(0)
        A_eq.append(row)
        b_eq.append(1)
        k += len(blk)

    def coord_row(bi, i):
        row = [0] * nv
        for j, p in enumerate(blocks[bi]):
            if i in p:
                row[starts[bi] + j] = 1
        return row

    for i in range(1, n + 1):
        base = coord_row(0, i)
        for bi in range(1, len(blocks)):
            A_eq.append([x - y for x, y in zip(base, coord_row(bi, i))])
            b_eq.append(0)
        lo = [-v for v in base]
        lo[t] = 1
        A_ub.append(lo)  # t <= x_i
        b_ub.append(0)
        hi = list(base)
        hi[t] = 1
        A_ub.append(hi)  # x_i + t <= 1
        b_ub.append(1)
    cap = [0] * nv
    cap[t] = 1
    A_ub.append(cap)
    b_ub.append(1)
    obj = [0] * nv
    obj[t] = 1
    status, val, y = geometry.maximize(obj, A_ub, b_ub, A_eq, b_eq)
    if status != geometry.OPTIMAL or val <= 0:
        return None
    x = [Fraction(0)] * n
    for j, p in enumerate(blocks[0]):
        for i in p:
            x[i - 1] += y[j]
    return tuple(x)


def disjointness(sigma1: StratumSignature, sigma2: StratumSignature, chart=None) -> bool:
    """Do the virtual spaces of two strata with a common interior point fail to meet?"""
    if sigma1 == sigma2:
        return False
    if common_interior_point([sigma1, sigma2]) is None:
        raise PreconditionFailed("the two polytopes share no interior point of Delta")
    return _labels_clash(sigma1, sigma2, chart)


def _labels_clash(sigma1, sigma2, chart=None) -> bool:
    chart = chart or preferred_chart(sigma1, sigma2)
    d1, d2 = virtual_descriptor(sigma1, chart), virtual_descriptor(sigma2, chart)
    return any(d1.labels[f].disjoint_from(d2.labels[f]) for f in d1.labels)


# ---------------------------------------------------------------------------
# The n = 5 chart transition and the cover of F~_x
# ---------------------------------------------------------------------------


def relation_5(point: Sequence[CP1Point]) -> bool:
    """c'_34 c_35 c'_45 == c_34 c'_35 c_45."""
    (c34, d34), (c35, d35), (c45, d45) = ((p.a, p.b) for p in point)
    return d34 * c35 * d45 == c34 * d35 * c45


def transition_5(point: Sequence[CP1Point]) -> tuple[CP1Point, CP1Point, CP1Point]:
    """The extension to F_5 of the chart change M_12 -> M_13.

    Undefined exactly at the blow-up centre ((1:1),(1:1),(1:1)).
    """
    (c34, d34), (c35, d35), (c45, d45) = ((p.a, p.b) for p in point)
    if c34 == d34 and c35 == d35:
        raise IndeterminatePoint("the blow-up centre ((1:1),(1:1),(1:1)) has no single image")
    first = CP1Point(c34, c34 - d34)
    second = CP1Point(c35, c35 - d35)
    u, v = c35 * (c34 - d34), c34 * (c35 - d35)
    if u == 0 and v == 0:
        # same point written with the relation solved for c35
        if not relation_5(point):
            raise IndeterminatePoint("image undefined off the relation surface")
        u, v = d35 * c45 * (c34 - d34), d34 * d45 * (c35 - d35)
        if u == 0 and v == 0:
            raise IndeterminatePoint("image undefined")
    return first, second, CP1Point(u, v)


A1 = (ZERO, ZERO, INF)
A2 = (ZERO, INF, INF)
A3 = (ZERO, ONE, INF)


def _sig_of_sets(sets, n=5) -> StratumSignature:
    return StratumSignature(n, frozenset(p for p in pairs(n) if not any(p[0] in S and p[1] in S for S in sets)))


def _split_sig(S, n=5) -> StratumSignature:
    S = set(S)
    return StratumSignature(n, frozenset(p for p in pairs(n) if (p[0] in S) != (p[1] in S)))


# (point, test on x, stratum when the test is strict, alternative stratum, chart of alternative)
_COVER_CASES = [
    ("A1", A1, (2, 3), [(1, 4), (2, 3)], [(1, 4, 5)], (1, 2)),
    ("A2", A2, (2, 5), [(1, 4), (2, 5)], [(1, 3, 4)], (1, 2)),
    ("A3", A3, (3, 5), [(1, 4), (3, 5)], [(1, 2, 4)], (1, 3)),
]


def _polytope_id(sets_or_plane, catalogue) -> str | None:
    for P in catalogue:
        if P.vertex_set == frozenset(sets_or_plane.sigma):
            return P.id
    return None


def tilde_F_x_cover(x: Sequence, catalogue: Sequence[AdmissiblePolytope] | None = None, complex=None) -> dict:
    """Check at descriptor level that F~_14 lies in F~_x for an interior x of Delta_{5,2}.

    Follows the case analysis on x_1 + x_4 and, when x_1 + x_4 < 1, on the
    three boundary points A1, A2, A3 of F~_14^-.  Every stratum invoked is
    checked to have x in the interior of its polytope.  With a chamber
    complex the strata over x are read from its chamber, otherwise they are
    found by strict hull membership.
    """
    x = geometry.qvec(x)
    if len(x) != 5:
        raise NotImplementedError("the cover check is implemented for n = 5 only")
    if sum(x) != 2 or any(v <= 0 or v >= 1 for v in x):
        raise PreconditionFailed("x must lie in the interior of Delta_{5,2}")
    catalogue = catalogue or interior_catalogue(5)
    if complex is not None:
        ids = locate(complex, x).omega
        omega = [P for P in catalogue if P.id in ids]
    else:
        omega = [P for P in catalogue if geometry.hull_membership(P.points(), x, strict=True)]
    omega_ids = {P.id for P in omega}
    report: dict = {
        "x": [str(v) for v in x],
        "omega": sorted(omega_ids),
        "q": sum(1 for P in omega if P.dim == 3),
        "points": {},
        "ok": True,
    }

    sigmas = [P.sigma for P in omega]
    # x itself is a common interior point, so only the label clash is left to check
    pair_ok = all(_labels_clash(s, t) for s, t in combinations(sigmas, 2))
    report["pairwise_disjoint"] = pair_ok
    report["ok"] &= pair_ok

    s14 = x[0] + x[3] - 1
    facet = _split_sig((1, 4))
    if s14 >= 0:
        stratum = facet if s14 == 0 else _sig_of_sets([(2, 3, 5)])
        sid = _polytope_id(stratum, catalogue)
        same = virtual_descriptor(stratum, (1, 2)).labels == virtual_descriptor(facet, (1, 2)).labels
        report["case"] = "x1+x4=1" if s14 == 0 else "x1+x4>1"
        report["covering"] = sid
        report["ok"] &= same and sid in omega_ids
        return report

    report["case"] = "x1+x4<1"
    minus = _sig_of_sets([(1, 4)])
    report["ok"] &= _polytope_id(minus, catalogue) in omega_ids
    for name, point, (i, j), below, above, chart in _COVER_CASES:
        s = x[i - 1] + x[j - 1] - 1
        if s < 0:
            stratum, case, ch, target = _sig_of_sets(below), "a", (1, 2), point
        else:
            # on the plane itself the codimension-two stratum lives in the same chart as case b
            stratum = _sig_of_sets(above) if s > 0 else _split_sig((i, j))
            case, ch = ("b" if s > 0 else "plane"), chart
            target = transition_5(point) if ch == (1, 3) else point
        desc = virtual_descriptor(stratum, ch)
        sid = _polytope_id(stratum, catalogue)
        covered = desc.contains_point(target) and sid in omega_ids
        report["points"][name] = {
            "case": case,
            "stratum": sid,
            "chart": list(ch),
            "descriptor": desc.describe(),
            "image": [p.pair() for p in target],
            "covered": covered,
        }
        report["ok"] &= covered
    return report


# ---------------------------------------------------------------------------
# Boundary restriction and the per-chamber projection report
# ---------------------------------------------------------------------------


def boundary_restriction(desc: ParamSpaceDescriptor, q: int) -> ParamSpaceDescriptor:
    """Drop every factor and relation involving q, then re-index to n - 1."""
    if not 1 <= q <= desc.n:
        raise ValueError(f"q must lie in 1..{desc.n}")
    if q in desc.chart:
        raise ValueError("cannot restrict at a chart index")

    def shift(i):
        return i - 1 if i > q else i

    labels = {(shift(i), shift(j)): lab for (i, j), lab in desc.labels.items() if q not in (i, j)}
    exceptional = tuple(tuple(shift(i) for i in t) for t in desc.exceptional if q not in t)
    cdim = _label_cdim(labels)
    if desc.virtual:
        cdim += sum(1 for lab in labels.values() if lab.kind == FULL) + len(exceptional)
    nonfixed = sum(1 for lab in labels.values() if lab.kind != FIXED) + len(exceptional)
    chart = (shift(desc.chart[0]), shift(desc.chart[1]))
    return ParamSpaceDescriptor(desc.n - 1, chart, labels, nonfixed - cdim, cdim, desc.virtual, exceptional)


def projection_report(chamber, catalogue: Sequence[AdmissiblePolytope] | None = None, chart=None) -> dict:
    """For each stratum over the chamber: virtual vs actual descriptor and what collapses."""
    catalogue = catalogue or interior_catalogue(chamber.n)
    by_id = {P.id: P for P in catalogue}
    entries = []
    for pid in sorted(chamber.omega):
        sig = by_id[pid].sigma
        ch = chart if chart is not None and tuple(chart) in sig else preferred_chart(sig)
        v, a = virtual_descriptor(sig, ch), actual_descriptor(sig, ch)
        collapsed = [f"{i}{j}" for (i, j), lab in sorted(v.labels.items()) if (i, j) not in a.labels]
        collapsed += [f"E{''.join(map(str, t))}" for t in v.exceptional]
        entries.append(
            {
                "stratum": pid,
                "dim": by_id[pid].dim,
                "chart": list(ch),
                "virtual": v.to_json(),
                "actual": a.to_json(),
                "virtual_text": v.describe(),
                "actual_text": a.describe(),
                "collapsed": collapsed,
                "point_stratum": by_id[pid].dim == chamber.n - 2,
                "actual_is_point": a.is_point(),
            }
        )
    return {"chamber": chamber.id, "dim": chamber.dim, "strata": entries}
