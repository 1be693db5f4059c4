from fractions import Fraction as F
from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassorbit.admissible import interior_catalogue, interior_codim2_polytopes, interior_fulldim_polytopes
from grassorbit.arrangement import build_complex, locate
from grassorbit.parameters import (
    A1,
    A2,
    A3,
    A_SET,
    FIXED,
    FULL,
    FULL_LABEL,
    INF,
    ONE,
    PUNCTURED,
    PUNCTURED_A,
    ZERO,
    CP1Point,
    IndeterminatePoint,
    NotAFacet,
    PreconditionFailed,
    actual_descriptor,
    boundary_restriction,
    containment,
    descriptor_singular,
    disjointness,
    fixed,
    main_stratum_descriptor,
    preferred_chart,
    projection_report,
    relation_5,
    tilde_F_x_cover,
    transition_5,
    virtual_descriptor,
)
from grassorbit.pluecker import ChartUnavailable, StratumSignature, all_signatures

from .conftest import interior_points


def zeros(n, *pairs):
    return StratumSignature.from_zeros(n, pairs)


def halfspace(n, *sets):
    return StratumSignature.from_zeros(n, [p for S in sets for p in combinations(S, 2)])


def plane(n, S):
    return StratumSignature(n, frozenset((i, j) for i, j in combinations(range(1, n + 1), 2) if (i in S) != (j in S)))


def labels(desc):
    return [str(desc.labels[f]) for f in desc.factors()]


def test_cp1_points():
    assert CP1Point(2, 4) == CP1Point(1, 2) and CP1Point(5, 0) == INF
    assert CP1Point(0, 3) == ZERO
    with pytest.raises(ValueError):
        CP1Point(0, 0)


def test_label_algebra():
    assert fixed(ZERO).subset_of(FULL_LABEL) and not FULL_LABEL.subset_of(fixed(ZERO))
    assert fixed(ZERO).disjoint_from(PUNCTURED_A) and fixed(ZERO).disjoint_from(fixed(INF))
    assert not PUNCTURED_A.disjoint_from(FULL_LABEL)
    assert fixed(CP1Point(2, 1)).subset_of(PUNCTURED_A)
    assert PUNCTURED_A.to_json() == {"label": "PUNCTURED", "excluded": [[0, 1], [1, 0], [1, 1]]}


@pytest.mark.parametrize("n", range(4, 9))
def test_main_stratum_bookkeeping(n):
    d = main_stratum_descriptor(n)
    assert len(d.labels) == comb(n - 2, 2)
    assert all(lab == PUNCTURED_A for lab in d.labels.values())
    assert d.relations == comb(n - 3, 2)
    assert d.complex_dim == n - 3
    assert actual_descriptor(StratumSignature.full(n)).to_json() == virtual_descriptor(StratumSignature.full(n)).to_json()


def test_main_stratum_json():
    assert main_stratum_descriptor(5).to_json() == {
        "chart": [1, 2],
        "factors": {f: PUNCTURED_A.to_json() for f in ("34", "35", "45")},
        "relations": 1,
        "cdim": 2,
    }


def test_triangle_stratum_in_chart_13():
    sig = zeros(5, (3, 4), (3, 5), (4, 5))
    d = virtual_descriptor(sig, (1, 3))
    assert d.factors() == [(2, 4), (2, 5), (4, 5)]
    assert labels(d) == ["(1:0)", "(1:0)", "CP1"]
    assert d.complex_dim == 1
    assert descriptor_singular(sig, (1, 3)) and descriptor_singular(sig, (1, 2))
    # in chart (1,2) the triangle sits at (1:1)^3 and carries the exceptional component
    d12 = virtual_descriptor(sig, (1, 2))
    assert d12.exceptional == ((3, 4, 5),) and d12.complex_dim == 1
    assert actual_descriptor(sig, (1, 2)).complex_dim == 0


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_remark_stratum_shape(n):
    sig = zeros(n, (1, 3), (1, 4), (3, 4))
    d = virtual_descriptor(sig, (1, 2))
    kinds = [d.labels[f] for f in d.factors()]
    assert sum(lab == FULL_LABEL for lab in kinds) == 1
    assert sum(lab == fixed(INF) for lab in kinds) == 2 * n - 8
    assert sum(lab == PUNCTURED_A for lab in kinds) == comb(n - 4, 2)
    a = actual_descriptor(sig, (1, 2))
    assert set(a.labels) < set(d.labels)


def test_one_zero_coordinate_is_not_singular():
    for n in (4, 5, 6):
        for p in combinations(range(1, n + 1), 2):
            sig = zeros(n, p)
            assert not descriptor_singular(sig)


def test_chart_unavailable():
    with pytest.raises(ChartUnavailable):
        virtual_descriptor(zeros(5, (1, 2)), (1, 2))
    assert preferred_chart(zeros(5, (1, 2))) == (1, 3)


def test_codim2_actual_descriptor_is_a_point():
    for n in (4, 5, 6):
        for P in interior_codim2_polytopes(n):
            a = actual_descriptor(P.sigma)
            assert a.is_point() and a.complex_dim == 0


def test_facet_14_descriptors():
    # x1 + x4 = 1 and both sides, chart (1,2), factor order 34, 35, 45
    assert labels(virtual_descriptor(plane(5, (1, 4)))) == ["(0:1)", "CP1", "(1:0)"]
    # x1 + x4 >= 1 has the zero triangle 235: same virtual space as the facet
    assert labels(virtual_descriptor(halfspace(5, (2, 3, 5)))) == ["(0:1)", "CP1", "(1:0)"]
    assert actual_descriptor(halfspace(5, (2, 3, 5))).is_point()
    assert labels(virtual_descriptor(halfspace(5, (1, 4)))) == ["(0:1)", "CP1_A", "(1:0)"]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_singularity_agrees_with_pluecker_on_every_stratum(n):
    for sig in all_signatures(n):
        assert descriptor_singular(sig) == sig.singular()
        for chart in sig.sorted_pairs()[:3]:
            assert descriptor_singular(sig, chart) == sig.singular()


def test_containment_examples():
    assert containment(halfspace(5, (1, 4)), plane(5, (1, 4)))
    for S in [(1, 2), (1, 3), (1, 4)]:
        Sbar = tuple(i for i in range(1, 5) if i not in S)
        assert containment(halfspace(4, S), plane(4, S))
        assert containment(halfspace(4, Sbar), plane(4, S))
    with pytest.raises(NotAFacet):
        containment(StratumSignature.full(5), plane(5, (1, 4)))
    with pytest.raises(NotAFacet):
        containment(halfspace(5, (2, 3)), plane(5, (1, 4)))


@pytest.mark.parametrize("n", [5, 6])
def test_containment_all_facets(n):
    full = interior_fulldim_polytopes(n)
    for H in interior_codim2_polytopes(n):
        hits = 0
        for P in full:
            try:
                ok = containment(P.sigma, H.sigma)
            except NotAFacet:
                continue
            assert ok, (P.id, H.id)
            hits += 1
        assert hits >= 2


def test_disjointness_examples():
    assert disjointness(halfspace(5, (1, 4)), halfspace(5, (2, 3)))
    assert disjointness(halfspace(6, (1, 2)), halfspace(6, (3, 4)))
    s = halfspace(5, (1, 4))
    assert disjointness(s, s) is False
    with pytest.raises(PreconditionFailed):
        disjointness(halfspace(5, (1, 2, 3)), halfspace(5, (3, 4, 5)))


@pytest.mark.parametrize("n", [4, 5])
def test_disjointness_over_chambers(n):
    cx = build_complex(n)
    sig = {P.id: P.sigma for P in interior_catalogue(n)}
    done = set()
    for c in cx.interior_chambers():
        for a, b in combinations(sorted(c.omega), 2):
            if (a, b) not in done:
                done.add((a, b))
                assert disjointness(sig[a], sig[b]), (a, b)


def test_transition_examples():
    assert transition_5((CP1Point(2, 1), CP1Point(3, 1), CP1Point(3, 2))) == (
        CP1Point(2, 1),
        CP1Point(3, 2),
        CP1Point(3, 4),
    )
    assert transition_5((ZERO, ONE, ZERO)) == (ZERO, INF, INF)
    with pytest.raises(IndeterminatePoint):
        transition_5((ONE, ONE, ONE))


nonzero = st.integers(-9, 9).filter(bool)


@st.composite
def relation_points(draw):
    """Rational triples on c'34 c35 c'45 = c34 c'35 c45 with all entries nonzero."""
    c34, d34, c35, d35, c45 = (F(draw(nonzero), draw(st.integers(1, 5))) for _ in range(5))
    d45 = c34 * d35 * c45 / (d34 * c35)
    return CP1Point(c34, d34), CP1Point(c35, d35), CP1Point(c45, d45)


@given(relation_points())
def test_transition_preserves_relation(p):
    assert relation_5(p)
    if p[0] == ONE and p[1] == ONE:
        with pytest.raises(IndeterminatePoint):
            transition_5(p)
        return
    q = transition_5(p)
    assert relation_5(q)
    r = transition_5(q) if not (q[0] == ONE and q[1] == ONE) else None
    if r is not None:
        assert r[:2] == p[:2]


@given(st.fractions(), st.fractions())
def test_transition_first_coordinates_involutive(a, b):
    if a == 1 or b == 1:
        return
    p = (CP1Point(a, 1), CP1Point(b, 1), ONE)
    first = transition_5((transition_5(p)[0], CP1Point(b, 1), ONE))[0]
    assert first == p[0]


def test_transition_errors_only_at_centre():
    assert relation_5((ONE, ONE, ONE))
    for p in [(ONE, CP1Point(2, 1), CP1Point(2, 1)), (ZERO, ZERO, CP1Point(5, 3)), (INF, ONE, ZERO)]:
        assert relation_5(p)
        transition_5(p)


def test_cover_examples():
    # case 1a: x1+x4 < 1, x2+x3 < 1
    r = tilde_F_x_cover((F(3, 10), F(2, 5), F(2, 5), F(3, 10), F(3, 5)))
    assert r["ok"] and r["points"]["A1"]["stratum"] == "n5:L[14|23]"
    # case 3b: x3+x5 > 1 goes through chart (1,3)
    r = tilde_F_x_cover((F(3, 10), F(3, 10), F(7, 10), F(1, 10), F(3, 5)))
    assert r["ok"] and r["points"]["A3"]["case"] == "b" and r["points"]["A3"]["chart"] == [1, 3]
    assert r["points"]["A3"]["image"] == [[0, 1], [1, 0], [1, 0]]
    # the barycenter lies on no plane x_i + x_j = 1
    r = tilde_F_x_cover((F(2, 5),) * 5)
    assert r["ok"] and r["q"] == 0 and len(r["omega"]) == 26
    with pytest.raises(NotImplementedError):
        tilde_F_x_cover((F(1, 3),) * 6)
    with pytest.raises(PreconditionFailed):
        tilde_F_x_cover((1, 1, 0, 0, 0))


def test_cover_on_planes():
    r = tilde_F_x_cover((F(3, 10), F(2, 5), F(2, 5), F(3, 10), F(3, 5)))
    assert r["points"]["A2"]["case"] == "plane" and r["points"]["A3"]["case"] == "plane"
    r = tilde_F_x_cover((F(1, 2), F(1, 5), F(2, 5), F(1, 2), F(2, 5)))
    assert r["case"] == "x1+x4=1" and r["ok"]


@given(interior_points(5))
def test_cover_random_points(x):
    assert tilde_F_x_cover(x, complex=build_complex(5))["ok"]


def test_boundary_restriction_examples():
    assert boundary_restriction(main_stratum_descriptor(6), 6) == main_stratum_descriptor(5)
    d = boundary_restriction(main_stratum_descriptor(5), 5)
    assert d.factors() == [(3, 4)] and d.relations == 0 and d.complex_dim == 1
    with pytest.raises(ValueError):
        boundary_restriction(main_stratum_descriptor(5), 1)


@given(st.sampled_from(all_signatures(6)), st.integers(3, 6))
def test_restriction_commutes_with_virtual_descriptor(sig, q):
    chart = preferred_chart(sig)
    if q in chart:
        return
    shift = lambda i: i - 1 if i > q else i  # noqa: E731
    sub = StratumSignature(5, frozenset((shift(i), shift(j)) for i, j in sig.sigma if q not in (i, j)))
    expected = virtual_descriptor(sub, (shift(chart[0]), shift(chart[1])))
    assert boundary_restriction(virtual_descriptor(sig, chart), q) == expected


def test_projection_reports():
    cx = build_complex(4)
    top = next(c for c in cx.interior_chambers() if c.dim == 3)
    rep = projection_report(top)
    assert len(rep["strata"]) == 4 and all(not e["collapsed"] for e in rep["strata"])
    center = locate(cx, (F(1, 2),) * 4)
    rep = projection_report(center)
    assert sum(e["point_stratum"] for e in rep["strata"]) == 3 and len(rep["strata"]) == 4

    cx5 = build_complex(5)
    on14 = locate(cx5, (F(1, 2), F(2, 5), F(3, 10), F(1, 2), F(3, 10)))
    rep = projection_report(on14)
    points = [e for e in rep["strata"] if e["point_stratum"]]
    assert len(points) == 1 and points[0]["stratum"] == "n5:H[14]"
    assert points[0]["virtual_text"] == "(0:1) x CP1 x (1:0)" and points[0]["collapsed"] == ["35"]
