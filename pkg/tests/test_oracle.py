from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grassorbit.admissible import interior_catalogue
from grassorbit.arrangement import build_complex
from grassorbit.oracle import (
    HullTest,
    SampleConfig,
    UnrealizableStratum,
    check_duality,
    check_moment_map,
    check_singularity,
    histograms_consistent,
    moment_images,
    nnls_distance,
    report_json,
    sample_generic,
    sample_stratum,
    verify_chambers,
    verify_polytope,
)
from grassorbit.pluecker import ChartUnavailable, StratumSignature, all_signatures, moment_image, pluecker, signature


def plane(n, S):
    return StratumSignature(n, frozenset((i, j) for i, j in combinations(range(1, n + 1), 2) if (i in S) != (j in S)))


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(5, samples=0)
    with pytest.raises(ValueError):
        SampleConfig(5, seed=-1)


def test_generic_samples():
    cfg = SampleConfig(5, 100, 42)
    a, b = list(sample_generic(cfg)), list(sample_generic(cfg))
    assert len(a) == 100 and all(np.array_equal(x, y) for x, y in zip(a, b))
    assert all(signature(pluecker(M)) == StratumSignature.full(5) for M in a)
    X = moment_images(np.array(a))
    assert np.abs(X.sum(axis=1) - 2).max() <= 1e-12
    assert np.allclose(X, [moment_image(M) for M in a], atol=1e-14)
    assert not np.array_equal(a[0], next(sample_generic(SampleConfig(5, 1, 43))))


def test_stratum_examples():
    sig = plane(5, (1, 4))
    for M in sample_stratum(sig, (1, 2), SampleConfig(5, 20, 1)):
        assert np.allclose(M[:, :2], np.eye(2))
        assert M[0, 2] == 0 and M[1, 3] == 0 and M[0, 4] == 0  # z3 = w4 = z5 = 0
        assert M[0, 3] != 0 and M[1, 2] != 0 and M[1, 4] != 0  # a4, b3, b5 nonzero
    ce = StratumSignature(4, {(1, 2), (1, 4), (2, 3), (3, 4)})
    for M in sample_stratum(ce, (1, 2), SampleConfig(4, 10, 1)):
        assert M[1, 2] == 0 and M[0, 3] == 0 and M[0, 2] != 0 and M[1, 3] != 0
    full = StratumSignature.full(5)
    cfg = SampleConfig(5, 5, 9)
    assert all(np.array_equal(a, b) for a, b in zip(sample_stratum(full, None, cfg), sample_generic(cfg)))


def test_stratum_errors():
    with pytest.raises(UnrealizableStratum):
        next(sample_stratum(StratumSignature(4, {(1, 2), (3, 4)})))
    with pytest.raises(ChartUnavailable):
        next(sample_stratum(plane(5, (1, 4)), (1, 4)))


@settings(max_examples=40)
@given(st.sampled_from(all_signatures(6)), st.integers(0, 2**32))
def test_stratum_signatures_are_exact(sig, seed):
    for M in sample_stratum(sig, None, SampleConfig(6, 3, seed)):
        P = pluecker(M)
        assert signature(P, zero_tol=0.0) == sig


def test_verify_polytope_examples():
    cat4, cat5 = interior_catalogue(4), interior_catalogue(5)
    r = verify_polytope(plane(4, (1, 2)), cat4, SampleConfig(4, 300, 3))
    assert r["passed"] and r["max_distance"] <= 1e-9
    for M in sample_stratum(plane(4, (1, 2)), None, SampleConfig(4, 50, 3)):
        x = moment_image(M)
        assert abs(x[0] + x[1] - 1) <= 1e-9
    half = StratumSignature.from_zeros(5, [(1, 4)])
    assert verify_polytope(half, cat5, SampleConfig(5, 300, 4))["passed"]
    for M in sample_stratum(half, None, SampleConfig(5, 100, 4)):
        x = moment_image(M)
        assert x[0] + x[3] <= 1 + 1e-12
    with pytest.raises(KeyError):
        verify_polytope(StratumSignature(5, {(1, 2)}), cat5, SampleConfig(5, 1))


def test_nnls_and_hull_test_agree():
    P = next(p for p in interior_catalogue(5) if p.id == "n5:L[14]")
    V = np.array([[float(v) for v in q] for q in P.points()])
    hull = HullTest(V)
    X = moment_images(np.array(list(sample_generic(SampleConfig(5, 400, 5)))))
    inside = hull.interior(X)
    dist = np.array([nnls_distance(V, x) for x in X])
    assert np.all(inside == (X[:, 0] + X[:, 3] < 1))
    assert np.all(dist[inside] <= 1e-9) and np.all(dist[~inside] > 0)


@pytest.mark.parametrize("n", [4, 5])
def test_verify_chambers(n):
    cx = build_complex(n)
    r = verify_chambers(cx, None, SampleConfig(n, 10_000, 42))
    assert r["passed"] and r["mismatches"] == 0 and r["locate_failures"] == 0
    assert r["top_chambers_hit"] == r["top_chambers"]
    assert sum(r["histogram"].values()) == 10_000


def test_histograms_stable_across_seeds():
    cx = build_complex(4)
    a = verify_chambers(cx, None, SampleConfig(4, 5000, 1))["histogram"]
    b = verify_chambers(cx, None, SampleConfig(4, 5000, 2))["histogram"]
    assert histograms_consistent(a, b, 5000)
    skewed = dict(a)
    first = next(iter(skewed))
    skewed[first] += 600
    assert not histograms_consistent(skewed, b, 5000)


def test_reports_are_byte_reproducible(monkeypatch):
    cx = build_complex(4)
    cfg = SampleConfig(4, 2500, 7)
    one = report_json(verify_chambers(cx, None, cfg))
    monkeypatch.setenv("GRASSORBIT_WORKERS", "2")
    two = report_json(verify_chambers(cx, None, cfg))
    assert one == two
    assert report_json(check_moment_map(SampleConfig(5, 200, 7))) == report_json(check_moment_map(SampleConfig(5, 200, 7)))


def test_moment_and_duality_checks():
    assert check_moment_map(SampleConfig(6, 500, 1))["passed"]
    assert check_duality(SampleConfig(4, 500, 1))["passed"]
    with pytest.raises(ValueError):
        check_duality(SampleConfig(5, 10, 1))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_singularity_cross_check(n):
    r = check_singularity(n, seed=3, per_stratum=2)
    assert r["agreement"] == 1.0 and r["passed"]
    if n == 4:
        assert "12,14,23,34" in r["critical_not_singular"]
    else:
        assert r["critical_not_singular"] == []
