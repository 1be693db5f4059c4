"""
Floating-point Monte Carlo checks of the exact results.

Samples are i.i.d. standard complex Gaussian 2 x n matrices.  The stream is
cut into fixed-size chunks, chunk c drawing from the substream
``SeedSequence(seed, spawn_key=(c,))``, so the output does not depend on how
many workers process the chunks.

Stratum samples are built with exact zeros: every entry is a small Gaussian
integer times a power of two, so the vanishing minors come out as exact
floating-point zeros.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import nnls
from scipy.spatial import ConvexHull

from .admissible import AdmissiblePolytope, interior_catalogue
from .arrangement import WORKERS_ENV, ChamberComplex, LocateError, locate
from .hypersimplex import NotInHypersimplex, Permutation, pairs
from .parameters import descriptor_singular, preferred_chart
from .pluecker import (
    DEFAULT_ZERO_TOL,
    ChartUnavailable,
    StratumSignature,
    all_signatures,
    dual_plane,
    is_singular,
    moment_image,
    pluecker,
    signature,
)

CHUNK = 1000
COVERAGE_RADIUS = 0.05
MEMBERSHIP_TOL = 1e-9


class UnrealizableStratum(ValueError):
    pass


@dataclass(frozen=True)
class SampleConfig:
    n: int
    samples: int = 10_000
    seed: int = 0
    zero_tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        if self.samples <= 0:
            raise ValueError("samples must be positive")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def _chunks(total: int):
    for c, start in enumerate(range(0, total, CHUNK)):
        yield c, min(CHUNK, total - start)


def generic_batch(n: int, count: int, seed: int, chunk: int) -> np.ndarray:
    rng = _rng(seed, chunk)
    re = rng.standard_normal((count, 2, n))
    im = rng.standard_normal((count, 2, n))
    return (re + 1j * im) / np.sqrt(2)


def sample_generic(config: SampleConfig) -> Iterator[np.ndarray]:
    for c, size in _chunks(config.samples):
        yield from generic_batch(config.n, size, config.seed, c)


def moment_images(batch: np.ndarray) -> np.ndarray:
    """Vectorized moment map for an array of 2 x n matrices."""
    n = batch.shape[2]
    x = np.zeros((batch.shape[0], n))
    total = np.zeros(batch.shape[0])
    for i, j in combinations(range(n), 2):
        w = np.abs(batch[:, 0, i] * batch[:, 1, j] - batch[:, 0, j] * batch[:, 1, i]) ** 2
        x[:, i] += w
        x[:, j] += w
        total += w
    return x / total[:, None]


# ---------------------------------------------------------------------------
# Stratum sampling
# ---------------------------------------------------------------------------


def _gaussian_int(rng, lo=1, hi=4) -> complex:
    while True:
        z = complex(int(rng.integers(-hi, hi + 1)), int(rng.integers(-hi, hi + 1)))
        if abs(z) >= lo:
            return z


def _scalar(rng) -> complex:
    return _gaussian_int(rng) * 2.0 ** int(rng.integers(-8, 9))


def stratum_matrix(sigma: StratumSignature, chart, rng) -> np.ndarray:
    """One matrix in chart form (identity in columns a, b) with signature exactly sigma."""
    classes = sigma.parallel_classes
    if classes is None:
        raise UnrealizableStratum(f"{sigma.label()} violates the Pluecker relations")
    a, b = chart
    if (a, b) not in sigma:
        raise ChartUnavailable(f"chart ({a},{b}) does not contain the stratum")
    M = np.zeros((2, sigma.n), dtype=complex)
    used: set[complex] = set()
    for cls in classes:
        if a in cls:
            direction = (1, 0)
        elif b in cls:
            direction = (0, 1)
        else:
            while True:  # distinct slopes keep different classes independent
                q = _gaussian_int(rng)
                if q not in used:
                    used.add(q)
                    break
            direction = (1, q)
        for i in cls:
            t = 1 if i in (a, b) else _scalar(rng)
            M[0, i - 1] = t * direction[0]
            M[1, i - 1] = t * direction[1]
    return M


def sample_stratum(sigma: StratumSignature, chart=None, config: SampleConfig | None = None) -> Iterator[np.ndarray]:
    config = config or SampleConfig(sigma.n, samples=100)
    if config.n != sigma.n:
        raise ValueError("config.n does not match the signature")
    if sigma == StratumSignature.full(sigma.n):
        yield from sample_generic(config)
        return
    if sigma.parallel_classes is None:
        raise UnrealizableStratum(f"{sigma.label()} violates the Pluecker relations")
    chart = tuple(chart) if chart is not None else preferred_chart(sigma)
    for c, size in _chunks(config.samples):
        rng = _rng(config.seed, c)
        for _ in range(size):
            yield stratum_matrix(sigma, chart, rng)


# ---------------------------------------------------------------------------
# Polytope membership (independent of the exact code paths)
# ---------------------------------------------------------------------------


def nnls_distance(vertices: np.ndarray, x: np.ndarray) -> float:
    """Distance from x to the convex hull of the rows of ``vertices``."""
    A = np.vstack([vertices.T, np.ones(len(vertices))])
    _, res = nnls(A, np.append(x, 1.0))
    return float(res)


class HullTest:
    """Strict interior test for a polytope through scipy's facet equations."""

    def __init__(self, vertices: np.ndarray):
        V = np.asarray(vertices, dtype=float)
        self.origin = V[0]
        D = V[1:] - V[0]
        _, s, vt = np.linalg.svd(D)
        rank = int(np.sum(s > 1e-9))
        self.basis = vt[:rank]
        self.normal_space = vt[rank:]
        coords = D @ self.basis.T
        if rank == 0:
            self.equations = np.zeros((0, 1))
        elif rank == 1:
            lo, hi = coords.min(), coords.max()
            self.equations = np.array([[-1.0, lo], [1.0, -hi]])
        else:
            self.equations = ConvexHull(np.vstack([np.zeros(rank), coords])).equations

    def interior(self, X: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        """Boolean mask of rows of X strictly inside the relative interior."""
        D = X - self.origin
        off = np.abs(D @ self.normal_space.T).max(axis=1) if len(self.normal_space) else np.zeros(len(X))
        Y = D @ self.basis.T
        slack = Y @ self.equations[:, :-1].T + self.equations[:, -1]
        return (off <= tol) & np.all(slack < -tol, axis=1)


def _points(P: AdmissiblePolytope) -> np.ndarray:
    return np.array([[float(v) for v in p] for p in P.points()])


def find_polytope(sigma: StratumSignature, catalogue: Sequence[AdmissiblePolytope]) -> AdmissiblePolytope:
    for P in catalogue:
        if P.vertex_set == sigma.sigma:
            return P
    raise KeyError(f"signature {sigma.label()} is not in the catalogue")


def verify_polytope(sigma: StratumSignature, catalogue: Sequence[AdmissiblePolytope], config: SampleConfig) -> dict:
    P = find_polytope(sigma, catalogue)
    V = _points(P)
    worst, bad = 0.0, []
    nearest = np.full(len(V), np.inf)
    for k, M in enumerate(sample_stratum(sigma, None, config)):
        x = moment_image(M)
        d = nnls_distance(V, x)
        worst = max(worst, d)
        if d > MEMBERSHIP_TOL and len(bad) < 5:
            bad.append({"sample": k, "distance": d, "matrix": _matrix_json(M)})
        nearest = np.minimum(nearest, np.linalg.norm(V - x, axis=1))
    return {
        "config": asdict(config),
        "polytope": P.id,
        "max_distance": worst,
        "passed": not bad,
        "counterexamples": bad,
        "coverage": float(np.mean(nearest <= COVERAGE_RADIUS)),
    }


def _matrix_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


# ---------------------------------------------------------------------------
# Chamber verification
# ---------------------------------------------------------------------------


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _chamber_chunk(args):
    cx, catalogue, seed, chunk, size = args
    tests = [(P.id, HullTest(_points(P))) for P in catalogue]
    X = moment_images(generic_batch(cx.n, size, seed, chunk))
    inside = {pid: t.interior(X) for pid, t in tests}
    hits: dict[str, int] = {}
    mismatches, failures = [], []
    for k, x in enumerate(X):
        try:
            ch = locate(cx, x)
        except (LocateError, NotInHypersimplex) as exc:
            failures.append({"sample": chunk * CHUNK + k, "x": x.tolist(), "error": str(exc)})
            continue
        hits[ch.id] = hits.get(ch.id, 0) + 1
        direct = frozenset(pid for pid, _ in tests if inside[pid][k])
        if direct != ch.omega:
            mismatches.append(
                {
                    "sample": chunk * CHUNK + k,
                    "x": x.tolist(),
                    "chamber": ch.id,
                    "missing": sorted(ch.omega - direct),
                    "extra": sorted(direct - ch.omega),
                }
            )
    return hits, mismatches, failures


def verify_chambers(cx: ChamberComplex, catalogue: Sequence[AdmissiblePolytope] | None, config: SampleConfig) -> dict:
    """Locate every sampled moment image and recompute its omega by hull membership."""
    if config.n != cx.n:
        raise ValueError("config.n does not match the complex")
    catalogue = catalogue or interior_catalogue(cx.n)
    jobs = [(cx, catalogue, config.seed, c, size) for c, size in _chunks(config.samples)]
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_chamber_chunk, jobs))
    else:
        results = [_chamber_chunk(j) for j in jobs]
    hist: dict[str, int] = {}
    mismatches, failures = [], []
    for hits, mm, ff in results:  # merged in chunk order
        for cid, v in hits.items():
            hist[cid] = hist.get(cid, 0) + v
        mismatches += mm
        failures += ff
    top = [c.id for c in cx.interior_chambers() if c.dim == cx.n - 1]
    return {
        "config": asdict(config),
        "samples": config.samples,
        "mismatches": len(mismatches),
        "locate_failures": len(failures),
        "counterexamples": (mismatches + failures)[:10],
        "histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0][1:]))),
        "top_chambers": len(top),
        "top_chambers_hit": sum(1 for cid in top if cid in hist),
        "passed": not mismatches and not failures,
    }


def histograms_consistent(h1: dict, h2: dict, samples: int, sigmas: float = 3.0) -> bool:
    """Two multinomial histograms of equal size agree within ``sigmas`` standard deviations."""
    for cid in set(h1) | set(h2):
        a, b = h1.get(cid, 0), h2.get(cid, 0)
        p = (a + b) / (2 * samples)
        sd = np.sqrt(2 * samples * p * (1 - p))
        if abs(a - b) > sigmas * sd + 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Moment map laws
# ---------------------------------------------------------------------------


def check_moment_map(config: SampleConfig) -> dict:
    """Sum, box, and S_n equivariance errors of the moment map on generic samples."""
    n = config.n
    rng = _rng(config.seed, 2**20)  # separate substream for the permutations
    sum_err = box_err = equi_err = 0.0
    for M in sample_generic(config):
        x = moment_image(M)
        sum_err = max(sum_err, abs(x.sum() - 2))
        box_err = max(box_err, float(max(-x.min(), x.max() - 1, 0.0)))
        perm = rng.permutation(n)
        s = Permutation(tuple(int(p) + 1 for p in perm))
        Mp = np.zeros_like(M)
        for i in range(n):
            Mp[:, s(i + 1) - 1] = M[:, i]
        y = moment_image(Mp)
        expect = np.zeros(n)
        for i in range(n):
            expect[s(i + 1) - 1] = x[i]
        equi_err = max(equi_err, float(np.abs(y - expect).max()))
    return {
        "config": asdict(config),
        "sum_error": sum_err,
        "box_error": box_err,
        "equivariance_error": equi_err,
        "passed": sum_err <= 1e-12 and box_err <= 1e-12 and equi_err <= 1e-12,
    }


def check_duality(config: SampleConfig) -> dict:
    """mu(dual(L)) = 1 - mu(L) at n = 4."""
    if config.n != 4:
        raise ValueError("duality is checked for n = 4")
    worst = 0.0
    for M in sample_generic(config):
        worst = max(worst, float(np.abs(moment_image(dual_plane(M)) - (1 - moment_image(M))).max()))
    return {"config": asdict(config), "max_error": worst, "passed": worst <= 1e-9}


# ---------------------------------------------------------------------------
# Singular / critical cross-checks
# ---------------------------------------------------------------------------


def check_singularity(n: int, seed: int = 0, per_stratum: int = 3) -> dict:
    """Sample every stratum, read back its signature numerically, compare classifiers."""
    disagreements, critical_regular, total = [], [], 0
    for sigma in all_signatures(n):
        cfg = SampleConfig(n, per_stratum, seed)
        for M in sample_stratum(sigma, None, cfg):
            total += 1
            observed = signature(pluecker(M), cfg.zero_tol)
            if observed != sigma:
                disagreements.append({"stratum": sigma.label(), "reason": "signature readback"})
                continue
            s1 = is_singular(observed)
            s2 = descriptor_singular(observed)
            if s1 != s2:
                disagreements.append({"stratum": sigma.label(), "is_singular": s1, "descriptor": s2})
            if observed.critical() and not s1:
                critical_regular.append(sigma.label())
    critical_regular = sorted(set(critical_regular))
    return {
        "n": n,
        "samples": total,
        "agreement": 1 - len(disagreements) / total,
        "disagreements": disagreements[:10],
        "critical_not_singular": critical_regular,
        "passed": not disagreements and (n == 4 or not critical_regular),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
