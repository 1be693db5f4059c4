"""
Grassmann points as 2 x n complex matrices, their Pluecker coordinates,
the moment map, stratum signatures and the critical / singular tests.

Numerics live here (numpy, double precision); every combinatorial question
about a signature is answered exactly through :mod:`grassorbit.core_geometry`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from .core_geometry import affine_dimension
from .hypersimplex import Permutation, pairs, vertex_point

DEFAULT_ZERO_TOL = 1e-10


class DegeneratePlane(ValueError):
    pass


class ChartUnavailable(ValueError):
    pass


def as_matrix(L) -> np.ndarray:
    M = np.asarray(L, dtype=complex)
    if M.ndim != 2 or M.shape[0] != 2 or M.shape[1] < 2:
        raise ValueError(f"expected a 2 x n matrix, got shape {M.shape}")
    return M


@dataclass(frozen=True)
class PlueckerVector:
    """Minors P^{ij}, i < j, stored in the lexicographic pair order."""

    n: int
    values: np.ndarray

    def __getitem__(self, ij) -> complex:
        i, j = ij
        if i == j:
            return 0j
        if i > j:
            return -self.values[_pair_index(self.n, j, i)]
        return self.values[_pair_index(self.n, i, j)]

    def as_dict(self) -> dict:
        return dict(zip(pairs(self.n), self.values))

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.values)))

    def relation_residual(self) -> float:
        """Largest |P^{ij}P^{kl} - P^{ik}P^{jl} + P^{il}P^{jk}| over quadruples."""
        worst = 0.0
        for i, j, k, l in combinations(range(1, self.n + 1), 4):
            r = self[i, j] * self[k, l] - self[i, k] * self[j, l] + self[i, l] * self[j, k]
            worst = max(worst, abs(r))
        return worst


def _pair_index(n: int, i: int, j: int) -> int:
    # position of (i, j), 1 <= i < j <= n, in lexicographic order
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


def pluecker(L) -> PlueckerVector:
    M = as_matrix(L)
    n = M.shape[1]
    vals = np.array([M[0, i - 1] * M[1, j - 1] - M[0, j - 1] * M[1, i - 1] for i, j in pairs(n)])
    if not np.any(vals != 0) or np.max(np.abs(vals)) <= DEFAULT_ZERO_TOL * max(1.0, np.max(np.abs(M)) ** 2):
        raise DegeneratePlane("matrix has rank < 2")
    return PlueckerVector(n, vals)


def moment_map(P: PlueckerVector) -> np.ndarray:
    """x_i = sum_j |P^{ij}|^2 / sum_{p<q} |P^{pq}|^2."""
    w = np.abs(P.values) ** 2
    total = w.sum()
    if total == 0:
        raise DegeneratePlane("all Pluecker coordinates vanish")
    x = np.zeros(P.n)
    for (i, j), wij in zip(pairs(P.n), w):
        x[i - 1] += wij
        x[j - 1] += wij
    return x / total


def moment_image(L) -> np.ndarray:
    return moment_map(pluecker(L))


@dataclass(frozen=True)
class StratumSignature:
    """The set sigma of pairs whose Pluecker coordinate is nonzero."""

    n: int
    sigma: frozenset

    def __post_init__(self):
        sig = frozenset(tuple(sorted(p)) for p in self.sigma)
        if not sig:
            raise ValueError("signature must be nonempty")
        for i, j in sig:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"pair {(i, j)} out of range for n={self.n}")
        object.__setattr__(self, "sigma", sig)

    @classmethod
    def full(cls, n: int) -> "StratumSignature":
        return cls(n, frozenset(pairs(n)))

    @classmethod
    def from_zeros(cls, n: int, zeros: Iterable) -> "StratumSignature":
        """All pairs except ``zeros``."""
        z = {tuple(sorted(p)) for p in zeros}
        return cls(n, frozenset(p for p in pairs(n) if p not in z))

    def __contains__(self, pair) -> bool:
        return tuple(sorted(pair)) in self.sigma

    def __len__(self):
        return len(self.sigma)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.sigma)

    def zeros(self) -> list[tuple[int, int]]:
        return [p for p in pairs(self.n) if p not in self.sigma]

    def permute(self, s: Permutation) -> "StratumSignature":
        return StratumSignature(self.n, frozenset(s.apply_pair(p) for p in self.sigma))

    def label(self) -> str:
        return ",".join(f"{i}{j}" if self.n < 10 else f"{i}-{j}" for i, j in self.sorted_pairs())

    @cached_property
    def loops(self) -> tuple[int, ...]:
        """Indices i with P^{ij} = 0 for every j (zero columns)."""
        hit = {i for p in self.sigma for i in p}
        return tuple(i for i in range(1, self.n + 1) if i not in hit)

    @cached_property
    def parallel_classes(self):
        """Classes of the rank-2 matroid (non-loops, i ~ j iff P^{ij} = 0), or None.

        None means sigma is not the basis set of a rank-2 matroid and hence
        not the signature of any plane.
        """
        live = [i for i in range(1, self.n + 1) if i not in self.loops]
        classes: list[list[int]] = []
        for i in live:
            for c in classes:
                if (min(i, c[0]), max(i, c[0])) not in self.sigma:
                    c.append(i)
                    break
            else:
                classes.append([i])
        if len(classes) < 2:
            return None
        owner = {i: k for k, c in enumerate(classes) for i in c}
        for i, j in combinations(live, 2):
            if ((i, j) in self.sigma) == (owner[i] == owner[j]):
                return None
        return tuple(tuple(c) for c in classes)

    @property
    def realizable(self) -> bool:
        return self.parallel_classes is not None

    def vertex_points(self):
        return [vertex_point(p, self.n) for p in self.sorted_pairs()]

    @cached_property
    def polytope_dim(self) -> int:
        """Exact affine dimension of P_sigma."""
        return affine_dimension(self.vertex_points())

    def zero_row(self) -> int | None:
        return self.loops[0] if self.loops else None

    def zero_triangles(self) -> list[tuple[int, int, int]]:
        sig = self.sigma
        return [
            t
            for t in combinations(range(1, self.n + 1), 3)
            if (t[0], t[1]) not in sig and (t[0], t[2]) not in sig and (t[1], t[2]) not in sig
        ]

    def singular(self) -> bool:
        """Zero Pluecker row, or a zero Pluecker triangle."""
        return bool(self.loops) or bool(self.zero_triangles())

    def critical(self) -> bool:
        return self.polytope_dim < self.n - 1


def signature(P: PlueckerVector, zero_tol: float = DEFAULT_ZERO_TOL) -> StratumSignature:
    cut = zero_tol * P.scale
    return StratumSignature(P.n, frozenset(p for p, v in zip(pairs(P.n), P.values) if abs(v) > cut))


@dataclass(frozen=True)
class PolytopeOfStratum:
    sigma: StratumSignature
    vertices: tuple
    dim: int


def admissible_polytope_of(sigma: StratumSignature) -> PolytopeOfStratum:
    return PolytopeOfStratum(sigma, tuple(sigma.sorted_pairs()), sigma.polytope_dim)


def is_critical(sigma: StratumSignature) -> bool:
    return sigma.critical()


def stabilizer_dimension(sigma: StratumSignature) -> int:
    """Dimension of the stabilizer subtorus: n minus the dimension of P_sigma."""
    return sigma.n - sigma.polytope_dim


def is_singular(P, zero_tol: float = DEFAULT_ZERO_TOL) -> bool:
    """Accepts a PlueckerVector or a StratumSignature."""
    sig = P if isinstance(P, StratumSignature) else signature(P, zero_tol)
    return sig.singular()


def chart_form(L, a: int = 1, b: int = 2, zero_tol: float = DEFAULT_ZERO_TOL) -> np.ndarray:
    """Row-reduce L so that columns a and b form the identity."""
    M = as_matrix(L)
    B = M[:, [a - 1, b - 1]]
    det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    if abs(det) <= zero_tol * max(1.0, float(np.max(np.abs(M))) ** 2):
        raise ChartUnavailable(f"P^{{{a}{b}}} vanishes, chart ({a},{b}) does not contain the plane")
    return np.linalg.solve(B, M)


def dual_plane(L) -> np.ndarray:
    """The orthogonal 2-plane for n = 4, scaled so that |P^J(dual)| = |P^{J^c}(L)|."""
    M = as_matrix(L)
    if M.shape[1] != 4:
        raise ValueError("dual_plane is implemented for n = 4 only")
    p12 = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    R = chart_form(M, 1, 2)
    B = R[:, 2:]
    D = np.hstack([-B.T, np.eye(2)])
    D[0, :] *= p12
    return D


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]


def all_signatures(n: int) -> list[StratumSignature]:
    """Every nonempty stratum of G_{n,2}: a choice of loops plus >= 2 parallel classes."""
    out = []
    for r in range(2, n + 1):
        for live in combinations(range(1, n + 1), r):
            for part in _set_partitions(list(live)):
                if len(part) < 2:
                    continue
                owner = {i: k for k, blk in enumerate(part) for i in blk}
                sig = frozenset((i, j) for i, j in combinations(live, 2) if owner[i] != owner[j])
                out.append(StratumSignature(n, sig))
    return sorted(out, key=lambda s: s.sorted_pairs())
