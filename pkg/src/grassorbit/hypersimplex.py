"""The hypersimplex Delta_{n,k}: vertices, facet position, S_n action, duality."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .core_geometry import qvec

INTERIOR = "interior"


class NotInHypersimplex(ValueError):
    pass


class DualityUndefined(ValueError):
    pass


@dataclass(frozen=True)
class HypersimplexVertex:
    J: tuple[int, ...]
    point: tuple[Fraction, ...]


def vertex_point(J: Sequence[int], n: int) -> tuple[Fraction, ...]:
    """Lambda_J: 1 at the (1-based) positions in J, 0 elsewhere."""
    J = set(J)
    return tuple(Fraction(1 if i + 1 in J else 0) for i in range(n))


def vertices(n: int, k: int = 2) -> list[HypersimplexVertex]:
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    return [HypersimplexVertex(J, vertex_point(J, n)) for J in combinations(range(1, n + 1), k)]


def pairs(n: int) -> list[tuple[int, int]]:
    """All pairs i < j of 1..n in lexicographic order (the global pair index)."""
    return list(combinations(range(1, n + 1), 2))


def contains(x: Sequence, k: int = 2) -> bool:
    x = qvec(x)
    return sum(x) == k and all(0 <= v <= 1 for v in x)


@dataclass(frozen=True)
class Facet:
    index: int  # 1-based coordinate
    value: int  # 0 or 1

    def __str__(self):
        return f"x_{self.index}={self.value}"


def boundary_position(x: Sequence, k: int = 2):
    """INTERIOR, or the sorted tuple of every facet x_i=0 / x_i=1 containing x."""
    x = qvec(x)
    if not contains(x, k):
        raise NotInHypersimplex(f"{[str(v) for v in x]} is not in Delta_{{{len(x)},{k}}}")
    facets = []
    for i, v in enumerate(x, start=1):
        if v == 0:
            facets.append(Facet(i, 0))
        elif v == 1:
            facets.append(Facet(i, 1))
    return INTERIOR if not facets else tuple(facets)


@dataclass(frozen=True)
class Permutation:
    """A bijection of 1..n given by its images: i -> images[i-1]."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls(tuple(imgs))

    @classmethod
    def cycle(cls, n: int) -> "Permutation":
        """The n-cycle i -> i+1 (mod n)."""
        return cls(tuple(i % n + 1 for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (self * other)(i) = self(other(i))."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def apply_set(self, S) -> tuple[int, ...]:
        return tuple(sorted(self(i) for i in S))

    def apply_pair(self, p) -> tuple[int, int]:
        a, b = self(p[0]), self(p[1])
        return (a, b) if a < b else (b, a)


def permute(s: Permutation, x: Sequence):
    """Move coordinate i to position s(i), so that s . Lambda_J = Lambda_{s(J)}."""
    if len(x) != s.n:
        raise ValueError("permutation and vector lengths differ")
    y = [None] * s.n
    for i, v in enumerate(x, start=1):
        y[s(i) - 1] = v
    return tuple(y)


def duality(x: Sequence, n: int, k: int) -> tuple[Fraction, ...]:
    """The involution x -> 1 - x of Delta_{2k,k}."""
    if n != 2 * k:
        raise DualityUndefined(f"duality needs n = 2k, got n={n}, k={k}")
    x = qvec(x)
    if len(x) != n or not contains(x, k):
        raise NotInHypersimplex("duality input is not in the hypersimplex")
    return tuple(1 - v for v in x)


def vertex_table(n: int, k: int = 2) -> dict:
    return {
        "n": n,
        "k": k,
        "vertices": [{"J": list(v.J), "x": [int(c) for c in v.point]} for v in vertices(n, k)],
    }


def vertex_table_json(n: int, k: int = 2) -> str:
    return json.dumps(vertex_table(n, k), indent=2)
