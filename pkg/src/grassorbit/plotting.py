"""PNG figures for the report command (matplotlib, headless backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def chamber_figure(summary: list[dict], histogram: dict[str, int], omega_sizes: dict[str, int], path, n: int) -> None:
    """Left: chamber counts per dimension.  Right: sampled hits of top chambers against |omega|."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4), dpi=100)
    dims = [r["dim"] for r in summary]
    inner = [r["interior"] for r in summary]
    outer = [r["boundary"] for r in summary]
    left.bar(dims, inner, label="interior")
    left.bar(dims, outer, bottom=inner, label="boundary", alpha=0.6)
    left.set_xticks(dims)
    left.set_xlabel("dimension")
    left.set_ylabel("faces")
    left.set_title(f"Chamber complex of Delta({n},2)")
    left.legend()

    ids = sorted(omega_sizes, key=lambda c: int(c[1:]))
    right.scatter([omega_sizes[c] for c in ids], [histogram.get(c, 0) for c in ids], s=12)
    right.set_xlabel("number of strata over the chamber")
    right.set_ylabel("samples landing in the chamber")
    right.set_title("Top-dimensional chambers")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
