"""Command-line front end: ``grassorbit <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import admissible, arrangement, oracle, parameters, pluecker
from .hypersimplex import vertex_table_json

CATALOGUE_MAX_N = 7
CHAMBER_MAX_N = arrangement.DEFAULT_MAX_N

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

# Reference polytope counts: codim-2 as (count, vertices), full-dimensional as
# (count, vertices) per non-trivial type, Delta itself excluded.
GOLDEN = {
    4: {"codim2": [(3, 4)], "full": [(6, 5)]},
    5: {"codim2": [(10, 6)], "full": [(10, 9), (10, 7), (15, 8)]},
    6: {"codim2": [(15, 8), (10, 9)], "full": [(15, 14), (20, 12), (15, 9), (45, 13), (60, 11)]},
}


class UsageError(Exception):
    pass


def _check_n(n: int, limit: int):
    if n < 4:
        raise UsageError(f"--n must be at least 4, got {n}")
    if n > limit:
        raise UsageError(f"--n {n} exceeds the guard limit {limit} for this command")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# polytopes
# ---------------------------------------------------------------------------


def cmd_polytopes(args) -> int:
    _check_n(args.n, args.max_n or CATALOGUE_MAX_N)
    data = admissible.catalogue_dict(args.n, args.dim)
    if args.format == "json":
        text = json.dumps(data, indent=2) + "\n"
    elif args.format == "csv":
        rows = [
            {
                "id": p["id"],
                "dim": p["dim"],
                "type": p["system"]["type"],
                "sets": " ".join("".join(map(str, s)) for s in p["system"]["sets"]),
                "vertices": len(p["vertices"]),
                "orbit": p["orbit"],
            }
            for p in data["polytopes"]
        ]
        text = _csv(rows)
    else:
        raise UsageError("polytopes supports json and csv")
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# chambers
# ---------------------------------------------------------------------------


def chamber_dump(n: int, include_boundary: bool = False) -> dict:
    cx = arrangement.build_complex(n)
    catalogue = admissible.interior_catalogue(n)
    chosen = [c for c in cx.chambers if include_boundary or c.interior]
    keep = {c.id for c in chosen}
    items = []
    for c in chosen:
        item = c.to_json()
        if c.interior:
            prof = arrangement.f_omega_profile(c, catalogue)
            item["profile"] = {"top_strata": list(prof.top_strata), "q": prof.q}
        items.append(item)
    return {
        "n": n,
        "hyperplanes": [list(S) for S in cx.sets],
        "counts": {str(d): v for d, v in cx.counts_by_dim(interior_only=not include_boundary).items()},
        "adjacency": [[a, b] for a, b in arrangement.adjacency(cx) if a in keep and b in keep],
        "chambers": items,
    }


def cmd_chambers(args) -> int:
    _check_n(args.n, args.max_n or CHAMBER_MAX_N)
    if args.format == "dot":
        text = arrangement.to_dot(arrangement.build_complex(args.n), interior_only=not args.all)
    elif args.format == "json":
        text = json.dumps(chamber_dump(args.n, args.all), indent=2) + "\n"
    else:
        dump = chamber_dump(args.n, args.all)
        rows = [
            {
                "id": c["id"],
                "dim": c["dim"],
                "interior": c["interior"],
                "signs": c["signs"],
                "flags": c["flags"],
                "omega_size": len(c["omega"]),
                "top_strata": len(c.get("profile", {}).get("top_strata", [])),
                "q": c.get("profile", {}).get("q", 0),
                "witness": " ".join(c["witness"]),
            }
            for c in dump["chambers"]
        ]
        text = _csv(rows)
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def read_matrix(path: str) -> np.ndarray:
    data = json.loads(Path(path).read_text() if path != "-" else sys.stdin.read())
    if isinstance(data, list):  # bare [[row1], [row2]]
        data = {"rows": data}
    try:
        M = np.array([[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in data["rows"]])
    except (TypeError, KeyError) as exc:
        raise UsageError(f"malformed matrix: {exc}") from None
    if M.ndim != 2 or M.shape[0] != 2 or ("n" in data and M.shape[1] != data["n"]):
        raise UsageError("expected two rows of n complex entries")
    return M


def classify(M: np.ndarray, zero_tol: float = pluecker.DEFAULT_ZERO_TOL) -> dict:
    P = pluecker.pluecker(M)
    sig = pluecker.signature(P, zero_tol)
    n = sig.n
    x = pluecker.moment_map(P)
    out = {
        "n": n,
        "signature": [list(p) for p in sig.sorted_pairs()],
        "critical": pluecker.is_critical(sig),
        "singular": pluecker.is_singular(sig),
        "stabilizer_dim": pluecker.stabilizer_dimension(sig),
        "polytope_dim": sig.polytope_dim,
        "moment_image": [float(v) for v in x],
        "chamber": None,
        "polytope": None,
        "descriptor": None,
    }
    if 4 <= n <= CHAMBER_MAX_N:
        try:
            out["chamber"] = arrangement.locate(arrangement.build_complex(n), x).id
        except (arrangement.LocateError, ValueError):
            pass
    if n >= 4:
        for Q in admissible.interior_catalogue(n):
            if Q.vertex_set == sig.sigma:
                out["polytope"] = Q.id
        out["descriptor"] = {
            "virtual": parameters.virtual_descriptor(sig).to_json(),
            "actual": parameters.actual_descriptor(sig).to_json(),
        }
    return out


def cmd_classify(args) -> int:
    report = classify(read_matrix(args.matrix), args.zero_tol)
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def golden_checks(n: int) -> list[dict]:
    checks = []
    planes = admissible.interior_codim2_polytopes(n)
    full = admissible.interior_fulldim_polytopes(n)
    if n in GOLDEN:
        codim2 = Counter(len(P.vertex_pairs) for P in planes)
        want = GOLDEN[n]["codim2"]
        checks.append(
            {
                "name": "codim-2 polytope counts",
                "passed": dict(codim2) == {v: c for c, v in want} and all(P.dim == n - 2 for P in planes),
                "detail": {"found": {str(v): c for v, c in sorted(codim2.items())}},
            }
        )
        shapes = Counter((admissible.halfspace_shape(P), len(P.vertex_pairs)) for P in full if P.system.sets)
        found = sorted((c, v) for (_, v), c in shapes.items())
        missing = [t for t in GOLDEN[n]["full"] if t not in found]
        extra = [t for t in found if t not in GOLDEN[n]["full"]]
        has_delta = sum(1 for P in full if not P.system.sets) == 1
        checks.append(
            {
                "name": "full-dimensional polytope types",
                "passed": not missing and has_delta,
                "detail": {"found": found, "missing": missing, "additional": extra, "delta": has_delta},
            }
        )
    checks.append(
        {
            "name": "codim-2 vertex formula p(n-p)",
            "passed": all(len(P.vertex_pairs) == len(P.system.sets[0]) * (n - len(P.system.sets[0])) for P in planes),
        }
    )
    if n <= 8:
        checks.append(
            {
                "name": "Pi_ij count 2^(n-2)-2",
                "passed": len(admissible.pi_ij_planes(n)) == 2 ** (n - 2) - 2,
            }
        )
    checks.append(
        {
            "name": "hyperplane orbit count floor(n/2)-1",
            "passed": len(admissible.sn_orbits(planes)) == n // 2 - 1,
        }
    )
    return checks


def verify_run(n: int, seed: int, samples: int) -> dict:
    checks = golden_checks(n)
    cfg = oracle.SampleConfig(n, samples, seed)
    mm = oracle.check_moment_map(cfg)
    checks.append({"name": "moment map sum/box/equivariance", "passed": mm["passed"], "detail": mm})
    if n == 4:
        du = oracle.check_duality(oracle.SampleConfig(4, min(samples, 1000), seed))
        checks.append({"name": "duality mu(dual) = 1 - mu", "passed": du["passed"], "detail": du})
    sg = oracle.check_singularity(n, seed)
    checks.append({"name": "singular/critical cross-check", "passed": sg["passed"], "detail": sg})
    if n <= CHAMBER_MAX_N:
        vc = oracle.verify_chambers(arrangement.build_complex(n), None, cfg)
        vc.pop("histogram")
        checks.append({"name": "chamber partition by sampling", "passed": vc["passed"], "detail": vc})
    return {"n": n, "seed": seed, "samples": samples, "checks": checks, "passed": all(c["passed"] for c in checks)}


def cmd_verify(args) -> int:
    _check_n(args.n, args.max_n or CATALOGUE_MAX_N)
    report = verify_run(args.n, args.seed, args.samples)
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK if report["passed"] else EXIT_FAILED


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def cmd_report(args) -> int:
    from .plotting import chamber_figure

    _check_n(args.n, args.max_n or CHAMBER_MAX_N)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cx = arrangement.build_complex(args.n)
    summary = arrangement.summary_rows(cx)
    for r in summary:
        r["mean_omega"] = f"{r['mean_omega']:.4f}"
    vc = oracle.verify_chambers(cx, None, oracle.SampleConfig(args.n, args.samples, args.seed))
    top = [c for c in cx.interior_chambers() if c.dim == args.n - 1]
    rows = [
        {"id": c.id, "signs": c.sign_string(), "omega_size": len(c.omega), "samples": vc["histogram"].get(c.id, 0)}
        for c in top
    ]
    summary_csv = out / f"chambers_summary_n{args.n}.csv"
    hits_csv = out / f"top_chambers_n{args.n}.csv"
    png = out / f"chambers_n{args.n}.png"
    summary_csv.write_text(_csv(summary))
    hits_csv.write_text(_csv(rows))
    chamber_figure(summary, vc["histogram"], {c.id: len(c.omega) for c in top}, png, args.n)
    print(json.dumps({"csv": [str(summary_csv), str(hits_csv)], "png": str(png), "verified": vc["passed"]}))
    return EXIT_OK if vc["passed"] else EXIT_FAILED


def cmd_vertices(args) -> int:
    _emit(vertex_table_json(args.n, args.k) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grassorbit", description="Torus orbit space of G(n,2): exact combinatorics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=None):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--output", "-o", help="write here instead of stdout")
        sp.add_argument("--max-n", type=int, dest="max_n", help="override the size guard")
        if fmt:
            sp.add_argument("--format", choices=fmt, default=fmt[0])

    sp = sub.add_parser("polytopes", help="admissible polytopes meeting the interior, with S_n orbits")
    common(sp, ["json", "csv"])
    sp.add_argument("--dim", type=int)
    sp.set_defaults(func=cmd_polytopes)

    sp = sub.add_parser("chambers", help="chamber complex dump or adjacency graph")
    common(sp, ["json", "csv", "dot"])
    sp.add_argument("--all", action="store_true", help="include faces on the boundary of Delta")
    sp.set_defaults(func=cmd_chambers)

    sp = sub.add_parser("classify", help="critical/singular classification of a 2 x n matrix")
    sp.add_argument("matrix", help='JSON file {"n":..,"rows":[[[re,im],...],[...]]}, or - for stdin')
    sp.add_argument("--zero-tol", type=float, default=pluecker.DEFAULT_ZERO_TOL, dest="zero_tol")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="golden counts, formulas and Monte Carlo checks")
    common(sp)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--samples", type=int, default=2000)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", help="CSV tables and a PNG figure of the chamber complex")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", default="report")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--max-n", type=int, dest="max_n")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("vertices", help="vertex table of the hypersimplex")
    common(sp)
    sp.add_argument("--k", type=int, default=2)
    sp.set_defaults(func=cmd_vertices)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, arrangement.ComplexityGuard) as exc:
        print(f"grassorbit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (pluecker.DegeneratePlane, ValueError, KeyError, OSError) as exc:
        print(f"grassorbit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
