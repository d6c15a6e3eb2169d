"""Command line interface, dataset generators, and CSV/JSON input-output.

Subcommands: solve, generate, bench, verify. Exit codes: 1 for unreadable or
malformed input, 2 for invalid size bounds, 3 for the cluster-count cap.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .backends import available_backends, resolve
from .metric_core import (
    BoundsError,
    ClusterCapError,
    DistanceOracle,
    InstanceParseError,
    MetricInstance,
    load_instance,
)
from .oracles import brute_force_optimum, flow_feasible
from .search import ClusteringResult, balanced_kcenter

REPORT_SCHEMA = 1


def make_fig4(delta: float = 0.1) -> np.ndarray:
    """Six collinear points whose left/right pair gaps shrink by delta."""
    if not 0.0 < delta < 2.0:
        raise ValueError(f"delta must be in (0, 2), got {delta}")
    xs = [0.0, 2.0, 4.0 - delta, 6.0 - delta, 8.0 - 2.0 * delta, 8.0 - 2.0 * delta]
    return np.array(xs, dtype=np.float64).reshape(-1, 1)


def make_fig5(l: float = 1.0, r: float = 1.0, h: float = 100.0) -> np.ndarray:
    """Two coincident pairs near the origin plus a distant pair: a seed set
    of size 3 must leave two far points in one ball."""
    if not (0.0 < l < 2.0 * r < h):
        raise ValueError(f"parameters must satisfy 0 < l < 2r < h, got l={l} r={r} h={h}")
    pts = [(0.0, 0.0), (0.0, 0.0), (0.0, l), (0.0, l), (h, 0.0), (h, 2.0 * r)]
    return np.array(pts, dtype=np.float64)


def make_gaussian(n: int, d: int, k: int, spread: float = 0.05, seed: int = 0) -> np.ndarray:
    """n points in d dimensions around k well separated unit-cube centers."""
    if n < 1 or d < 1 or k < 1:
        raise ValueError("n, d, k must be positive")
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, 1.0, size=(k, d))
    which = rng.integers(0, k, size=n)
    return centers[which] + rng.normal(0.0, spread, size=(n, d))


def write_points_csv(path: str, points: np.ndarray) -> None:
    np.savetxt(path, np.asarray(points, dtype=np.float64), delimiter=",", fmt="%.17g")


def read_points_csv(path: str, has_header: bool = False) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1 if has_header else 0)
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InstanceParseError(f"malformed numeric CSV in {path}: {exc}") from exc
    return data


def write_labels_csv(path: str, labels: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("point_index,label\n")
        for i, lab in enumerate(labels):
            fh.write(f"{i},{int(lab)}\n")


def read_labels_csv(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != "point_index,label":
                raise InstanceParseError(f"unexpected labels header {header!r} in {path}")
            pairs = []
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                idx, lab = line.split(",")
                pairs.append((int(idx), int(lab)))
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InstanceParseError(f"malformed labels CSV in {path}: {exc}") from exc
    pairs.sort()
    if [i for i, _ in pairs] != list(range(len(pairs))):
        raise InstanceParseError(f"labels in {path} do not cover point indices 0..n-1")
    return np.array([lab for _, lab in pairs], dtype=np.int64)


@dataclass
class RunReport:
    """The JSON document emitted by `solve` (schema 1)."""

    instance: dict
    params: dict
    seeds: list
    centers: list
    radius: float
    radius2: float
    sizes: list
    counts: dict
    timings: dict
    schema: int = REPORT_SCHEMA
    command: str = "solve"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _build_report(instance: MetricInstance, result: ClusteringResult,
                  params: dict, stats: dict) -> RunReport:
    return RunReport(
        instance={
            "kind": instance.kind,
            "n": instance.n,
            "dim": instance.dim,
            "k": instance.k,
            "lower": instance.lower,
            "upper": instance.upper,
        },
        params=params,
        seeds=[int(s) for s in result.seed_indices],
        centers=[int(c) for c in result.centers],
        radius=result.radius,
        radius2=result.radius2,
        sizes=[int(s) for s in result.sizes],
        counts={
            "tuples_examined": stats.get("tuples_examined", 0),
            "candidate_radii": stats.get("candidate_radii", 0),
            "rounding_adjustments": stats.get("rounding_adjustments", 0),
        },
        timings=stats.get("timings", {}),
    )


def _load_from_args(args) -> MetricInstance:
    data = read_points_csv(args.input, has_header=args.has_header)
    return load_instance(
        data,
        k=args.k,
        lower=args.lower,
        upper=args.upper,
        metric=args.metric,
        allow_large_k=getattr(args, "allow_large_k", False),
    )


def _cmd_solve(args) -> int:
    instance = _load_from_args(args)
    trace: list | None = [] if args.trace_rounding else None
    stats: dict = {}
    result = balanced_kcenter(
        instance,
        first=args.first,
        mode=args.centers_mode,
        threads=args.threads,
        backend=args.backend,
        trace=trace,
        report=stats,
    )
    if trace is not None:
        for entry in trace:
            print(f"rounding: case={entry['case']} delta={entry['delta']} site={entry['site']}",
                  file=sys.stderr)
    params = {
        "first": args.first,
        "centers_mode": args.centers_mode,
        "threads": args.threads,
        "backend": stats.get("backend"),
        "metric": args.metric,
    }
    report = _build_report(instance, result, params, stats)
    if args.output:
        if args.format == "csv":
            write_labels_csv(args.output, result.labels)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(
                    {"schema": REPORT_SCHEMA, "labels": [int(x) for x in result.labels]},
                    indent=2, sort_keys=True))
                fh.write("\n")
    print(report.to_json())
    return 0


def _cmd_generate(args) -> int:
    if args.family == "fig4":
        pts = make_fig4(delta=args.delta)
    elif args.family == "fig5":
        pts = make_fig5(l=args.l, r=args.r, h=args.h)
    else:
        pts = make_gaussian(n=args.n, d=args.d, k=args.k, spread=args.spread, seed=args.seed)
    write_points_csv(args.output, pts)
    print(f"wrote {pts.shape[0]} points ({pts.shape[1]} dims) to {args.output}")
    return 0


def _bench_bounds(n: int, k: int, slack_div: int) -> tuple[int, int]:
    slack = max(1, n // slack_div)
    lower = max(1, n // k - slack)
    upper = min(n, -(-n // k) + slack)
    return lower, upper


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes:
        print("no sizes given", file=sys.stderr)
        return 1
    if args.backend == "both":
        names = ["compiled", "python"]
    elif args.backend == "auto":
        names = [resolve(None)[1]]
    else:
        names = [args.backend]
    for name in names:
        if name == "compiled" and "compiled" not in available_backends():
            print("compiled backend not built; rerun after building the extension",
                  file=sys.stderr)
            return 1
    print(f"{'backend':<10}{'n':>10}{'seconds':>12}{'radius':>16}")
    rows: dict[str, list[tuple[int, float]]] = {name: [] for name in names}
    for name in names:
        for n in sizes:
            pts = make_gaussian(n=n, d=args.d, k=args.k, spread=0.05, seed=args.seed)
            lower, upper = _bench_bounds(n, args.k, args.slack_div)
            instance = load_instance(pts, k=args.k, lower=lower, upper=upper)
            start = time.perf_counter()
            result = balanced_kcenter(instance, threads=args.threads, backend=name)
            elapsed = time.perf_counter() - start
            rows[name].append((n, elapsed))
            print(f"{name:<10}{n:>10}{elapsed:>12.3f}{result.radius:>16.6f}")
    for name in names:
        series = rows[name]
        for (n0, t0), (n1, t1) in zip(series, series[1:]):
            if n1 == 2 * n0 and t0 > 0:
                print(f"{name}: doubling {n0} -> {n1}: time ratio {t1 / t0:.2f}")
    return 0


def _cmd_verify(args) -> int:
    instance = _load_from_args(args)
    with open(args.report, encoding="utf-8") as fh:
        report = json.load(fh)
    labels = read_labels_csv(args.labels)
    failures = 0

    def check(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        status = "ok" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{status}: {name}{suffix}")
        if not ok:
            failures += 1

    n, k = instance.n, instance.k
    centers = [int(c) for c in report["centers"]]
    radius2 = float(report["radius2"])
    check("labels cover all points", labels.shape[0] == n,
          f"{labels.shape[0]} labels for {n} points")
    in_range = bool(np.all((labels >= 1) & (labels <= k)))
    check("labels in 1..k", in_range)
    sizes = np.bincount(labels, minlength=k + 1)[1:]
    check("cluster sizes within bounds",
          bool(np.all(sizes >= instance.lower) and np.all(sizes <= instance.upper)),
          f"sizes={sizes.tolist()} bounds=[{instance.lower},{instance.upper}]")
    table = DistanceOracle(instance).seed_table(centers)
    assigned_d2 = table[np.arange(n), labels - 1]
    check("every point within reported radius of its center",
          bool(np.all(assigned_d2 <= radius2)),
          f"worst={float(assigned_d2.max())!r} radius2={radius2!r}")
    check("flow oracle agrees the radius is feasible",
          flow_feasible(instance, centers, radius2, table=table))
    if args.brute:
        opt_radius, _ = brute_force_optimum(instance)
        radius = float(report["radius"])
        check("radius within 4x of brute-force optimum",
              opt_radius <= radius + 1e-9 <= 4.0 * opt_radius + 2e-9,
              f"optimum={opt_radius!r} radius={radius!r}")
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balanced-kcenter",
        description="Balanced k-center clustering with cluster sizes in [lower, upper].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_args(p):
        p.add_argument("--input", required=True, help="points or distance-matrix CSV")
        p.add_argument("--metric", choices=["coords", "matrix"], default="coords")
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--lower", type=int, required=True)
        p.add_argument("--upper", type=int, required=True)
        p.add_argument("--has-header", action="store_true")
        p.add_argument("--allow-large-k", action="store_true",
                       help="bypass the cluster-count cap (enumeration grows fast)")

    solve = sub.add_parser("solve", help="cluster an instance")
    add_instance_args(solve)
    solve.add_argument("--first", type=int, default=0,
                       help="index of the first farthest-first seed")
    solve.add_argument("--centers-mode", choices=["tuples", "seed-set"], default="tuples")
    solve.add_argument("--output", help="write labels here")
    solve.add_argument("--format", choices=["csv", "json"], default="csv")
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--backend", default=None,
                       help="kernel backend: compiled or python (default: best available)")
    solve.add_argument("--trace-rounding", action="store_true",
                       help="log each fractional-assignment adjustment to stderr")
    solve.set_defaults(func=_cmd_solve)

    gen = sub.add_parser("generate", help="write a synthetic dataset CSV")
    gen.add_argument("--family", choices=["fig4", "fig5", "gaussian"], required=True)
    gen.add_argument("--output", required=True)
    gen.add_argument("--delta", type=float, default=0.1, help="fig4 gap shrink")
    gen.add_argument("--l", type=float, default=1.0, help="fig5 near-pair offset")
    gen.add_argument("--r", type=float, default=1.0, help="fig5 far-pair half-gap")
    gen.add_argument("--h", type=float, default=100.0, help="fig5 horizontal distance")
    gen.add_argument("--n", type=int, default=1000)
    gen.add_argument("--d", type=int, default=2)
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--spread", type=float, default=0.05)
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=_cmd_generate)

    bench = sub.add_parser("bench", help="time the solver across instance sizes")
    bench.add_argument("--sizes", required=True, help="comma separated point counts")
    bench.add_argument("--k", type=int, default=3)
    bench.add_argument("--d", type=int, default=16)
    bench.add_argument("--slack-div", type=int, default=100,
                       help="size-bound slack is n divided by this")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--backend", choices=["auto", "compiled", "python", "both"],
                       default="auto")
    bench.set_defaults(func=_cmd_bench)

    verify = sub.add_parser("verify", help="check a solve report against its instance")
    add_instance_args(verify)
    verify.add_argument("--report", required=True, help="JSON report from solve")
    verify.add_argument("--labels", required=True, help="labels CSV from solve")
    verify.add_argument("--brute", action="store_true",
                        help="also compare against the brute-force optimum (tiny n only)")
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ClusterCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
