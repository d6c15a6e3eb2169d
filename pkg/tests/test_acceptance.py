"""End-to-end acceptance gate.

Each test prints one verdict line so a full -s run reads as a checklist.
Random sweeps check the solver against independent oracles: exhaustive
search over bounded partitions, a max-flow reduction, exact rational
arithmetic, and byte comparison of CLI outputs.
"""
import json
import time
from fractions import Fraction

import numpy as np
import pytest

import randsys
from balanced_kcenter import (
    balanced_kcenter,
    brute_force_optimum,
    build_sol,
    flow_feasible,
    fractionalize,
    load_instance,
    round_to_integer,
    solve_sol,
)
from balanced_kcenter.io_cli import main, make_fig4, make_fig5, make_gaussian, write_points_csv
from balanced_kcenter.search import build_context, enumerate_tuples, feasible, min_feasible_radius


def verdict(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"acceptance {num} {name}: {status}{extra}")
    return ok


def test_acceptance_1_tightness():
    start = time.perf_counter()
    inst = load_instance(make_fig4(0.1), k=3, lower=2, upper=2)
    res = balanced_kcenter(inst, first=1)
    opt, _ = brute_force_optimum(inst)
    ratio = res.radius / opt
    elapsed = time.perf_counter() - start
    ok = (res.radius == 3.9
          and 3.9 - 1e-12 <= ratio <= 4.0 + 1e-12
          and elapsed < 1.0)
    assert verdict(1, "tightness on the shrinking-gap line", ok,
                   f"radius={res.radius!r} ratio={ratio:.15f} in {elapsed:.2f}s")


def test_acceptance_2_tuple_search_necessity(tmp_path, capsys):
    start = time.perf_counter()
    inp = str(tmp_path / "fig5.csv")
    write_points_csv(inp, make_fig5(1, 1, 100))
    radii = {}
    for mode in ("tuples", "seed-set"):
        rc = main(["solve", "--input", inp, "--k", "3", "--lower", "2",
                   "--upper", "2", "--first", "0", "--centers-mode", mode])
        assert rc == 0
        radii[mode] = json.loads(capsys.readouterr().out)["radius"]
    elapsed = time.perf_counter() - start
    ok = radii["tuples"] <= 4.0 and radii["seed-set"] >= 99.0 and elapsed < 1.0
    with capsys.disabled():
        assert verdict(2, "tuple search beats the raw seed set", ok,
                       f"tuples={radii['tuples']} seed-set={radii['seed-set']} in {elapsed:.2f}s")


def test_acceptance_3_approximation_sandwich():
    start = time.perf_counter()
    rng = np.random.default_rng(301)
    runs = 0
    worst = 0.0
    pairs_seen = set()

    def one(inst, first):
        nonlocal runs, worst
        res = balanced_kcenter(inst, first=first)
        opt, _ = brute_force_optimum(inst)
        assert opt - 1e-9 <= res.radius <= 4.0 * opt + 1e-9, \
            (inst.n, inst.k, inst.lower, inst.upper, res.radius, opt)
        if opt > 0:
            worst = max(worst, res.radius / opt)
        runs += 1
        pairs_seen.add((inst.k, inst.lower, inst.upper))

    # dedicated sweeps: every valid (lower, upper) pair of a few instances
    for trial in range(6):
        pts = randsys.random_points(rng, n_max=9, n_min=6, d_max=3)
        n = len(pts)
        k = int(rng.integers(2, 4))
        for lower in range(1, n // k + 1):
            for upper in range(-(-n // k), n + 1):
                one(load_instance(pts, k=k, lower=lower, upper=upper),
                    first=int(rng.integers(0, n)))
    # broad random sampling up to the size cap
    while runs < 500:
        pts = randsys.random_points(rng, n_max=12, n_min=4, d_max=3)
        n = len(pts)
        k = int(rng.integers(2, 4))
        lower, upper = randsys.random_bounds(rng, n, k)
        one(load_instance(pts, k=k, lower=lower, upper=upper),
            first=int(rng.integers(0, n)))

    elapsed = time.perf_counter() - start
    ok = runs >= 500 and elapsed < 300.0
    assert verdict(3, "4-approximation sandwich", ok,
                   f"{runs} runs, worst ratio {worst:.3f}, "
                   f"{len(pairs_seen)} (k,L,U) triples in {elapsed:.1f}s")


def test_acceptance_4_flow_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(401)
    trials = feasible_seen = 0
    while trials < 1000:
        if rng.random() < 0.15:
            n = int(rng.integers(80, 201))
            pts = rng.normal(size=(n, int(rng.integers(1, 4))))
        else:
            pts = randsys.random_points(rng, n_max=20, n_min=4)
            n = len(pts)
        k = int(rng.integers(2, 4))
        lower, upper = randsys.random_bounds(rng, n, k)
        inst = load_instance(pts, k=k, lower=lower, upper=upper)
        ctx = build_context(inst, first=int(rng.integers(0, n)))
        cts = list(enumerate_tuples(ctx.seeds))
        values = ctx.radii.values
        for _ in range(8):
            ct = cts[int(rng.integers(0, len(cts)))]
            if rng.random() < 0.3:  # off-candidate radii are legal probes too
                r2 = float(rng.uniform(0, values[-1] * 1.1))
            else:
                r2 = float(values[int(rng.integers(0, len(values)))])
            got = feasible(ct, r2, ctx) is not None
            want = flow_feasible(inst, ct, r2)
            assert got == want, (n, k, lower, upper, ct.centers, r2)
            trials += 1
            feasible_seen += got
    elapsed = time.perf_counter() - start
    ok = trials >= 1000 and elapsed < 120.0
    assert verdict(4, "feasibility equals max-flow verdict", ok,
                   f"{trials} probes ({feasible_seen} feasible) in {elapsed:.1f}s")


def test_acceptance_5_rounding_chain():
    start = time.perf_counter()
    rng = np.random.default_rng(501)
    completed = 0
    attempts = 0
    while completed < 1000 and attempts < 20000:
        attempts += 1
        k = int(rng.integers(2, 5))
        counts = randsys.random_counts(rng, k, max_regions=5)
        n = sum(counts.values())
        lower = int(rng.integers(1, max(1, n // k) + 1))
        upper = int(rng.integers(lower, n + 1))
        sol = solve_sol(build_sol(randsys.make_table(k, counts), lower, upper))
        if sol is None:
            continue
        frac = fractionalize(sol)
        if frac is None:
            continue
        nfrac = len(frac.fractional_items())
        trace = []
        out = round_to_integer(frac, trace=trace)
        assert out.is_integral()
        assert out.is_feasible()
        assert out.region_sums() == {m: Fraction(c) for m, c in counts.items()}
        assert 1 <= len(trace) <= nfrac
        for step in trace:
            assert 0 < step["delta"] < 1
        completed += 1

    # the cyclic fixture must integerize in a single half-step
    H = Fraction(1, 2)
    from balanced_kcenter.sol import SolSolution
    fixture = SolSolution(k=3, lower=1, upper=1,
                          values={(3, 0): H, (3, 1): H, (5, 0): H,
                                  (5, 2): H, (6, 1): H, (6, 2): H})
    trace = []
    out = round_to_integer(fixture, trace=trace)
    fixture_ok = (len(trace) == 1 and trace[0]["case"] == "I"
                  and trace[0]["delta"] == H and out.is_integral())

    elapsed = time.perf_counter() - start
    ok = completed >= 1000 and fixture_ok and elapsed < 60.0
    assert verdict(5, "fractional solutions round to integers", ok,
                   f"{completed} chains, cycle fixture delta=1/2 in {elapsed:.1f}s")


def test_acceptance_6_monotone_binary_search():
    start = time.perf_counter()
    rng = np.random.default_rng(601)
    instances = tuples_checked = 0
    for trial in range(200):
        pts = randsys.random_points(rng, n_max=9, n_min=4)
        n = len(pts)
        k = int(rng.integers(2, 4))
        lower, upper = randsys.random_bounds(rng, n, k)
        inst = load_instance(pts, k=k, lower=lower, upper=upper)
        ctx = build_context(inst, first=int(rng.integers(0, n)))
        for ct in enumerate_tuples(ctx.seeds):
            verdicts = [feasible(ct, float(r2), ctx) is not None
                        for r2 in ctx.radii.values]
            first_true = verdicts.index(True)
            assert all(verdicts[first_true:]), "feasibility must be monotone in r2"
            hit = min_feasible_radius(ct, ctx)
            lin = min_feasible_radius(ct, ctx, method="linear")
            assert hit[0] == lin[0] == float(ctx.radii.values[first_true])
            tuples_checked += 1
        instances += 1
    elapsed = time.perf_counter() - start
    ok = instances == 200 and elapsed < 120.0
    assert verdict(6, "binary search matches full scan", ok,
                   f"{instances} instances, {tuples_checked} tuples in {elapsed:.1f}s")


def test_acceptance_7_near_linear_scaling():
    sizes = [50_000, 100_000, 200_000]
    times = {}
    for n in sizes:
        pts = make_gaussian(n=n, d=16, k=3, seed=0)
        lower = n // 3 - n // 100
        upper = -(-n // 3) + -(-n // 100)
        inst = load_instance(pts, k=3, lower=lower, upper=upper)
        best = None
        for _ in range(2):
            t0 = time.perf_counter()
            balanced_kcenter(inst)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        times[n] = best
    ratios = [times[2 * a] / times[a] for a in sizes[:2]]
    ok = times[200_000] < 10.0 and all(r <= 2.8 for r in ratios)
    assert verdict(7, "near-linear scaling to 200k points", ok,
                   "times " + ", ".join(f"{n // 1000}k={times[n]:.2f}s" for n in sizes)
                   + f"; doubling ratios {ratios[0]:.2f}, {ratios[1]:.2f}")


def test_acceptance_8_thread_determinism(tmp_path, capsys):
    families = {
        "fig4": (["generate", "--family", "fig4"], ["--k", "3", "--lower", "2", "--upper", "2"]),
        "fig5": (["generate", "--family", "fig5"], ["--k", "3", "--lower", "2", "--upper", "2"]),
        "gaussian": (["generate", "--family", "gaussian", "--n", "300", "--d", "4",
                      "--k", "3", "--seed", "29"], ["--k", "3", "--lower", "80", "--upper", "120"]),
    }
    identical = []
    for family, (gen, bounds) in families.items():
        inp = str(tmp_path / f"{family}.csv")
        assert main(gen + ["--output", inp]) == 0
        blobs = []
        for threads in ("1", "2", "8"):
            out = str(tmp_path / f"{family}-{threads}.csv")
            rc = main(["solve", "--input", inp, *bounds,
                       "--threads", threads, "--output", out])
            assert rc == 0
            with open(out, "rb") as fh:
                blobs.append(fh.read())
        identical.append(blobs[0] == blobs[1] == blobs[2])
    capsys.readouterr()
    ok = all(identical)
    with capsys.disabled():
        assert verdict(8, "labels byte-identical across thread counts", ok,
                       f"families {', '.join(families)}")
