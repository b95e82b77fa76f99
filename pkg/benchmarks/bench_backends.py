"""Compare the compiled GF(2) kernels against the pure-Python fallback.

Runs three workloads on the active backend: the skew orbit closure
(7560 copies), the batch consistency check over all 7560 complement
configurations, and a coset minimum-weight walk over a rank-22 system.
When the compiled backend is active, the script re-runs itself in a
POLARKS_PURE_PYTHON=1 subprocess and prints a side-by-side table.

Usage: python benchmarks/bench_backends.py [--json]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time

from polarks.context import check_line_sets
from polarks.gf2 import BitMatrix, BitVector, backend_name, coset_min_weight
from polarks.hexagon import orbit_closure, skew_hexagon
from polarks.space import build_polar_space


def bench_orbit(space):
    seed = skew_hexagon(space)
    started = time.perf_counter()
    db = orbit_closure(space, seed)
    elapsed = time.perf_counter() - started
    assert len(db) == 7560
    return elapsed, db


def bench_batch(space, db):
    all_lines = frozenset(range(len(space.lines)))
    sets = [tuple(sorted(all_lines - set(c.lines))) for c in db]
    started = time.perf_counter()
    results = check_line_sets(space, sets)
    elapsed = time.perf_counter() - started
    assert all(r is not None for r in results)
    return elapsed


def bench_gray(rank_target=22, n_cols=40):
    rng = random.Random(2024)
    rows = []
    while True:
        rows = [rng.getrandbits(n_cols) | 1 << rng.randrange(n_cols) for _ in range(rank_target)]
        a = BitMatrix.from_rows(n_cols, rows)
        from polarks.gf2 import rank

        if rank(a) == rank_target:
            break
    b = BitVector(rank_target, rng.getrandbits(rank_target) | 1)
    started = time.perf_counter()
    weight = coset_min_weight(a, b, cap=rank_target)
    elapsed = time.perf_counter() - started
    assert weight >= 0
    return elapsed


def run_all():
    space = build_polar_space(3)
    orbit_time, db = bench_orbit(space)
    batch_time = bench_batch(space, db)
    gray_time = bench_gray()
    return {
        "backend": backend_name(),
        "orbit_closure": orbit_time,
        "batch_consistency": batch_time,
        "coset_walk": gray_time,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print raw numbers only")
    args = parser.parse_args()

    mine = run_all()
    if args.json:
        print(json.dumps(mine))
        return 0

    print(f"active backend: {mine['backend']}")
    for key in ("orbit_closure", "batch_consistency", "coset_walk"):
        print(f"  {key:<20} {mine[key]:8.3f}s")

    if mine["backend"] != "compiled":
        print("compiled backend unavailable; nothing to compare")
        return 0

    env = {**os.environ, "POLARKS_PURE_PYTHON": "1"}
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--json"],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        print(f"pure-python run failed:\n{proc.stderr}", file=sys.stderr)
        return 1
    pure = json.loads(proc.stdout)
    assert pure["backend"] == "python"

    print()
    print(f"{'kernel':<20} {'compiled':>10} {'python':>10} {'speedup':>9}")
    for key in ("orbit_closure", "batch_consistency", "coset_walk"):
        ratio = pure[key] / mine[key] if mine[key] else float("inf")
        print(f"{key:<20} {mine[key]:>9.3f}s {pure[key]:>9.3f}s {ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
