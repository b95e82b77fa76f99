"""Command-line front end.

Subcommands:
  space    build W(2N-1,2), print counts, optionally export JSON or DOT
  hexagon  build a hexagon embedding seed with its validation summary
  table1   the four-row census: contextuality verdict for every copy of
           both embeddings and of their complements, with orbit sizes
  check    decide contextuality of a configuration JSON file
  export   DOT incidence graphs and CSV reports

Exit codes are a stable contract: 0/1 carry the verdict for `check`
(0 = not contextual, 1 = contextual), 2 means usage or parse error,
3 a failed geometric construction, 4 a mismatch against the expected
census values, 5 a physically invalid context.

Orbit databases are cached under POLARKS_CACHE_DIR (default
~/.cache/polarks) and reused unless --rebuild is given.  Every command
prints a sha256 digest of its canonical output payload; timing never
enters the digest, so reruns with identical inputs reproduce it.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import hexagon as hx
from .context import (
    Configuration,
    check_line_sets,
    degree as config_degree,
    is_contextual,
    lines_configuration,
)
from .errors import (
    BudgetExceeded,
    CapExceeded,
    ConstructionFailed,
    ImageOffQuadric,
    InvalidContext,
    MalformedObservable,
    PolarksError,
    UnsupportedRank,
)
from .gf2 import DEFAULT_RANK_CAP, backend_name
from .space import PolarSpace, build_polar_space

SAMPLE_SEED = 7919

EXPECTED_CENSUS = (
    ("classical", False, 120),
    ("skew", False, 7560),
    ("complement-classical", False, 120),
    ("complement-skew", True, 7560),
)


@dataclass
class RunManifest:
    command: str
    parameters: dict
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    duration_seconds: float = 0.0
    digest: str = ""

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "duration_seconds": round(self.duration_seconds, 3),
            "digest": self.digest,
        }


def canonical_digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_dir() -> str:
    return os.environ.get(
        "POLARKS_CACHE_DIR",
        os.path.join(os.path.expanduser("~"), ".cache", "polarks"),
    )


def _write_output(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def _finish(
    args, payload, rendered: str, started: float, extra_outputs: tuple = ()
) -> None:
    """Write --out and the manifest, print the digest."""
    digest = canonical_digest(payload)
    manifest = RunManifest(
        command=args.command,
        parameters={
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("command", "func") and v is not None
        },
        outputs=[],
        duration_seconds=time.monotonic() - started,
        digest=digest,
    )
    if getattr(args, "out", None):
        _write_output(args.out, rendered)
        manifest.outputs.append(args.out)
        manifest_path = args.out + ".manifest.json"
        manifest.outputs.extend(extra_outputs)
        _write_output(
            manifest_path, json.dumps(manifest.to_json_dict(), indent=2) + "\n"
        )
    print(f"digest: {digest}")


def _orbit_databases(
    space: PolarSpace, rebuild: bool
) -> tuple[hx.OrbitDatabase, hx.OrbitDatabase]:
    os.makedirs(cache_dir(), exist_ok=True)
    out = []
    for tag, seed_fn in ((hx.CLASSICAL, hx.classical_hexagon), (hx.SKEW, hx.skew_hexagon)):
        path = os.path.join(cache_dir(), f"orbit_{tag}.pkor")
        db = None
        if not rebuild and os.path.exists(path):
            try:
                db = hx.load_orbit(path, space)
            except (PolarksError, OSError, ValueError):
                db = None  # stale or corrupt cache entry: rebuild below
        if db is None:
            db = hx.orbit_closure(space, seed_fn(space))
            hx.save_orbit(db, space, path)
        out.append(db)
    return out[0], out[1]


def cmd_space(args) -> int:
    started = time.monotonic()
    space = build_polar_space(args.qubits)
    print(
        f"W({2 * args.qubits - 1},2): {space.n_points} points, "
        f"{len(space.lines)} lines, {len(space.planes)} planes"
    )
    payload = space.to_json_dict()
    rendered = (
        space.to_dot()
        if args.format == "dot"
        else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    _finish(args, payload, rendered, started)
    return 0


def _copy_dot(space: PolarSpace, copy: hx.HexagonCopy) -> str:
    out = [f"graph hexagon_{copy.embedding_tag} {{"]
    values = sorted(copy.point_values(space))
    for v in values:
        out.append(f'  p{v} [label="{space.labels[v]}"];')
    for k, i in enumerate(copy.lines):
        out.append(f"  l{k} [shape=point];")
        for v in space.lines[i].points:
            out.append(f"  p{v} -- l{k};")
    out.append("}")
    return "\n".join(out)


def cmd_hexagon(args) -> int:
    started = time.monotonic()
    space = build_polar_space(3)
    copy = (
        hx.classical_hexagon(space)
        if args.embedding == hx.CLASSICAL
        else hx.skew_hexagon(space)
    )
    summary = hx.copy_summary(space, copy)
    if not summary["generalized_hexagon"]:
        raise ConstructionFailed(f"seed failed validation: {summary}")
    for key, value in summary.items():
        print(f"{key}: {value}")
    payload = {
        "summary": summary,
        "lines": [list(space.lines[i].points) for i in copy.lines],
        "points": {
            str(v): str(space.labels[v]) for v in sorted(copy.point_values(space))
        },
    }
    rendered = (
        _copy_dot(space, copy)
        if args.format == "dot"
        else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    _finish(args, payload, rendered, started)
    return 0


def _census_rows(space: PolarSpace, args) -> list[dict]:
    dbc, dbs = _orbit_databases(space, getattr(args, "rebuild", False))
    all_lines = frozenset(range(len(space.lines)))
    rng = random.Random(SAMPLE_SEED)
    rows = []
    for name, db in (("classical", dbc), ("skew", dbs)):
        copies = [c.lines for c in db]
        if args.sample is not None and args.sample < len(copies):
            copies = rng.sample(copies, args.sample)
        comps = [tuple(sorted(all_lines - set(c))) for c in copies]
        direct = check_line_sets(space, copies, workers=args.workers)
        comp = check_line_sets(space, comps, workers=args.workers)
        rows.append(
            {
                "geometry": name,
                "contextual": any(r is not None for r in direct),
                "copies": len(db),
                "checked": len(copies),
                "contextual_count": sum(r is not None for r in direct),
            }
        )
        rows.append(
            {
                "geometry": f"complement-{name}",
                "contextual": all(r is not None for r in comp),
                "copies": len(db),
                "checked": len(comps),
                "contextual_count": sum(r is not None for r in comp),
            }
        )
    # canonical census order: both embeddings, then both complements
    order = {name: k for k, (name, _, _) in enumerate(EXPECTED_CENSUS)}
    rows.sort(key=lambda r: order[r["geometry"]])
    return rows


def _census_mismatches(rows: list[dict]) -> list[str]:
    problems = []
    for row, (name, expect_ctx, expect_copies) in zip(rows, EXPECTED_CENSUS):
        if row["copies"] != expect_copies:
            problems.append(
                f"{name}: {row['copies']} copies, expected {expect_copies}"
            )
        expected_count = row["checked"] if expect_ctx else 0
        if row["contextual_count"] != expected_count:
            problems.append(
                f"{name}: {row['contextual_count']}/{row['checked']} contextual, "
                f"expected {expected_count}"
            )
    return problems


def _census_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf,
        fieldnames=["geometry", "contextual", "copies", "checked", "contextual_count"],
        lineterminator="\n",
    )
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "contextual": "Yes" if row["contextual"] else "No"})
    return buf.getvalue()


def cmd_table1(args) -> int:
    started = time.monotonic()
    space = build_polar_space(3)
    rows = _census_rows(space, args)
    for row in rows:
        print(
            f"{row['geometry']:>22}  contextual={'Yes' if row['contextual'] else 'No':3}"
            f"  copies={row['copies']:<5} checked={row['checked']}"
        )
    print(f"elapsed: {time.monotonic() - started:.2f}s  backend: {backend_name()}")
    payload = {"census": rows, "sample": args.sample}
    rendered = (
        _census_csv(rows)
        if args.format == "csv"
        else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    problems = _census_mismatches(rows)
    _finish(args, payload, rendered, started)
    if problems:
        for p in problems:
            print(f"MISMATCH: {p}", file=sys.stderr)
        return 4
    return 0


def cmd_check(args) -> int:
    started = time.monotonic()
    try:
        with open(args.config) as fh:
            data = json.load(fh)
        config = Configuration.from_json_dict(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, MalformedObservable) as exc:
        print(f"cannot read configuration: {exc}", file=sys.stderr)
        return 2
    report = is_contextual(config)
    deg: Optional[int] = None
    deg_note = ""
    try:
        deg = config_degree(config, cap=args.degree_cap)
    except CapExceeded as exc:
        deg_note = f"skipped ({exc})"
    print(f"contextual: {'yes' if report.contextual else 'no'}")
    n_points, n_contexts, n_negative = report.counts
    print(f"points: {n_points}  contexts: {n_contexts}  negative: {n_negative}")
    if report.certificate is not None:
        witness = [j for j in range(report.certificate.length) if report.certificate[j]]
        print(f"certificate contexts: {witness}")
    print(f"degree: {deg if deg is not None else deg_note}")
    payload = report.to_json_dict()
    payload["degree"] = deg
    _finish(args, payload, json.dumps(payload, indent=2, sort_keys=True) + "\n", started)
    return 1 if report.contextual else 0


def cmd_export(args) -> int:
    started = time.monotonic()
    target = args.target
    if target == "doily":
        space = build_polar_space(2)
        fmt = args.format or "dot"
        if fmt != "dot":
            print("doily exports as DOT", file=sys.stderr)
            return 2
        payload = space.to_json_dict()
        rendered = space.to_dot()
    elif target in ("hexagon-classical", "hexagon-skew"):
        space = build_polar_space(3)
        copy = (
            hx.classical_hexagon(space)
            if target.endswith("classical")
            else hx.skew_hexagon(space)
        )
        fmt = args.format or "dot"
        if fmt != "dot":
            print(f"{target} exports as DOT", file=sys.stderr)
            return 2
        payload = {"lines": [list(space.lines[i].points) for i in copy.lines]}
        rendered = _copy_dot(space, copy)
    elif target == "table1":
        fmt = args.format or "csv"
        if fmt != "csv":
            print("table1 exports as CSV", file=sys.stderr)
            return 2
        space = build_polar_space(3)
        rows = _census_rows(space, args)
        payload = {"census": rows, "sample": args.sample}
        rendered = _census_csv(rows)
    else:  # unreachable with argparse choices; kept for the contract
        print(f"unknown export target {target!r}", file=sys.stderr)
        return 2
    if not args.out:
        sys.stdout.write(rendered)
        if not rendered.endswith("\n"):
            print()
    _finish(args, payload, rendered, started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarks",
        description="Polar spaces of Pauli observables, hexagon embeddings, "
        "and Kochen-Specker contextuality checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_space = sub.add_parser("space", help="build W(2N-1,2) and print counts")
    p_space.add_argument("--qubits", type=int, required=True, choices=[1, 2, 3, 4])
    p_space.add_argument("--out")
    p_space.add_argument("--format", choices=["json", "dot"], default="json")
    p_space.set_defaults(func=cmd_space)

    p_hex = sub.add_parser("hexagon", help="build a hexagon embedding seed")
    p_hex.add_argument(
        "--embedding", required=True, choices=[hx.CLASSICAL, hx.SKEW]
    )
    p_hex.add_argument("--out")
    p_hex.add_argument("--format", choices=["json", "dot"], default="json")
    p_hex.set_defaults(func=cmd_hexagon)

    p_tab = sub.add_parser(
        "table1", help="contextuality census of both embeddings and complements"
    )
    p_tab.add_argument("--sample", type=int, default=None, metavar="K")
    p_tab.add_argument(
        "--workers", type=int, default=os.cpu_count() or 1, metavar="W"
    )
    p_tab.add_argument("--rebuild", action="store_true")
    p_tab.add_argument("--out")
    p_tab.add_argument("--format", choices=["json", "csv"], default="json")
    p_tab.set_defaults(func=cmd_table1)

    p_check = sub.add_parser("check", help="decide contextuality of a config JSON")
    p_check.add_argument("config")
    p_check.add_argument(
        "--degree-cap", type=int, default=DEFAULT_RANK_CAP, dest="degree_cap"
    )
    p_check.add_argument("--out")
    p_check.set_defaults(func=cmd_check)

    p_exp = sub.add_parser("export", help="export DOT figures and CSV reports")
    p_exp.add_argument(
        "target",
        choices=["doily", "hexagon-classical", "hexagon-skew", "table1"],
    )
    p_exp.add_argument("--format", choices=["dot", "csv"], default=None)
    p_exp.add_argument("--out")
    p_exp.add_argument("--sample", type=int, default=None, metavar="K")
    p_exp.add_argument(
        "--workers", type=int, default=os.cpu_count() or 1, metavar="W"
    )
    p_exp.add_argument("--rebuild", action="store_true")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedRank as exc:
        print(f"unsupported rank: {exc}", file=sys.stderr)
        return 2
    except (ConstructionFailed, ImageOffQuadric, BudgetExceeded) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 3
    except InvalidContext as exc:
        print(f"invalid context: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
