"""Kochen-Specker contextuality over GF(2) incidence systems.

A Configuration is a set of observables grouped into contexts of mutually
commuting elements whose product is plus or minus the identity.  Assigning
a deterministic value (-1)^{x_j} to observable j must reproduce each
context's product sign, which is the linear system A.x = b over GF(2):
a_ij = 1 exactly when observable j sits in context i, and b_i = 1 exactly
when context i has sign -1.  The configuration is contextual exactly when
the system has no solution, and the inconsistency certificate (a set of
contexts whose signs multiply to -1 while every observable appears an even
number of times) is a finite, machine-checkable Kochen-Specker proof.

The degree of contextuality is the minimum Hamming distance between b and
the column space of A: the smallest number of context equations any
deterministic assignment must violate.  Degree 0 means non-contextual.

All signs are computed from the Pauli algebra, never transcribed from
figures, so a mislabeled context cannot silently poison a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from time import monotonic
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, InvalidContext
from .gf2 import (
    DEFAULT_RANK_CAP,
    BitMatrix,
    BitVector,
    Inconsistent,
    Solution,
    coset_min_weight,
    consistency_many,
    solve,
)
from .pauli import PauliObservable, context_sign, parse
from .space import PolarSpace


@dataclass(frozen=True)
class Configuration:
    observables: tuple[PauliObservable, ...]
    contexts: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        seen_obs = set()
        for o in self.observables:
            key = (o.n_qubits, o.z_mask, o.x_mask)
            if key in seen_obs:
                raise InvalidContext(f"duplicate observable {o}")
            seen_obs.add(key)
        if len(self.signs) != len(self.contexts):
            raise InvalidContext("one sign per context required")
        seen = set()
        for ctx, sign in zip(self.contexts, self.signs):
            if list(ctx) != sorted(set(ctx)):
                raise InvalidContext(f"context {ctx} not sorted and distinct")
            if ctx in seen:
                raise InvalidContext(f"duplicate context {ctx}")
            seen.add(ctx)
            if not all(0 <= j < len(self.observables) for j in ctx):
                raise InvalidContext(f"context {ctx} indexes missing observables")
            if sign != context_sign([self.observables[j] for j in ctx]):
                raise InvalidContext(f"sign of context {ctx} does not recompute")

    @classmethod
    def build(
        cls,
        observables: Sequence[PauliObservable],
        contexts: Iterable[Iterable[int]],
    ) -> "Configuration":
        """Sort the contexts and compute every sign from the algebra."""
        obs = tuple(observables)
        ctxs = tuple(tuple(sorted(set(c))) for c in contexts)
        for c in ctxs:
            if not all(0 <= j < len(obs) for j in c):
                raise InvalidContext(f"context {c} indexes missing observables")
        signs = tuple(context_sign([obs[j] for j in c]) for c in ctxs)
        return cls(obs, ctxs, signs)

    @property
    def n_points(self) -> int:
        return len(self.observables)

    @property
    def n_contexts(self) -> int:
        return len(self.contexts)

    @property
    def n_negative(self) -> int:
        return sum(1 for s in self.signs if s == -1)

    def to_json_dict(self) -> dict:
        n = self.observables[0].n_qubits if self.observables else 0
        return {
            "n_qubits": n,
            "points": [str(o) for o in self.observables],
            "contexts": [list(c) for c in self.contexts],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Configuration":
        obs = [parse(s) for s in data["points"]]
        return cls.build(obs, data["contexts"])


@dataclass(frozen=True)
class ContextualityReport:
    contextual: bool
    certificate: Optional[BitVector]
    degree: Optional[int]
    counts: tuple[int, int, int]

    def __post_init__(self) -> None:
        assert self.contextual == (self.certificate is not None)
        if self.degree is not None:
            assert (self.degree == 0) == (not self.contextual)

    def to_json_dict(self) -> dict:
        n_points, n_contexts, n_negative = self.counts
        return {
            "contextual": self.contextual,
            "certificate": (
                [j for j in range(self.certificate.length) if self.certificate[j]]
                if self.certificate is not None
                else None
            ),
            "degree": self.degree,
            "points": n_points,
            "contexts": n_contexts,
            "negative_contexts": n_negative,
        }


def build_system(config: Configuration) -> tuple[BitMatrix, BitVector]:
    """Incidence system A.x = b; column order is the observable order."""
    n_cols = config.n_points
    rows = []
    for ctx in config.contexts:
        r = 0
        for j in ctx:
            r |= 1 << j
        rows.append(r)
    a = BitMatrix.from_rows(n_cols, rows)
    b_bits = 0
    for i, s in enumerate(config.signs):
        if s == -1:
            b_bits |= 1 << i
    return a, BitVector(config.n_contexts, b_bits)


def verify_certificate(a: BitMatrix, b: BitVector, y: BitVector) -> bool:
    """y.A = 0 and y.b = 1, checked by direct bit arithmetic."""
    if y.length != a.n_rows:
        return False
    combined = 0
    for i in range(a.n_rows):
        if y[i]:
            combined ^= a.rows[i].bits
    return combined == 0 and ((y.bits & b.bits).bit_count() & 1) == 1


def is_contextual(config: Configuration) -> ContextualityReport:
    a, b = build_system(config)
    outcome = solve(a, b)
    counts = (config.n_points, config.n_contexts, config.n_negative)
    if isinstance(outcome, Inconsistent):
        if not verify_certificate(a, b, outcome.certificate):
            raise AssertionError("solver returned an invalid certificate")
        return ContextualityReport(True, outcome.certificate, None, counts)
    assert isinstance(outcome, Solution)
    assert a.mul_vec(outcome.x).bits == b.bits
    return ContextualityReport(False, None, None, counts)


def degree(config: Configuration, cap: int = DEFAULT_RANK_CAP) -> int:
    """Minimum number of context equations no assignment can satisfy."""
    a, b = build_system(config)
    return coset_min_weight(a, b, cap)


def lines_configuration(
    space: PolarSpace, line_subset: Iterable[int]
) -> Configuration:
    """Configuration whose contexts are the chosen lines of the space."""
    indices = sorted(set(line_subset))
    values = sorted({v for i in indices for v in space.lines[i].points})
    col = {v: j for j, v in enumerate(values)}
    observables = [space.labels[v] for v in values]
    contexts = [
        tuple(sorted(col[v] for v in space.lines[i].points)) for i in indices
    ]
    return Configuration.build(observables, contexts)


def peres_mermin_square() -> Configuration:
    grid = ["IZ", "ZI", "ZZ", "XI", "IX", "XX", "XZ", "ZX", "YY"]
    observables = [parse(s) for s in grid]
    rows = [(0, 1, 2), (3, 4, 5), (6, 7, 8)]
    cols = [(0, 3, 6), (1, 4, 7), (2, 5, 8)]
    return Configuration.build(observables, rows + cols)


def mermin_pentagram() -> Configuration:
    names = ["XXX", "YYX", "YXY", "XYY", "XII", "YII", "IXI", "IYI", "IIX", "IIY"]
    observables = [parse(s) for s in names]
    contexts = [
        (4, 6, 8, 0),  # XII IXI IIX XXX
        (4, 7, 9, 3),  # XII IYI IIY XYY
        (5, 6, 9, 2),  # YII IXI IIY YXY
        (5, 7, 8, 1),  # YII IYI IIX YYX
        (0, 1, 2, 3),  # XXX YYX YXY XYY
    ]
    return Configuration.build(observables, contexts)


def enumerate_mermin_squares(space: PolarSpace) -> list[Configuration]:
    """All 3x3 grid subgeometries of the doily, as configurations."""
    if space.n_qubits != 2:
        raise InvalidContext("magic squares are searched in W(3,2)")
    line_pts = [set(ln.points) for ln in space.lines]
    grids: dict[tuple[int, ...], list[int]] = {}
    for a, b, c in combinations(range(len(line_pts)), 3):
        if line_pts[a] & line_pts[b] or line_pts[a] & line_pts[c] or line_pts[b] & line_pts[c]:
            continue
        pts = tuple(sorted(line_pts[a] | line_pts[b] | line_pts[c]))
        inside = [i for i, lp in enumerate(line_pts) if lp <= set(pts)]
        if len(inside) != 6:
            continue
        grids.setdefault(pts, inside)
    out = []
    for pts, inside in sorted(grids.items()):
        col = {v: j for j, v in enumerate(pts)}
        observables = [space.labels[v] for v in pts]
        contexts = [tuple(sorted(col[v] for v in line_pts[i])) for i in inside]
        out.append(Configuration.build(observables, contexts))
    return out


def enumerate_four_element_contexts(space: PolarSpace) -> list[tuple[int, ...]]:
    """Each plane minus each of its lines: 4 commuting observables with
    product +/- identity.  Returns sorted point-value quadruples."""
    if space.n_qubits != 3:
        raise InvalidContext("four-element contexts are enumerated in W(5,2)")
    seen = set()
    for plane in space.planes:
        pts = set(plane.points)
        for i, ln in enumerate(space.lines):
            lp = set(ln.points)
            if lp <= pts:
                ctx = tuple(sorted(pts - lp))
                seen.add(ctx)
    out = sorted(seen)
    for ctx in out:
        context_sign([space.labels[v] for v in ctx])
    return out


def four_context_sign(space: PolarSpace, ctx: Sequence[int]) -> int:
    return context_sign([space.labels[v] for v in ctx])


def count_pentagrams(
    space: PolarSpace,
    contexts: Optional[Sequence[tuple[int, ...]]] = None,
    budget_seconds: float = 900.0,
    collect: Optional[list[tuple[int, ...]]] = None,
) -> int:
    """Count 5-context pentagrams among the four-element contexts.

    A pentagram is 5 contexts on 10 points where every pair of contexts
    shares exactly one point and no point lies in three contexts (each
    point then lies in exactly two).  Backtracks over index-ordered
    context masks; raises BudgetExceeded with the partial count when the
    time budget runs out.  When ``collect`` is a list, the index tuple of
    every pentagram found is appended to it.
    """
    if contexts is None:
        contexts = enumerate_four_element_contexts(space)
    masks = []
    for ctx in contexts:
        m = 0
        for v in ctx:
            m |= 1 << v
        masks.append(m)
    n = len(masks)
    # adj[i] = bitset of j > i with |ctx_i & ctx_j| = 1
    adj = [0] * n
    for i in range(n):
        mi = masks[i]
        row = 0
        for j in range(i + 1, n):
            if (mi & masks[j]).bit_count() == 1:
                row |= 1 << j
        adj[i] = row
    deadline = monotonic() + budget_seconds
    count = 0

    def extend(chosen: list[int], cand: int, seen_once: int, seen_twice: int) -> None:
        nonlocal count
        if len(chosen) == 5:
            count += 1
            if collect is not None:
                collect.append(tuple(chosen))
            return
        if monotonic() > deadline:
            raise BudgetExceeded(
                f"pentagram search passed {budget_seconds}s", partial=count
            )
        c = cand
        while c:
            j = (c & -c).bit_length() - 1
            c &= c - 1
            mj = masks[j]
            if mj & seen_twice:
                continue
            # mj is disjoint from seen_twice, so once-points flip to twice
            extend(
                chosen + [j],
                cand & adj[j],
                seen_once ^ mj,
                seen_twice | (seen_once & mj),
            )

    full = (1 << n) - 1
    for i in range(n):
        if monotonic() > deadline:
            raise BudgetExceeded(
                f"pentagram search passed {budget_seconds}s", partial=count
            )
        extend([i], adj[i] & full, masks[i], 0)
    return count


def check_line_sets(
    space: PolarSpace,
    line_sets: Sequence[Sequence[int]],
    workers: int = 1,
) -> list[Optional[tuple[int, ...]]]:
    """Batch contextuality over subsets of the space's lines.

    Returns one entry per subset: None when the subsystem is consistent
    (non-contextual), else the tuple of positions (into the sorted subset)
    of the contexts forming the certificate.
    """
    n_cols = space.n_points
    ab_rows = []
    for i, ln in enumerate(space.lines):
        r = 0
        for v in ln.points:
            r |= 1 << (v - 1)
        if space.line_signs[i] == -1:
            r |= 1 << n_cols
        ab_rows.append(r)
    sets = [tuple(sorted(s)) for s in line_sets]
    if workers > 1 and len(sets) >= workers:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [sets[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(_check_chunk, [(ab_rows, n_cols, ch) for ch in chunks])
            )
        results: list[Optional[int]] = [None] * len(sets)
        for k, part in enumerate(parts):
            for offset, res in enumerate(part):
                results[k + offset * workers] = res
    else:
        results = consistency_many(ab_rows, n_cols, sets)
    out = []
    for cert in results:
        if cert is None:
            out.append(None)
        else:
            out.append(tuple(j for j in range(cert.bit_length()) if (cert >> j) & 1))
    return out


def _check_chunk(args: tuple) -> list[Optional[int]]:
    ab_rows, n_cols, sets = args
    return consistency_many(ab_rows, n_cols, sets)
