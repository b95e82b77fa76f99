"""Split Cayley hexagon embeddings into W(5,2).

The hexagon is built inside the parabolic quadric Q of PG(6,2) with
equation x1*x4 + x2*x5 + x3*x6 + x7 = 0 (x7^2 = x7 over GF(2)).  Its 63
lines are the lines of Q whose Pluecker coordinates satisfy seven linear
relations; for a line spanned by points x, y we use the two-point form
p_ij = x_i*y_j + x_j*y_i, which is independent of the choice of spanning
pair.  Dropping x7 projects Q bijectively onto PG(5,2) (on Q the seventh
coordinate is recovered as x7 = x1*x4 + x2*x5 + x3*x6), and the 63 hexagon
lines land on totally isotropic lines of W(5,2): the classical embedding.

The skew embedding applies Coolsaet's coordinate map

    e: [x1:...:x7] -> [x1+x6+f5 : x2+x3+f4 : x3 : x4 : x5 : x6 : x7],
    f4 = x3*x5 + x7*x4,   f5 = x4*x6 + x7*x5,

point-wise to the classical hexagon's quadric lines before projecting.

A quadric point with coordinates (x1..x7) has integer value with x1 as the
most significant bit, so dropping x7 is a right shift and the projected
value is exactly the polar-space point value.

Copies are stored as sorted tuples of line indices into the space's 315
lines; orbit enumeration is a breadth-first closure under all 63 point
transvections with canonical-form deduplication.
"""

from __future__ import annotations

import array
import struct
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ._backend import core as _core
from .errors import (
    BudgetExceeded,
    ConstructionFailed,
    ImageOffQuadric,
    UnsupportedRank,
)
from .space import PolarSpace, form_value

CLASSICAL = "classical"
SKEW = "skew"
UNKNOWN = "unknown"

DEFAULT_ORBIT_BUDGET = 100_000


@dataclass(frozen=True)
class QuadricPoint:
    coords: tuple[int, int, int, int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.coords) != 7 or any(c not in (0, 1) for c in self.coords):
            raise ValueError("need 7 bits")
        if not any(self.coords):
            raise ValueError("the zero vector is not a projective point")
        if not on_quadric(self.coords):
            raise ValueError(f"{self.coords} is off the quadric")

    @property
    def value(self) -> int:
        v = 0
        for c in self.coords:
            v = (v << 1) | c
        return v

    def projected_value(self) -> int:
        """Point value in PG(5,2) after dropping x7."""
        return self.value >> 1


def on_quadric(coords: Sequence[int]) -> int:
    x1, x2, x3, x4, x5, x6, x7 = coords
    return ((x1 & x4) ^ (x2 & x5) ^ (x3 & x6) ^ x7) == 0


def _coords_of_value(v: int) -> tuple[int, ...]:
    return tuple((v >> (6 - i)) & 1 for i in range(7))


def lift_to_quadric(value6: int) -> QuadricPoint:
    """Inverse of the projection: recover x7 from the first six coordinates."""
    x = [(value6 >> (5 - i)) & 1 for i in range(6)]
    x7 = (x[0] & x[3]) ^ (x[1] & x[4]) ^ (x[2] & x[5])
    return QuadricPoint((*x, x7))


def build_quadric() -> tuple[QuadricPoint, ...]:
    return tuple(
        QuadricPoint(_coords_of_value(v))
        for v in range(1, 128)
        if on_quadric(_coords_of_value(v))
    )


def quadric_lines() -> list[tuple[int, int, int]]:
    """Lines of PG(6,2) fully contained in the quadric, as value triples."""
    on_q = {p.value for p in build_quadric()}
    lines = []
    for a in on_q:
        for b in on_q:
            c = a ^ b
            if a < b < c and c in on_q:
                lines.append((a, b, c))
    return sorted(lines)


def _plucker(x: Sequence[int], y: Sequence[int], i: int, j: int) -> int:
    return (x[i - 1] & y[j - 1]) ^ (x[j - 1] & y[i - 1])


_PLUCKER_EQUALITIES = (
    ((6, 2), (1, 7)),
    ((1, 3), (7, 2)),
    ((2, 4), (3, 7)),
    ((3, 5), (7, 4)),
    ((4, 6), (5, 7)),
    ((5, 1), (7, 6)),
)


def satisfies_plucker(x: Sequence[int], y: Sequence[int]) -> bool:
    for (i, j), (k, l) in _PLUCKER_EQUALITIES:
        if _plucker(x, y, i, j) != _plucker(x, y, k, l):
            return False
    s = _plucker(x, y, 1, 4) ^ _plucker(x, y, 2, 5) ^ _plucker(x, y, 3, 6)
    return s == 0


def hexagon_quadric_lines() -> list[tuple[int, int, int]]:
    """The 63 quadric lines passing the Pluecker filter."""
    out = []
    for a, b, c in quadric_lines():
        if satisfies_plucker(_coords_of_value(a), _coords_of_value(b)):
            out.append((a, b, c))
    return out


def coolsaet_map(p: QuadricPoint) -> QuadricPoint:
    x1, x2, x3, x4, x5, x6, x7 = p.coords
    f4 = (x3 & x5) ^ (x7 & x4)
    f5 = (x4 & x6) ^ (x7 & x5)
    image = (x1 ^ x6 ^ f5, x2 ^ x3 ^ f4, x3, x4, x5, x6, x7)
    if not on_quadric(image):
        raise ImageOffQuadric(f"e({p.coords}) = {image} left the quadric")
    return QuadricPoint(image)


@dataclass(frozen=True)
class HexagonCopy:
    lines: tuple[int, ...]
    embedding_tag: str = UNKNOWN

    def __post_init__(self) -> None:
        if list(self.lines) != sorted(set(self.lines)):
            raise ValueError("line indices must be sorted and distinct")
        if self.embedding_tag not in (CLASSICAL, SKEW, UNKNOWN):
            raise ValueError(f"unknown tag {self.embedding_tag!r}")

    def __len__(self) -> int:
        return len(self.lines)

    def point_values(self, space: PolarSpace) -> frozenset[int]:
        out = set()
        for i in self.lines:
            out.update(space.lines[i].points)
        return frozenset(out)


def _project_quadric_lines(
    space: PolarSpace, qlines: Iterable[tuple[int, int, int]], tag: str
) -> HexagonCopy:
    indices = []
    for triple in qlines:
        proj = tuple(sorted(v >> 1 for v in triple))
        if form_value(space.n_qubits, proj[0], proj[1]):
            raise ConstructionFailed(
                f"projected line {proj} is not isotropic"
            )
        idx = space.line_index.get(proj)
        if idx is None:
            raise ConstructionFailed(
                f"projected triple {proj} is not a line of the space"
            )
        indices.append(idx)
    if len(set(indices)) != len(indices):
        raise ConstructionFailed("projection collapsed two lines")
    return HexagonCopy(tuple(sorted(indices)), tag)


def _require_w52(space: PolarSpace) -> None:
    if space.n_qubits != 3:
        raise UnsupportedRank("hexagon embeddings live in W(5,2)")


def classical_hexagon(space: PolarSpace) -> HexagonCopy:
    _require_w52(space)
    return _project_quadric_lines(space, hexagon_quadric_lines(), CLASSICAL)


def skew_hexagon(space: PolarSpace) -> HexagonCopy:
    _require_w52(space)
    mapped = []
    for triple in hexagon_quadric_lines():
        image = [coolsaet_map(QuadricPoint(_coords_of_value(v))) for v in triple]
        mapped.append(tuple(sorted(q.value for q in image)))
    return _project_quadric_lines(space, mapped, SKEW)


def perp_set(space: PolarSpace, value: int) -> frozenset[int]:
    """The point and everything commuting with it (a geometric hyperplane)."""
    n = space.n_qubits
    return frozenset(
        q for q in range(1, 1 << (2 * n)) if form_value(n, value, q) == 0
    )


def complement(space: PolarSpace, copy: HexagonCopy) -> frozenset[int]:
    return frozenset(range(len(space.lines))) - set(copy.lines)


def coplanarity_signature(space: PolarSpace, copy: HexagonCopy) -> int:
    """Number of copy points whose three copy lines lie in one plane."""
    plane_set = {pl.points for pl in space.planes}
    by_point: dict[int, list[int]] = {}
    for i in copy.lines:
        for v in space.lines[i].points:
            by_point.setdefault(v, []).append(i)
    count = 0
    for v, through in by_point.items():
        if len(through) != 3:
            continue
        pts = set()
        for i in through:
            pts.update(space.lines[i].points)
        if tuple(sorted(pts)) in plane_set:
            count += 1
    return count


def _incidence_adjacency(
    space: PolarSpace, lines: Iterable[int]
) -> Optional[list[list[int]]]:
    """Bipartite incidence graph, or None unless 63 lines cover 63 points
    three times each.  Vertices 0..62 are points, 63..125 are lines."""
    idx = sorted(set(lines))
    if len(idx) != 63:
        return None
    degree: dict[int, int] = {}
    for i in idx:
        for v in space.lines[i].points:
            degree[v] = degree.get(v, 0) + 1
    if len(degree) != 63 or set(degree.values()) != {3}:
        return None
    order = {v: k for k, v in enumerate(sorted(degree))}
    adj: list[list[int]] = [[] for _ in range(126)]
    for k, i in enumerate(idx):
        for v in space.lines[i].points:
            adj[order[v]].append(63 + k)
            adj[63 + k].append(order[v])
    return adj


def is_generalized_hexagon(space: PolarSpace, lines: Iterable[int]) -> bool:
    """63 lines, every point on exactly 3, incidence girth 12, diameter 6."""
    adj = _incidence_adjacency(space, lines)
    if adj is None:
        return False
    girth, diameter = _girth_and_diameter(adj)
    return girth == 12 and diameter == 6


def copy_summary(space: PolarSpace, copy: HexagonCopy) -> dict:
    """Validation summary used by the CLI and the reports."""
    adj = _incidence_adjacency(space, copy.lines)
    girth = diameter = None
    if adj is not None:
        girth, diameter = _girth_and_diameter(adj)
    return {
        "embedding": copy.embedding_tag,
        "lines": len(copy.lines),
        "three_regular": adj is not None,
        "girth": girth,
        "diameter": diameter,
        "generalized_hexagon": girth == 12 and diameter == 6,
        "coplanarity_signature": coplanarity_signature(space, copy),
    }


def _girth_and_diameter(adj: list[list[int]]) -> tuple[Optional[int], Optional[int]]:
    n = len(adj)
    girth: Optional[int] = None
    diameter = 0
    for s in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[s] = 0
        q = deque([s])
        ecc = 0
        while q:
            u = q.popleft()
            ecc = dist[u]
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif w != parent[u]:
                    cyc = dist[u] + dist[w] + 1
                    if girth is None or cyc < girth:
                        girth = cyc
        if -1 in dist:
            return girth, None
        diameter = max(diameter, ecc)
    return girth, diameter


class OrbitDatabase:
    """Transvection-closed set of hexagon copies in canonical form."""

    def __init__(
        self,
        copies: Sequence[HexagonCopy],
        embedding_tag: str = UNKNOWN,
        generator_log: Optional[dict[tuple[int, ...], tuple]] = None,
    ) -> None:
        self.copies = tuple(sorted(copies, key=lambda c: c.lines))
        self.embedding_tag = embedding_tag
        self.generator_log = generator_log
        self._keys = frozenset(c.lines for c in self.copies)

    def __len__(self) -> int:
        return len(self.copies)

    def __iter__(self):
        return iter(self.copies)

    def __contains__(self, item) -> bool:
        lines = item.lines if isinstance(item, HexagonCopy) else tuple(item)
        return lines in self._keys


def orbit_closure(
    space: PolarSpace,
    seed: HexagonCopy,
    budget: int = DEFAULT_ORBIT_BUDGET,
    trace: bool = False,
) -> OrbitDatabase:
    """Breadth-first closure of the seed under all point transvections."""
    _require_w52(space)
    if not is_generalized_hexagon(space, seed.lines):
        raise ConstructionFailed("orbit seed is not a generalized hexagon")
    perms = [space.line_permutation(v) for v in range(1, 64)]
    if _core is not None:
        import numpy as np

        perm_mat = np.array(perms, dtype=np.uint16)

        def expand(lines: tuple[int, ...]) -> list[bytes]:
            return _core.expand_copy(perm_mat, np.array(lines, dtype=np.uint16))

    else:

        def expand(lines: tuple[int, ...]) -> list[bytes]:
            return _gf2_expand(perms, lines)

    seed_key = array.array("H", seed.lines).tobytes()
    visited: dict[bytes, tuple[int, ...]] = {seed_key: seed.lines}
    log: Optional[dict[tuple[int, ...], tuple]] = (
        {seed.lines: (None, None)} if trace else None
    )
    frontier = deque([seed.lines])
    while frontier:
        current = frontier.popleft()
        for p_index, key in enumerate(expand(current)):
            if key not in visited:
                lines = tuple(array.array("H", key))
                visited[key] = lines
                if log is not None:
                    log[lines] = (current, p_index + 1)
                frontier.append(lines)
                if len(visited) > budget:
                    raise BudgetExceeded(
                        f"orbit exceeded {budget} copies; corrupted seed?"
                    )
    copies = [
        HexagonCopy(lines, seed.embedding_tag) for lines in visited.values()
    ]
    return OrbitDatabase(copies, seed.embedding_tag, log)


def _gf2_expand(perms: Sequence[Sequence[int]], lines: Sequence[int]) -> list[bytes]:
    from . import _gf2_py

    return _gf2_py.expand_copy(perms, lines)


_MAGIC = b"PKOR"
_TAG_CODES = {UNKNOWN: 0, CLASSICAL: 1, SKEW: 2}
_TAG_NAMES = {v: k for k, v in _TAG_CODES.items()}


def save_orbit(db: OrbitDatabase, space: PolarSpace, path: str) -> None:
    """Versioned binary dump; line table included for self-containment."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(
            struct.pack(
                "<BBBB", 1, _TAG_CODES[db.embedding_tag], space.n_qubits, 0
            )
        )
        fh.write(struct.pack("<H", len(space.lines)))
        for ln in space.lines:
            fh.write(struct.pack("<HHH", *ln.points))
        n_per = len(db.copies[0].lines) if db.copies else 0
        fh.write(struct.pack("<IH", len(db.copies), n_per))
        for copy in db.copies:
            fh.write(struct.pack(f"<{n_per}H", *copy.lines))


def load_orbit(path: str, space: Optional[PolarSpace] = None) -> OrbitDatabase:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ConstructionFailed(f"{path}: not an orbit database")
        version, tag_code, n_qubits, _ = struct.unpack("<BBBB", fh.read(4))
        if version != 1:
            raise ConstructionFailed(f"{path}: unsupported version {version}")
        (n_lines,) = struct.unpack("<H", fh.read(2))
        table = [
            struct.unpack("<HHH", fh.read(6)) for _ in range(n_lines)
        ]
        if space is not None:
            if space.n_qubits != n_qubits or [
                ln.points for ln in space.lines
            ] != table:
                raise ConstructionFailed(
                    f"{path}: line table does not match the given space"
                )
        n_copies, n_per = struct.unpack("<IH", fh.read(6))
        tag = _TAG_NAMES.get(tag_code, UNKNOWN)
        copies = []
        for _ in range(n_copies):
            lines = struct.unpack(f"<{n_per}H", fh.read(2 * n_per))
            copies.append(HexagonCopy(lines, tag))
    return OrbitDatabase(copies, tag)
