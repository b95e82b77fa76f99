"""Binary symplectic polar spaces of multi-qubit observables.

A point of PG(2N-1,2) is a nonzero length-2N bit vector in the split layout
(mu|nu): the first N coordinates are the Z part, the last N the X part.  The
point's integer value reads the coordinate string as a binary number, so
value = (z_mask << N) | x_mask, and points are indexed 1..2^{2N}-1 by value.
GF(2) addition of points is XOR of values.

The symplectic form <p,q> = sum_i p_i q_{N+i} + p_{N+i} q_i is 0 exactly
when the labeling observables commute.  W(2N-1,2) consists of all points
with the totally isotropic lines {p, q, p+q} (form 0 on all pairs) and, for
N >= 3, the totally isotropic planes (7 points closed under addition).

Transvections T_p: q -> q + <p,q> p preserve the form and generate the
symplectic group; orbit searches act on line sets through them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    IdentityHasNoPoint,
    UnsupportedRank,
    ZeroVector,
)
from .gf2 import BitVector
from .pauli import PauliObservable, canonical_observable, context_sign

MIN_QUBITS = 1
MAX_QUBITS = 4


@dataclass(frozen=True)
class ProjectivePoint:
    coords: BitVector

    def __post_init__(self) -> None:
        if self.coords.length == 0 or self.coords.length % 2:
            raise DimensionMismatch(
                f"point needs an even positive length, got {self.coords.length}"
            )
        if self.coords.bits == 0:
            raise ZeroVector("the zero vector is not a projective point")

    @property
    def n_qubits(self) -> int:
        return self.coords.length // 2

    @property
    def value(self) -> int:
        # Coordinate string read as a binary number (leftmost = most
        # significant), which is the reverse of BitVector bit order.
        n2 = self.coords.length
        v = 0
        for j in range(n2):
            v |= ((self.coords.bits >> j) & 1) << (n2 - 1 - j)
        return v

    @property
    def z_mask(self) -> int:
        return self.value >> self.n_qubits

    @property
    def x_mask(self) -> int:
        return self.value & ((1 << self.n_qubits) - 1)

    def __str__(self) -> str:
        n2 = self.coords.length
        s = "".join(str((self.value >> (n2 - 1 - j)) & 1) for j in range(n2))
        return f"({s[: n2 // 2]}|{s[n2 // 2 :]})"


def point_from_value(n_qubits: int, value: int) -> ProjectivePoint:
    if not 1 <= value < 1 << (2 * n_qubits):
        raise ZeroVector(f"value {value} outside 1..{(1 << (2 * n_qubits)) - 1}")
    n2 = 2 * n_qubits
    bits = 0
    for j in range(n2):
        bits |= ((value >> (n2 - 1 - j)) & 1) << j
    return ProjectivePoint(BitVector(n2, bits))


def form_value(n_qubits: int, a: int, b: int) -> int:
    """Symplectic form on raw point values."""
    mask = (1 << n_qubits) - 1
    az, ax = a >> n_qubits, a & mask
    bz, bx = b >> n_qubits, b & mask
    return ((az & bx).bit_count() + (ax & bz).bit_count()) & 1


def symplectic_form(p: ProjectivePoint, q: ProjectivePoint) -> int:
    if p.coords.length != q.coords.length:
        raise DimensionMismatch(
            f"points of length {p.coords.length} and {q.coords.length}"
        )
    return form_value(p.n_qubits, p.value, q.value)


def to_point(obs: PauliObservable) -> ProjectivePoint:
    """Point labeled by the observable; the phase is forgotten."""
    if obs.is_identity_class():
        raise IdentityHasNoPoint("the identity labels no projective point")
    return point_from_value(
        obs.n_qubits, (obs.z_mask << obs.n_qubits) | obs.x_mask
    )


def from_point(p: ProjectivePoint) -> PauliObservable:
    """Canonical Hermitian observable labeling the point."""
    return canonical_observable(p.n_qubits, p.z_mask, p.x_mask)


def transvection(p: ProjectivePoint, q: ProjectivePoint) -> ProjectivePoint:
    if symplectic_form(p, q) == 0:
        return q
    return point_from_value(p.n_qubits, p.value ^ q.value)


@dataclass(frozen=True, order=True)
class IsotropicLine:
    points: tuple[int, int, int]

    def __post_init__(self) -> None:
        a, b, c = self.points
        if not (0 < a < b < c) or a ^ b ^ c:
            raise ValueError(f"not a sorted GF(2) line triple: {self.points}")

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, value: int) -> bool:
        return value in self.points


@dataclass(frozen=True, order=True)
class IsotropicPlane:
    points: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.points) != 7 or list(self.points) != sorted(set(self.points)):
            raise ValueError("a plane is 7 distinct sorted points")

    def __iter__(self):
        return iter(self.points)


class PolarSpace:
    """W(2N-1,2) with observable labels, built by build_polar_space."""

    def __init__(
        self,
        n_qubits: int,
        points: tuple[ProjectivePoint, ...],
        lines: tuple[IsotropicLine, ...],
        planes: tuple[IsotropicPlane, ...],
        labels: dict[int, PauliObservable],
    ) -> None:
        self.n_qubits = n_qubits
        self.points = points
        self.lines = lines
        self.planes = planes
        self.labels = labels
        self.n_points = len(points)
        self.line_index = {ln.points: i for i, ln in enumerate(lines)}
        self.line_signs = tuple(
            context_sign([labels[v] for v in ln.points]) for ln in lines
        )
        through: dict[int, list[int]] = {p.value: [] for p in points}
        for i, ln in enumerate(lines):
            for v in ln.points:
                through[v].append(i)
        self.lines_through = {v: tuple(ix) for v, ix in through.items()}
        self._perm_cache: dict[int, tuple[int, ...]] = {}

    def label(self, value: int) -> PauliObservable:
        return self.labels[value]

    def point(self, value: int) -> ProjectivePoint:
        return point_from_value(self.n_qubits, value)

    def transvection_point_map(self, p_value: int) -> tuple[int, ...]:
        """Image of every point value under T_p; slot 0 is unused."""
        n = self.n_qubits
        top = 1 << (2 * n)
        return tuple(
            0 if q == 0 else (q ^ p_value if form_value(n, p_value, q) else q)
            for q in range(top)
        )

    def line_permutation(self, p_value: int) -> tuple[int, ...]:
        """T_p as a permutation of line indices (cached)."""
        cached = self._perm_cache.get(p_value)
        if cached is not None:
            return cached
        pm = self.transvection_point_map(p_value)
        perm = tuple(
            self.line_index[tuple(sorted(pm[v] for v in ln.points))]
            for ln in self.lines
        )
        self._perm_cache[p_value] = perm
        return perm

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "points": [str(self.labels[p.value]) for p in self.points],
            "lines": [list(ln.points) for ln in self.lines],
        }

    def to_dot(self) -> str:
        """Bipartite point/line incidence graph in DOT format."""
        out = ["graph polar_space {"]
        for p in self.points:
            out.append(f'  p{p.value} [label="{self.labels[p.value]}"];')
        for i, ln in enumerate(self.lines):
            out.append(f'  l{i} [shape=point];')
            for v in ln.points:
                out.append(f"  p{v} -- l{i};")
        out.append("}")
        return "\n".join(out)


def build_polar_space(n_qubits: int) -> PolarSpace:
    if not MIN_QUBITS <= n_qubits <= MAX_QUBITS:
        raise UnsupportedRank(f"n_qubits must be {MIN_QUBITS}..{MAX_QUBITS}")
    n = n_qubits
    top = 1 << (2 * n)
    points = tuple(point_from_value(n, v) for v in range(1, top))
    labels = {v: canonical_observable(n, v >> n, v & ((1 << n) - 1)) for v in range(1, top)}

    lines = []
    for a in range(1, top):
        for b in range(a + 1, top):
            c = a ^ b
            # each line once: (a, b) are its two smallest points
            if c > b and form_value(n, a, b) == 0:
                lines.append(IsotropicLine((a, b, c)))
    lines.sort()

    planes: list[IsotropicPlane] = []
    if n >= 3:
        seen = set()
        for ln in lines:
            a, b, c = ln.points
            for p in range(1, top):
                if p in ln.points:
                    continue
                if form_value(n, p, a) or form_value(n, p, b):
                    continue
                # closure of an isotropic line and a commuting outside point
                pts = tuple(sorted((a, b, c, p, p ^ a, p ^ b, p ^ c)))
                if pts not in seen:
                    seen.add(pts)
                    planes.append(IsotropicPlane(pts))
        planes.sort()

    return PolarSpace(n, points, tuple(lines), tuple(planes), labels)


def apply_transvection_to_lineset(
    space: PolarSpace, p_value: int, lines: Iterable[IsotropicLine]
) -> frozenset[IsotropicLine]:
    pm = space.transvection_point_map(p_value)
    return frozenset(
        IsotropicLine(tuple(sorted(pm[v] for v in ln.points))) for ln in lines
    )


def is_geometric_hyperplane(
    point_set: Iterable[int], lines: Sequence[IsotropicLine]
) -> bool:
    pts = set(point_set)
    for ln in lines:
        hits = sum(1 for v in ln.points if v in pts)
        if hits not in (1, 3):
            return False
    return True
