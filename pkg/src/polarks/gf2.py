"""Linear algebra over the two-element field on bit-packed vectors.

A BitVector of length n keeps its bits in one Python integer: bit j of the
integer is coordinate j, so the leftmost coordinate is the lowest bit.  A
BitMatrix is a tuple of equal-length rows.  Elimination always pivots on the
lowest set column bit, which makes solutions and inconsistency certificates
deterministic.

solve returns either Solution(x) with A.x = b, or Inconsistent(y) where the
certificate y satisfies y.A = 0 and y.b = 1, a machine-checkable witness
that no assignment exists.  coset_min_weight computes min_x |A.x + b| by a
Gray-code walk over a basis of the column space (one XOR per step), guarded
by a cap on the column-space rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from . import _gf2_py
from ._backend import core as _core
from .errors import CapExceeded, DimensionMismatch

DEFAULT_RANK_CAP = 28


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits outside declared length")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVector":
        bits = 0
        length = 0
        for v in values:
            if v & 1:
                bits |= 1 << length
            length += 1
        return cls(length, bits)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __iter__(self):
        return iter((self.bits >> j) & 1 for j in range(self.length))

    def weight(self) -> int:
        return self.bits.bit_count()


@dataclass(frozen=True)
class BitMatrix:
    n_rows: int
    n_cols: int
    rows: tuple[BitVector, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n_rows:
            raise ValueError("row count mismatch")
        for r in self.rows:
            if r.length != self.n_cols:
                raise ValueError("ragged rows")

    @classmethod
    def from_rows(
        cls, n_cols: int, rows: Iterable[Union[int, Iterable[int]]]
    ) -> "BitMatrix":
        """Build from integer bit rows or per-coordinate iterables."""
        packed = []
        for r in rows:
            if isinstance(r, int):
                packed.append(BitVector(n_cols, r))
            else:
                v = BitVector.from_bits(r)
                if v.length != n_cols:
                    raise ValueError("ragged rows")
                packed.append(v)
        return cls(len(packed), n_cols, tuple(packed))

    def int_rows(self) -> list[int]:
        return [r.bits for r in self.rows]

    def mul_vec(self, x: BitVector) -> BitVector:
        if x.length != self.n_cols:
            raise DimensionMismatch(
                f"vector length {x.length} != {self.n_cols} columns"
            )
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r.bits & x.bits).bit_count() & 1) << i
        return BitVector(self.n_rows, out)


@dataclass(frozen=True)
class Solution:
    x: BitVector


@dataclass(frozen=True)
class Inconsistent:
    certificate: BitVector


def rank(m: BitMatrix) -> int:
    return _gf2_py.rank_rows(m.int_rows())


def solve(a: BitMatrix, b: BitVector) -> Union[Solution, Inconsistent]:
    if b.length != a.n_rows:
        raise DimensionMismatch(f"b has length {b.length}, A has {a.n_rows} rows")
    x, cert = _gf2_py.solve_rows(a.int_rows(), b.bits, a.n_cols)
    if cert is not None:
        return Inconsistent(BitVector(a.n_rows, cert))
    assert x is not None
    return Solution(BitVector(a.n_cols, x))


def coset_min_weight(a: BitMatrix, b: BitVector, cap: int = DEFAULT_RANK_CAP) -> int:
    """min over x of |A.x + b|; 0 exactly when the system is solvable."""
    if b.length != a.n_rows:
        raise DimensionMismatch(f"b has length {b.length}, A has {a.n_rows} rows")
    basis = _gf2_py.image_basis(a.int_rows(), a.n_cols)
    if len(basis) > cap:
        raise CapExceeded(len(basis), cap)
    return _gray_min_weight(basis, b.bits, a.n_rows)


def _gray_min_weight(basis: Sequence[int], start: int, n_bits: int) -> int:
    if _core is not None and len(basis) >= 16:
        import numpy as np

        nw = max(1, (n_bits + 63) // 64)
        mat = np.zeros((len(basis), nw), dtype=np.uint64)
        for i, v in enumerate(basis):
            mat[i] = np.frombuffer(v.to_bytes(nw * 8, "little"), dtype=np.uint64)
        s = np.frombuffer(start.to_bytes(nw * 8, "little"), dtype=np.uint64).copy()
        return _core.gray_min_weight(mat, s)
    return _gf2_py.gray_min_weight(basis, start)


def consistency_many(
    ab_rows: Sequence[int], n_cols: int, sets: Sequence[Sequence[int]]
) -> list[Optional[int]]:
    """Batch consistency over row subsets of one packed system.

    Each entry of ``ab_rows`` packs a coefficient row with its right-hand
    side bit at position ``n_cols``.  Returns, per subset, None when the
    subsystem A.x = b is consistent, else the certificate over the subset's
    rows (bit i of the certificate refers to the i-th row of the subset).
    """
    if (
        _core is not None
        and n_cols < 64
        and sets
        and all(len(s) == len(sets[0]) for s in sets)
        and len(ab_rows) < 65536
    ):
        import numpy as np

        ab = np.array(ab_rows, dtype=np.uint64)
        idx = np.array(sets, dtype=np.uint16)
        return _core.consistency_batch(ab, idx, n_cols)
    return _gf2_py.consistency_batch(ab_rows, n_cols, sets)


def backend_name() -> str:
    from . import _backend

    return _backend.name
