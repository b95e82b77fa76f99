"""Pure Python GF(2) kernels.

Vectors are Python ints: bit j is column j, so the leftmost column is the
lowest bit.  The elimination processes rows in input order and always pivots
on the lowest set column bit; the compiled backend replays the exact same
sequence of row operations, so solutions and certificates are identical
between backends.

Packed row layout used by the solver: bits [0, n_cols) hold the coefficient
row, bit n_cols holds the right-hand side, bits above that hold the row
bookkeeping y (row i starts with y = e_i).  A row that reduces to zero
coefficients with right-hand side 1 exposes an inconsistency, and its y part
is the certificate: y.A = 0, y.b = 1.
"""

from __future__ import annotations

from typing import Optional, Sequence


def rank_rows(rows: Sequence[int]) -> int:
    """Rank of the span of ``rows`` over GF(2)."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            c = (row & -row).bit_length() - 1
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = row
                rank += 1
                break
            row ^= piv
    return rank


def eliminate_packed(
    rows: Sequence[int], b_bits: int, n_cols: int
) -> tuple[Optional[int], dict[int, int], list[int]]:
    """Run the pivoting pass over packed rows.

    Returns ``(certificate, pivot_rows, work)`` where ``certificate`` is the
    y part of the first row that closed an inconsistency (None if the system
    is consistent), ``pivot_rows`` maps pivot column to its index in ``work``
    and ``work`` holds the reduced packed rows.
    """
    a_mask = (1 << n_cols) - 1
    b_pos = n_cols
    y_pos = n_cols + 1
    work: list[int] = []
    pivot_rows: dict[int, int] = {}
    for i, row in enumerate(rows):
        acc = (row & a_mask) | (((b_bits >> i) & 1) << b_pos) | (1 << (y_pos + i))
        while True:
            a_part = acc & a_mask
            if a_part == 0:
                break
            c = (a_part & -a_part).bit_length() - 1
            slot = pivot_rows.get(c)
            if slot is None:
                pivot_rows[c] = len(work)
                break
            acc ^= work[slot]
        work.append(acc)
        if (acc & a_mask) == 0 and (acc >> b_pos) & 1:
            return acc >> y_pos, pivot_rows, work
    return None, pivot_rows, work


def solve_rows(
    rows: Sequence[int], b_bits: int, n_cols: int
) -> tuple[Optional[int], Optional[int]]:
    """Solve A.x = b.  Returns ``(x, None)`` or ``(None, certificate)``.

    Free variables are fixed to 0, so the solution is deterministic.
    """
    cert, pivot_rows, work = eliminate_packed(rows, b_bits, n_cols)
    if cert is not None:
        return None, cert
    a_mask = (1 << n_cols) - 1
    b_pos = n_cols
    x = 0
    for c in sorted(pivot_rows, reverse=True):
        row = work[pivot_rows[c]]
        a_part = row & a_mask
        val = (row >> b_pos) & 1
        val ^= ((a_part & ~(1 << c)) & x).bit_count() & 1
        if val:
            x |= 1 << c
    return x, None


def consistency_batch(
    ab_rows: Sequence[int], n_cols: int, sets: Sequence[Sequence[int]]
) -> list[Optional[int]]:
    """Check many row subsets of one system.

    ``ab_rows`` pack each coefficient row with its right-hand side bit at
    position ``n_cols``.  For each index subset the entry is None when the
    subsystem is consistent, else the certificate over the subset's rows.
    """
    a_mask = (1 << n_cols) - 1
    b_pos = n_cols
    y_pos = n_cols + 1
    out: list[Optional[int]] = []
    for subset in sets:
        work: list[int] = []
        pivot_rows: dict[int, int] = {}
        cert: Optional[int] = None
        for i, ri in enumerate(subset):
            acc = ab_rows[ri] | (1 << (y_pos + i))
            while True:
                a_part = acc & a_mask
                if a_part == 0:
                    break
                c = (a_part & -a_part).bit_length() - 1
                slot = pivot_rows.get(c)
                if slot is None:
                    pivot_rows[c] = len(work)
                    break
                acc ^= work[slot]
            work.append(acc)
            if (acc & a_mask) == 0 and (acc >> b_pos) & 1:
                cert = acc >> y_pos
                break
        out.append(cert)
    return out


def image_basis(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of the column space, as vectors over the row index bits."""
    n_rows = len(rows)
    basis: list[int] = []
    pivots: dict[int, int] = {}
    for c in range(n_cols):
        col = 0
        for i in range(n_rows):
            col |= ((rows[i] >> c) & 1) << i
        v = col
        while v:
            lead = (v & -v).bit_length() - 1
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = v
                basis.append(v)
                break
            v ^= piv
    return basis


def gray_min_weight(basis: Sequence[int], start: int) -> int:
    """Minimum Hamming weight over the coset ``start + span(basis)``.

    Walks the span in Gray-code order so each step is one basis XOR.
    """
    cur = start
    best = cur.bit_count()
    if best == 0 or not basis:
        return best
    for t in range(1, 1 << len(basis)):
        cur ^= basis[(t & -t).bit_length() - 1]
        w = cur.bit_count()
        if w < best:
            best = w
            if best == 0:
                break
    return best


def expand_copy(perms: Sequence[Sequence[int]], lines: Sequence[int]) -> list[bytes]:
    """Apply each line permutation to a sorted line-index tuple.

    Returns the canonical byte keys (native-order u16 arrays) of the images.
    """
    import array

    out = []
    for perm in perms:
        image = sorted(perm[i] for i in lines)
        out.append(array.array("H", image).tobytes())
    return out
