"""Exact algebra of the N-qubit Pauli group with global-phase tracking.

Every group element is stored in the normal-ordered factorization

    O = i^a * (Z^mu_1 X^nu_1) ox ... ox (Z^mu_N X^nu_N),   a in Z_4,

so an element is a triple (phase exponent, Z-mask, X-mask).  Masks are plain
ints; the leftmost character of the string form is the highest mask bit, i.e.
"ZZI" has z_mask 0b110.  The per-qubit doublets are

    I <-> (0,0),  X <-> (0,1),  Z <-> (1,0),  iY <-> (1,1),

so the canonical Hermitian representative of a class carries phase exponent
3 * (#Y) mod 4.  Multiplication only ever needs the reordering rule
X^nu Z^mu = (-1)^(nu.mu) Z^mu X^nu, which keeps signs of contexts an integer
computation with no matrix algebra anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    MalformedObservable,
    NotMutuallyCommuting,
    ProductNotIdentity,
)

_LETTER_TO_DOUBLET = {"I": (0, 0), "X": (0, 1), "Z": (1, 0), "Y": (1, 1)}
_DOUBLET_TO_LETTER = {v: k for k, v in _LETTER_TO_DOUBLET.items()}
_SIGN_PREFIX = {"+": 0, "-": 2, "i": 1, "-i": 3, "+i": 1}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliObservable:
    """An element of the N-qubit Pauli group, phases included."""

    n_qubits: int
    phase_exp: int
    z_mask: int
    x_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise MalformedObservable("observable needs at least one qubit")
        full = (1 << self.n_qubits) - 1
        if not (0 <= self.z_mask <= full and 0 <= self.x_mask <= full):
            raise MalformedObservable("mask has bits outside the qubit range")
        if not 0 <= self.phase_exp <= 3:
            raise MalformedObservable("phase exponent must be reduced mod 4")

    @property
    def y_count(self) -> int:
        """Number of tensor factors equal to Y (up to phase)."""
        return (self.z_mask & self.x_mask).bit_count()

    def is_identity_class(self) -> bool:
        return self.z_mask == 0 and self.x_mask == 0

    def is_canonical(self) -> bool:
        """True for the Hermitian, +1-signed representative of the class."""
        return self.phase_exp == (3 * self.y_count) % 4

    def body(self) -> str:
        """The letters IXYZ without any sign prefix."""
        letters = []
        for k in range(self.n_qubits - 1, -1, -1):
            bit = 1 << k
            letters.append(
                _DOUBLET_TO_LETTER[(1 if self.z_mask & bit else 0, 1 if self.x_mask & bit else 0)]
            )
        return "".join(letters)

    def __str__(self) -> str:
        return to_string(self)

    def __mul__(self, other: "PauliObservable") -> "PauliObservable":
        return multiply(self, other)


def identity(n_qubits: int) -> PauliObservable:
    return PauliObservable(n_qubits, 0, 0, 0)


def canonical_observable(n_qubits: int, z_mask: int, x_mask: int) -> PauliObservable:
    """The Hermitian, +1-signed representative with the given masks."""
    phase = (3 * (z_mask & x_mask).bit_count()) % 4
    return PauliObservable(n_qubits, phase, z_mask, x_mask)


def parse(text: str) -> PauliObservable:
    """Parse ``sign? [IXYZ]+`` with sign in {+, -, i, -i}.

    The phase exponent of the result reflects both the sign prefix and the
    Y-factor convention, so parse/to_string round-trip exactly.
    """
    if not isinstance(text, str):
        raise MalformedObservable(f"expected a string, got {type(text).__name__}")
    body = text.strip()
    prefix_phase = 0
    for prefix in ("-i", "+i", "-", "+", "i"):
        if body.startswith(prefix):
            prefix_phase = _SIGN_PREFIX[prefix]
            body = body[len(prefix):]
            break
    if not body:
        raise MalformedObservable(f"empty observable body in {text!r}")
    z_mask = 0
    x_mask = 0
    for ch in body:
        doublet = _LETTER_TO_DOUBLET.get(ch)
        if doublet is None:
            raise MalformedObservable(f"invalid character {ch!r} in {text!r}")
        z_mask = (z_mask << 1) | doublet[0]
        x_mask = (x_mask << 1) | doublet[1]
    n = len(body)
    phase = (prefix_phase + 3 * (z_mask & x_mask).bit_count()) % 4
    return PauliObservable(n, phase, z_mask, x_mask)


def to_string(obs: PauliObservable) -> str:
    """Canonical string form; the Hermitian +1 representative has no prefix."""
    residue = (obs.phase_exp - 3 * obs.y_count) % 4
    return _PHASE_PREFIX[residue] + obs.body()


def multiply(a: PauliObservable, b: PauliObservable) -> PauliObservable:
    """The group product a * b with the phase tracked mod 4."""
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    # Moving X^nu_a leftward past Z^mu_b costs one sign per overlapping qubit.
    swaps = (a.x_mask & b.z_mask).bit_count()
    phase = (a.phase_exp + b.phase_exp + 2 * (swaps & 1)) % 4
    return PauliObservable(a.n_qubits, phase, a.z_mask ^ b.z_mask, a.x_mask ^ b.x_mask)


def commutes(a: PauliObservable, b: PauliObservable) -> bool:
    """True iff the observables commute (symplectic product of the masks is 0)."""
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    return (
        (a.z_mask & b.x_mask).bit_count() + (a.x_mask & b.z_mask).bit_count()
    ) % 2 == 0


def context_sign(obs: Sequence[PauliObservable] | Iterable[PauliObservable]) -> int:
    """Sign of a context: +1 or -1 such that the product equals sign * identity.

    Requires a pairwise commuting family whose masks sum to zero, which makes
    the result independent of the multiplication order.
    """
    items = list(obs)
    if not items:
        return 1
    n = items[0].n_qubits
    for o in items:
        if o.n_qubits != n:
            raise DimensionMismatch("mixed qubit counts in context")
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if not commutes(items[i], items[j]):
                raise NotMutuallyCommuting(
                    f"{to_string(items[i])} and {to_string(items[j])} anticommute"
                )
    product = items[0]
    for o in items[1:]:
        product = multiply(product, o)
    if not product.is_identity_class():
        raise ProductNotIdentity(f"context product is {to_string(product)}")
    # Commuting Hermitian factors force a Hermitian product, so the phase is
    # even; anything else is an internal phase bookkeeping bug.
    assert product.phase_exp % 2 == 0, "internal phase error: odd product phase"
    return 1 if product.phase_exp == 0 else -1
