"""
Sign-vector algebra for oriented matroids.

A sign vector is an element of {-, 0, +}^E. Covectors, cocircuits, circuits
and topes are all sign vectors. This module provides:
- Storage as two bitmasks (positive support, negative support)
- Support, composition, negation and reorientation
- The face partial order on cells (conditions face.1 / face.2)
- Orthogonality, used to cross-check cocircuits against circuits

Bitmasks are plain Python ints, so ground sets larger than 64 elements work
without any special handling.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import FrozenSet, Iterable, Sequence, Tuple


# ============================================================================
# CONSTANTS
# ============================================================================

class Sign(IntEnum):
    """Entry of a sign vector. The integer order is - < 0 < +."""
    MINUS = -1
    ZERO = 0
    PLUS = 1


SIGN_SYMBOLS = {Sign.MINUS: "-", Sign.ZERO: "0", Sign.PLUS: "+"}
SYMBOL_SIGNS = {symbol: sign for sign, symbol in SIGN_SYMBOLS.items()}


# ============================================================================
# EXCEPTIONS
# ============================================================================

class AmbientSizeError(ValueError):
    """Raised when two sign vectors over different ground sets are combined."""
    pass


class ElementIndexError(ValueError):
    """Raised when an element position lies outside the ground set."""
    pass


class SignParseError(ValueError):
    """Raised when a sign string contains symbols outside {+, -, 0}."""
    pass


# ============================================================================
# SIGN VECTOR
# ============================================================================

@dataclass(frozen=True)
class SignVector:
    """
    Sign vector over a ground set of `size` elements (positions 0..size-1).

    `plus` and `minus` are disjoint bitmasks: bit i of `plus` is set iff the
    entry at position i is +, and likewise for `minus`.
    """
    size: int
    plus: int = 0
    minus: int = 0

    def __post_init__(self):
        if self.size < 0:
            raise AmbientSizeError(f"Negative ground-set size: {self.size}")
        if self.plus & self.minus:
            raise ValueError("Positive and negative supports overlap")
        if (self.plus | self.minus) >> self.size:
            raise ElementIndexError(
                f"Support exceeds ground set of size {self.size}"
            )

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "SignVector":
        """Builds a sign vector from a sequence of -1/0/+1 values."""
        plus = minus = 0
        for position, value in enumerate(signs):
            sign = Sign(value)
            if sign is Sign.PLUS:
                plus |= 1 << position
            elif sign is Sign.MINUS:
                minus |= 1 << position
        return cls(len(signs), plus, minus)

    @classmethod
    def from_string(cls, text: str) -> "SignVector":
        """Parses the serialized form, e.g. "+0-+"."""
        try:
            return cls.from_signs([SYMBOL_SIGNS[symbol] for symbol in text])
        except KeyError as e:
            raise SignParseError(f"Invalid sign symbol {e} in {text!r}") from None

    @classmethod
    def zero(cls, size: int) -> "SignVector":
        return cls(size)

    @classmethod
    def all_plus(cls, size: int) -> "SignVector":
        return cls(size, (1 << size) - 1, 0)

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def support_mask(self) -> int:
        return self.plus | self.minus

    @property
    def zero_mask(self) -> int:
        return self.full_mask & ~self.support_mask

    @property
    def signs(self) -> Tuple[Sign, ...]:
        return tuple(self[i] for i in range(self.size))

    def is_zero(self) -> bool:
        return not self.support_mask

    def is_nonnegative(self) -> bool:
        return not self.minus

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, position: int) -> Sign:
        if not 0 <= position < self.size:
            raise ElementIndexError(f"Position {position} outside 0..{self.size - 1}")
        bit = 1 << position
        if self.plus & bit:
            return Sign.PLUS
        if self.minus & bit:
            return Sign.MINUS
        return Sign.ZERO

    def __neg__(self) -> "SignVector":
        return negate(self)

    def to_string(self) -> str:
        return "".join(SIGN_SYMBOLS[sign] for sign in self.signs)

    def __str__(self) -> str:
        return self.to_string()

    def sort_key(self) -> Tuple[int, ...]:
        """Lexicographic key under - < 0 < +."""
        return tuple(int(sign) for sign in self.signs)


# ============================================================================
# HELPERS
# ============================================================================

def _check_same_size(x: SignVector, y: SignVector) -> None:
    if x.size != y.size:
        raise AmbientSizeError(f"Ground-set sizes differ: {x.size} != {y.size}")


def mask_of(positions: Iterable[int], size: int) -> int:
    """Converts element positions into a bitmask, validating the range."""
    mask = 0
    for position in positions:
        if not 0 <= position < size:
            raise ElementIndexError(f"Position {position} outside 0..{size - 1}")
        mask |= 1 << position
    return mask


def positions_of(mask: int) -> Tuple[int, ...]:
    """Positions of the set bits of `mask`, in increasing order."""
    positions = []
    position = 0
    while mask:
        if mask & 1:
            positions.append(position)
        mask >>= 1
        position += 1
    return tuple(positions)


# ============================================================================
# OPERATIONS
# ============================================================================

def support(v: SignVector) -> FrozenSet[int]:
    """Positions of the nonzero entries of `v`."""
    return frozenset(positions_of(v.support_mask))


def is_face_cell(w_prime: SignVector, w: SignVector) -> bool:
    """
    True iff `w_prime` is a face of the cell `w`.

    supp(w') must lie in supp(w) and the two vectors must agree on supp(w').
    """
    _check_same_size(w_prime, w)
    return not (w_prime.plus & ~w.plus) and not (w_prime.minus & ~w.minus)


conforms = is_face_cell


def compose(x: SignVector, y: SignVector) -> SignVector:
    """(x o y)[i] = x[i] if x[i] != 0 else y[i]."""
    _check_same_size(x, y)
    free = ~x.support_mask
    return SignVector(x.size, x.plus | (y.plus & free), x.minus | (y.minus & free))


def compose_all(vectors: Iterable[SignVector], size: int) -> SignVector:
    """Left-to-right composition of `vectors`, starting from the zero vector."""
    result = SignVector.zero(size)
    for vector in vectors:
        result = compose(result, vector)
    return result


def negate(v: SignVector) -> SignVector:
    return SignVector(v.size, v.minus, v.plus)


def reorient_mask(v: SignVector, mask: int) -> SignVector:
    """Flips the entries of `v` at the positions set in `mask`."""
    keep = ~mask
    return SignVector(
        v.size,
        (v.plus & keep) | (v.minus & mask),
        (v.minus & keep) | (v.plus & mask),
    )


def reorient(v: SignVector, positions: Iterable[int]) -> SignVector:
    """Flips the entries of `v` at `positions` only."""
    return reorient_mask(v, mask_of(positions, v.size))


def is_orthogonal(x: SignVector, y: SignVector) -> bool:
    """
    Oriented-matroid orthogonality.

    Either the supports are disjoint, or on the common support the sign
    products are neither all equal nor all opposite.
    """
    _check_same_size(x, y)
    agree = (x.plus & y.plus) | (x.minus & y.minus)
    disagree = (x.plus & y.minus) | (x.minus & y.plus)
    if not (agree | disagree):
        return True
    return bool(agree) and bool(disagree)


def canonical(v: SignVector) -> SignVector:
    """Lexicographically first of v and -v under - < 0 < +."""
    other = negate(v)
    return min(v, other, key=SignVector.sort_key)
