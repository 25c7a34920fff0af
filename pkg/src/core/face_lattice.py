"""
Face lattice of a matroid polytope.

Faces are read off the covectors through the anti-isomorphism Xi: a subset
F of E is a face iff the sign vector that is zero on F and + elsewhere is a
covector. Only nonnegative covectors are scanned, never all 2^n subsets.

Also computes the f-vector, the h*-vector and the Euler-Poincare check.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy import binomial

from src.core.oriented_matroid import OrientedMatroid
from src.core.sign_vectors import SignVector

logger = logging.getLogger(__name__)


# ============================================================================
# EXCEPTIONS
# ============================================================================

class NotAMatroidPolytopeError(ValueError):
    """Raised when an oriented matroid is not acyclic or has a non-extreme element."""
    pass


class NotAFaceError(ValueError):
    """Raised when an element set is not a face of the lattice."""
    pass


# ============================================================================
# DATA CLASSES
# ============================================================================

@dataclass(frozen=True)
class Face:
    """A face: its element set and its matroid rank."""
    elements: FrozenSet[str]
    rank: int

    def __len__(self) -> int:
        return len(self.elements)

    def ordered(self, labels: Sequence[str]) -> List[str]:
        """Elements listed in ground-set order."""
        return [label for label in labels if label in self.elements]

    def key(self, labels: Sequence[str]) -> str:
        return ",".join(self.ordered(labels))


class FaceLattice:
    """
    Ranked family of faces ordered by inclusion, both trivial faces included.

    Immutable after construction.
    """

    def __init__(self, labels: Sequence[str], rank: int, faces: Iterable[Face], name: str = ""):
        self._labels = tuple(labels)
        self._rank = rank
        self._name = name
        position = {label: i for i, label in enumerate(self._labels)}
        unique = {face.elements: face for face in faces}
        self._faces = tuple(sorted(
            unique.values(),
            key=lambda f: (f.rank, sorted(position[e] for e in f.elements)),
        ))
        self._by_elements = {face.elements: face for face in self._faces}
        self._f_vector: Optional[Tuple[int, ...]] = None

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def name(self) -> str:
        return self._name

    @property
    def faces(self) -> Tuple[Face, ...]:
        return self._faces

    def __len__(self) -> int:
        return len(self._faces)

    def __iter__(self):
        return iter(self._faces)

    def faces_of_rank(self, rank: int) -> List[Face]:
        return [face for face in self._faces if face.rank == rank]

    def contains(self, elements: Iterable[str]) -> bool:
        return frozenset(elements) in self._by_elements

    def face(self, elements: Iterable[str]) -> Face:
        key = frozenset(elements)
        try:
            return self._by_elements[key]
        except KeyError:
            raise NotAFaceError(f"{sorted(key)} is not a face of {self._name or 'the lattice'}") from None

    @property
    def f_vector(self) -> Tuple[int, ...]:
        """(f_-1, f_0, ..., f_{r-1}); f_l counts the faces of rank l+1."""
        if self._f_vector is None:
            counts = [0] * (self._rank + 1)
            for face in self._faces:
                counts[face.rank] += 1
            self._f_vector = tuple(counts)
        return self._f_vector

    def h_star(self) -> Tuple[int, ...]:
        return h_star_from_f(self.f_vector)

    def euler_ok(self) -> bool:
        return euler_sum(self.f_vector) == 0

    def is_intersection_closed(self) -> bool:
        for i, first in enumerate(self._faces):
            for second in self._faces[i + 1:]:
                if first.elements & second.elements not in self._by_elements:
                    return False
        return True

    def restrict_to(self, face: Face) -> "FaceLattice":
        """Lattice of `face`, seen as a matroid polytope on its own elements."""
        face = self.face(face.elements)
        return FaceLattice(
            face.ordered(self._labels),
            face.rank,
            (f for f in self._faces if f.elements <= face.elements),
            name=f"{self._name}|{face.key(self._labels)}",
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self._name,
            "rank": self._rank,
            "faces": [
                {"elements": face.ordered(self._labels), "rank": face.rank}
                for face in self._faces
            ],
            "f": list(self.f_vector),
            "h_star": list(self.h_star()),
            "euler_ok": self.euler_ok(),
        }


# ============================================================================
# FACE ENUMERATION
# ============================================================================

def faces(om: OrientedMatroid) -> FaceLattice:
    """
    Face lattice of a matroid polytope.

    Raises:
        NotAMatroidPolytopeError: If `om` is not a matroid polytope.
    """
    if not om.is_acyclic():
        raise NotAMatroidPolytopeError(f"{om.name}: oriented matroid is not acyclic")
    non_extreme = [label for label in om.labels if not om.is_extreme(label)]
    if non_extreme:
        raise NotAMatroidPolytopeError(f"{om.name}: elements {non_extreme} are not extreme points")

    full = (1 << om.ground_size) - 1
    zero_sets = {full & ~covector.plus for covector in om.nonnegative_covectors()}
    zero_sets.update((0, full))

    lattice = FaceLattice(
        om.labels,
        om.rank,
        (Face(frozenset(om.labels_of_mask(mask)), om.rank_of_mask(mask)) for mask in zero_sets),
        name=om.name,
    )
    logger.info(f"[OK] {om.name}: {len(lattice)} faces, f={list(lattice.f_vector)}")
    return lattice


def xi(lattice: FaceLattice, face: Face) -> SignVector:
    """Xi(F): zero on the elements of F, + elsewhere."""
    signs = [0 if label in face.elements else 1 for label in lattice.labels]
    return SignVector.from_signs(signs)


# ============================================================================
# F- AND H*-VECTORS
# ============================================================================

def f_vector(lattice: FaceLattice) -> Tuple[int, ...]:
    return lattice.f_vector


def h_star_from_f(f: Sequence[int]) -> Tuple[int, ...]:
    """
    h*-vector from a full f-vector (f_-1, ..., f_{r-1}).

    h*_l = sum_{i=0..l} (-1)^(l-i) C(r-1-i, l-i) f_{r-1-i}
    """
    r = len(f) - 1

    def f_at(l: int) -> int:
        return f[l + 1]

    return tuple(
        sum(
            (-1) ** (l - i) * int(binomial(r - 1 - i, l - i)) * f_at(r - 1 - i)
            for i in range(l + 1)
        )
        for l in range(r)
    )


def h_star(lattice: FaceLattice) -> Tuple[int, ...]:
    return h_star_from_f(lattice.f_vector)


def f_from_h_star(h: Sequence[int], r: Optional[int] = None) -> Tuple[int, ...]:
    """
    Full f-vector (f_-1 = 1, f_0, ..., f_{r-1}) recovered from h*.

    f_l = sum_{i=0..r-1-l} C(r-1-i, l) h*_i
    """
    r = len(h) if r is None else r
    if len(h) != r:
        raise ValueError(f"h*-vector of length {len(h)} for rank {r}")
    f = [
        sum(int(binomial(r - 1 - i, l)) * h[i] for i in range(r - l))
        for l in range(r)
    ]
    return (1, *f)


def euler_sum(f: Sequence[int]) -> int:
    """sum_{i=-1..r-1} (-1)^i f_i for a full f-vector."""
    return sum((-1) ** (i + 1) * value for i, value in enumerate(f))


def euler_check(lattice: FaceLattice) -> bool:
    return lattice.euler_ok()
