"""
Oriented matroid of a lifted integer point configuration.

Each point b_i of a configuration is lifted to the vector e_i = (b_i, 1).
The oriented matroid is recorded through its cocircuits, computed with exact
rational linear algebra (sympy); no floating point is used anywhere.

Provided here:
- PointConfiguration: validated input data (name, dim, points, labels)
- OrientedMatroid: cocircuits, circuits, covectors, acyclicity,
  extreme-point and matroid-polytope tests, reorientations
"""

import logging
import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix

from src.core.sign_vectors import (
    SignVector,
    compose,
    mask_of,
    negate,
    positions_of,
    reorient_mask,
)

logger = logging.getLogger(__name__)


# ============================================================================
# EXCEPTIONS
# ============================================================================

class ConfigurationError(ValueError):
    """Raised when a point configuration is malformed."""
    pass


class DegenerateConfigurationError(ConfigurationError):
    """Raised when the configuration has repeated points or rank 0."""
    pass


class UnknownElementError(ValueError):
    """Raised when an element label is not part of the ground set."""
    pass


# ============================================================================
# POINT CONFIGURATION
# ============================================================================

@dataclass(frozen=True)
class PointConfiguration:
    """Finite set of distinct integer points with element labels."""
    name: str
    dim: int
    points: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        points = tuple(tuple(point) for point in self.points)
        object.__setattr__(self, "points", points)
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(len(points)))
        object.__setattr__(self, "labels", labels)

        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise ConfigurationError(f"dim must be an integer >= 1, got {self.dim!r}")
        if not points:
            raise ConfigurationError("Configuration has no points")
        for point in points:
            if len(point) != self.dim:
                raise ConfigurationError(f"Point {point} does not have dimension {self.dim}")
            if any(not isinstance(x, int) or isinstance(x, bool) for x in point):
                raise ConfigurationError(f"Point {point} has non-integer coordinates")
        if len(labels) != len(points):
            raise ConfigurationError(f"{len(labels)} labels for {len(points)} points")
        if len(set(labels)) != len(labels):
            raise ConfigurationError("Element labels must be distinct")
        if len(set(points)) != len(points):
            raise DegenerateConfigurationError("Configuration contains repeated points")

    @property
    def n(self) -> int:
        return len(self.points)

    def lifted(self) -> List[Tuple[int, ...]]:
        """The vectors e_i = (b_i, 1)."""
        return [point + (1,) for point in self.points]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownElementError(f"Unknown element {label!r}") from None

    def restrict(self, labels: Iterable[str]) -> "PointConfiguration":
        """Sub-configuration on `labels`, keeping the original file order."""
        keep = {self.index_of(label) for label in labels}
        indices = sorted(keep)
        return PointConfiguration(
            name=f"{self.name}|{len(indices)}",
            dim=self.dim,
            points=tuple(self.points[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
        )

    def delete(self, label: str) -> "PointConfiguration":
        index = self.index_of(label)
        return self.restrict(l for i, l in enumerate(self.labels) if i != index)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PointConfiguration":
        """Builds a configuration from the JSON input format."""
        try:
            points = [tuple(point) for point in data["points"]]
            dim = data.get("dim", len(points[0]) if points else 0)
            return cls(
                name=str(data.get("name", "configuration")),
                dim=dim,
                points=tuple(points),
                labels=tuple(str(label) for label in data.get("labels") or ()),
            )
        except (KeyError, TypeError, IndexError) as e:
            raise ConfigurationError(f"Malformed configuration document: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "labels": list(self.labels),
            "points": [list(point) for point in self.points],
        }


# ============================================================================
# LINEAR ALGEBRA HELPERS
# ============================================================================

def _sign(value) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix given by rows (0 for no rows)."""
    if not rows:
        return 0
    return Matrix(rows).rank()


def _spanning_columns(rows: Sequence[Sequence[int]], rank: int) -> List[int]:
    """Greedy choice of `rank` coordinates on which the rows keep full rank."""
    chosen: List[int] = []
    for column in range(len(rows[0])):
        candidate = chosen + [column]
        if exact_rank([[row[c] for c in candidate] for row in rows]) > len(chosen):
            chosen = candidate
        if len(chosen) == rank:
            break
    return chosen


# ============================================================================
# ORIENTED MATROID
# ============================================================================

class OrientedMatroid:
    """
    Realizable oriented matroid given by its cocircuits and lifted vectors.

    Instances are immutable. The covector set is completed lazily, once,
    under a lock; every other query is read-only.
    """

    def __init__(
        self,
        labels: Sequence[str],
        rank: int,
        cocircuits: Iterable[SignVector],
        vectors: Sequence[Sequence[int]],
        name: str = "",
    ):
        self._labels = tuple(labels)
        self._rank = rank
        self._vectors = tuple(tuple(v) for v in vectors)
        self._name = name
        self._cocircuits = frozenset(cocircuits)
        self._masks = tuple((c.plus, c.minus) for c in self._cocircuits)
        self._index = {label: i for i, label in enumerate(self._labels)}
        self._covectors: Optional[FrozenSet[SignVector]] = None
        self._circuits: Optional[FrozenSet[SignVector]] = None
        self._lock = threading.Lock()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_points(cls, config: PointConfiguration) -> "OrientedMatroid":
        """
        Oriented matroid of the lifted configuration.

        For every linearly independent (r-1)-subset S of lifted vectors the
        hyperplane spanned by S has a normal (exact nullspace); the signs of
        its pairing with each e_j give a cocircuit. Both orientations are
        stored; duplicates collapse in the set.

        Raises:
            DegenerateConfigurationError: If the lifted rank is 0.
        """
        lifted = config.lifted()
        rank = exact_rank(lifted)
        if rank == 0:
            raise DegenerateConfigurationError(f"{config.name}: lifted rank is 0")

        # Coordinates on which the projection is injective on span(E).
        columns = _spanning_columns(lifted, rank)
        projected = [tuple(row[c] for c in columns) for row in lifted]

        n = config.n
        cocircuits = set()
        skipped = 0
        for subset in combinations(range(n), rank - 1):
            if rank == 1:
                normal = (1,)
            else:
                basis = Matrix([projected[i] for i in subset]).nullspace()
                if len(basis) != 1:
                    skipped += 1
                    continue
                normal = tuple(basis[0])
            signs = [
                _sign(sum(a * b for a, b in zip(normal, projected[j])))
                for j in range(n)
            ]
            vector = SignVector.from_signs(signs)
            cocircuits.add(vector)
            cocircuits.add(negate(vector))

        logger.debug(
            f"{config.name}: rank {rank}, {len(cocircuits)} cocircuits "
            f"({skipped} deficient subsets skipped)"
        )
        return cls(config.labels, rank, cocircuits, lifted, name=config.name)

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def name(self) -> str:
        return self._name

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def ground_size(self) -> int:
        return len(self._labels)

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def vectors(self) -> Tuple[Tuple[int, ...], ...]:
        return self._vectors

    @property
    def cocircuits(self) -> FrozenSet[SignVector]:
        return self._cocircuits

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElementError(f"Unknown element {label!r}") from None

    def mask_of_labels(self, labels: Iterable[str]) -> int:
        return mask_of((self.index_of(label) for label in labels), self.ground_size)

    def labels_of_mask(self, mask: int) -> Tuple[str, ...]:
        return tuple(self._labels[i] for i in positions_of(mask))

    def rank_of(self, labels: Iterable[str]) -> int:
        """Exact rank of the lifted sub-configuration on `labels`."""
        return self.rank_of_mask(self.mask_of_labels(labels))

    def rank_of_mask(self, mask: int) -> int:
        return exact_rank([self._vectors[i] for i in positions_of(mask)])

    # ------------------------------------------------------------------
    # Covectors
    # ------------------------------------------------------------------

    def is_covector(self, vector: SignVector) -> bool:
        """
        Membership test by conformal decomposition.

        A sign vector is a covector iff it equals the composition of all
        cocircuits conforming to it.
        """
        if vector.size != self.ground_size:
            return False
        plus = minus = 0
        for c_plus, c_minus in self._masks:
            if c_plus & ~vector.plus or c_minus & ~vector.minus:
                continue
            plus |= c_plus
            minus |= c_minus
        return plus == vector.plus and minus == vector.minus

    def covectors(self) -> FrozenSet[SignVector]:
        """All covectors: closure of {0} and the cocircuits under composition."""
        with self._lock:
            if self._covectors is None:
                zero = SignVector.zero(self.ground_size)
                found = {zero}
                frontier = [zero]
                while frontier:
                    current = frontier.pop()
                    for cocircuit in self._cocircuits:
                        composed = compose(current, cocircuit)
                        if composed not in found:
                            found.add(composed)
                            frontier.append(composed)
                self._covectors = frozenset(found)
                logger.debug(f"{self._name}: covector closure has {len(found)} elements")
            return self._covectors

    def nonnegative_covectors(self) -> FrozenSet[SignVector]:
        """
        Covectors without negative entries.

        These are exactly the compositions of nonnegative cocircuits, i.e.
        unions of their positive supports.
        """
        supports = {plus for plus, minus in self._masks if not minus}
        found = {0}
        frontier = [0]
        while frontier:
            current = frontier.pop()
            for plus in supports:
                union = current | plus
                if union not in found:
                    found.add(union)
                    frontier.append(union)
        return frozenset(SignVector(self.ground_size, plus, 0) for plus in found)

    # ------------------------------------------------------------------
    # Polytope tests
    # ------------------------------------------------------------------

    def is_acyclic(self) -> bool:
        return self.is_covector(SignVector.all_plus(self.ground_size))

    def xi(self, labels: Iterable[str]) -> SignVector:
        """Sign vector with zero exactly on `labels` and + elsewhere."""
        zero = self.mask_of_labels(labels)
        full = (1 << self.ground_size) - 1
        return SignVector(self.ground_size, full & ~zero, 0)

    def is_extreme(self, label: str) -> bool:
        return self.is_covector(self.xi([label]))

    def is_matroid_polytope(self) -> bool:
        return self.is_acyclic() and all(self.is_extreme(label) for label in self._labels)

    # ------------------------------------------------------------------
    # Circuits
    # ------------------------------------------------------------------

    def circuits(self) -> FrozenSet[SignVector]:
        """
        Signed circuits: minimal linear dependencies of the lifted vectors.

        A subset is a circuit iff its dependency space is one-dimensional
        and the dependency uses every member.
        """
        with self._lock:
            if self._circuits is None:
                n = self.ground_size
                found = set()
                for size in range(1, self._rank + 2):
                    for subset in combinations(range(n), size):
                        columns = Matrix([self._vectors[i] for i in subset]).T
                        basis = columns.nullspace()
                        if len(basis) != 1:
                            continue
                        coefficients = tuple(basis[0])
                        if any(c == 0 for c in coefficients):
                            continue
                        signs = [0] * n
                        for position, coefficient in zip(subset, coefficients):
                            signs[position] = _sign(coefficient)
                        vector = SignVector.from_signs(signs)
                        found.add(vector)
                        found.add(negate(vector))
                self._circuits = frozenset(found)
            return self._circuits

    # ------------------------------------------------------------------
    # Reorientation
    # ------------------------------------------------------------------

    def reorient(self, labels: Iterable[str]) -> "OrientedMatroid":
        """Oriented matroid with the signs of `labels` flipped."""
        return self._reoriented(self.mask_of_labels(labels))

    def _reoriented(self, mask: int) -> "OrientedMatroid":
        vectors = [
            tuple(-x for x in vector) if mask >> i & 1 else vector
            for i, vector in enumerate(self._vectors)
        ]
        return OrientedMatroid(
            self._labels,
            self._rank,
            (reorient_mask(c, mask) for c in self._cocircuits),
            vectors,
            name=self._name,
        )

    def reorient_initial(self, ordering: Sequence[str], k: int) -> "OrientedMatroid":
        """
        Reorientation on the initial set of the first `k` elements of `ordering`.

        Raises:
            ValueError: If k is outside 0..n.
        """
        if not 0 <= k <= self.ground_size:
            raise ValueError(f"k={k} outside 0..{self.ground_size}")
        if k == 0:
            return self
        return self.reorient(list(ordering)[:k])

    def is_acyclic_after_flip(self, mask: int) -> bool:
        """Acyclicity of the reorientation on `mask`, without building it."""
        full = (1 << self.ground_size) - 1
        union = 0
        for plus, minus in self._masks:
            if (minus & ~mask) | (plus & mask):
                continue
            union |= (plus & ~mask) | (minus & mask)
        return union == full

    def __getstate__(self) -> Dict[str, Any]:
        state = dict(self.__dict__)
        del state["_lock"]
        return state

    def __setstate__(self, state: Dict[str, Any]) -> None:
        self.__dict__.update(state)
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return (
            f"OrientedMatroid(name={self._name!r}, n={self.ground_size}, "
            f"rank={self._rank}, cocircuits={len(self._cocircuits)})"
        )
