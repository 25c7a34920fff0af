"""
Linear orderings of a matroid polytope: classification and search.

For an ordering e_1 < ... < e_n of the ground set this module decides:
- K-ordering: every non-empty face has exactly one sink
- shelling ordering: every initial-set reorientation stays acyclic
- condition (sh.1'), read on faces of rank >= 2
- the rank-3 criterion (unique sink on every rank-3 face)
and computes out/in-degree histograms, which for K-orderings of simple
matroid polytopes equal the h*-vector.

Two families of checkers live side by side:
- definitional checkers (module functions) built on OrderedDigraph views
  and OrientedMatroid reorientations, used for witnesses and tests;
- PolytopeContext, a precomputed bitmask index used by the searches.
"""

import logging
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from tqdm import tqdm

from src.core.face_lattice import FaceLattice, faces
from src.core.oriented_matroid import OrientedMatroid, PointConfiguration
from src.core.polytope_graph import (
    InvalidOrderingError,
    OrderedDigraph,
    PolytopeGraph,
    graph as build_graph,
    is_simple,
    lower_masks,
    positions_for,
    require_simple,
)
from src.core.sign_vectors import positions_of

logger = logging.getLogger(__name__)


# ============================================================================
# CONFIGURATION
# ============================================================================

class EnumerationConfig:
    """Defaults for ordering searches."""

    DEFAULT_SEED: int = 0
    DEFAULT_SAMPLES: int = 10_000
    # Keep at most this many examples of each kind of theorem violation.
    MAX_VIOLATION_EXAMPLES: int = 10
    FUNCTIONAL_WEIGHT_RANGE: int = 1_000_000


# ============================================================================
# EXCEPTIONS
# ============================================================================

class NotAKOrderingError(ValueError):
    """Raised when an operation that presupposes a K-ordering gets another ordering."""
    pass


# ============================================================================
# ENUMS & DATA CLASSES
# ============================================================================

class OrderingFilter(Enum):
    """Which orderings an enumeration emits."""
    K = "k"
    SHELLING = "shelling"
    BOTH = "both"
    NEITHER = "neither"
    K_NOT_SHELLING = "k-not-shelling"
    SHELLING_NOT_K = "shelling-not-k"
    ALL = "all"

    def matches(self, is_k: bool, is_shelling: bool) -> bool:
        return {
            OrderingFilter.K: is_k,
            OrderingFilter.SHELLING: is_shelling,
            OrderingFilter.BOTH: is_k and is_shelling,
            OrderingFilter.NEITHER: not is_k and not is_shelling,
            OrderingFilter.K_NOT_SHELLING: is_k and not is_shelling,
            OrderingFilter.SHELLING_NOT_K: is_shelling and not is_k,
            OrderingFilter.ALL: True,
        }[self]

    @property
    def accepts_neither(self) -> bool:
        return self in (OrderingFilter.NEITHER, OrderingFilter.ALL)


class EnumerationMode(Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


@dataclass(frozen=True)
class LinearOrdering:
    """Permutation of the element labels; position 0 is the least element."""
    sequence: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))
        if len(set(self.sequence)) != len(self.sequence):
            raise InvalidOrderingError(f"Ordering repeats elements: {list(self.sequence)}")

    @classmethod
    def parse(cls, text: str) -> "LinearOrdering":
        """Parses "e3,e1,e2"."""
        return cls(tuple(part.strip() for part in text.split(",") if part.strip()))

    def __iter__(self):
        return iter(self.sequence)

    def __len__(self) -> int:
        return len(self.sequence)

    def __getitem__(self, index):
        return self.sequence[index]

    def position(self, label: str) -> int:
        return self.sequence.index(label)

    def reversed(self) -> "LinearOrdering":
        return LinearOrdering(tuple(reversed(self.sequence)))

    def restrict(self, labels) -> "LinearOrdering":
        """Induced ordering on a subset of the elements."""
        keep = set(labels)
        return LinearOrdering(tuple(label for label in self.sequence if label in keep))

    def to_string(self) -> str:
        return ",".join(self.sequence)

    def __str__(self) -> str:
        return self.to_string()


@dataclass
class OrderingReport:
    """Classification of one ordering."""
    ordering: LinearOrdering
    is_k: bool
    is_shelling: bool
    is_sh1_prime: bool
    rank3_ok: bool
    h_star_ok: Optional[bool]
    sink_counts: Dict[str, int]
    d_plus_hist: Tuple[int, ...]
    d_minus_hist: Tuple[int, ...]
    seed: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ordering": list(self.ordering.sequence),
            "is_k": self.is_k,
            "is_shelling": self.is_shelling,
            "is_sh1_prime": self.is_sh1_prime,
            "rank3_ok": self.rank3_ok,
            "h_star_ok": self.h_star_ok,
            "sink_counts": dict(self.sink_counts),
            "d_plus_hist": list(self.d_plus_hist),
            "d_minus_hist": list(self.d_minus_hist),
            "seed": self.seed,
        }


@dataclass
class EnumerationSummary:
    """Counts of an enumeration; pruned subtrees are counted as 'neither'."""
    mode: str
    filter: str
    seed: Optional[int]
    space: int
    total: int = 0
    k: int = 0
    shelling: int = 0
    k_not_shelling: int = 0
    shelling_not_k: int = 0
    neither: int = 0
    examined: int = 0
    pruned: int = 0
    emitted: int = 0
    partial: bool = False

    @property
    def coverage(self) -> float:
        return self.total / self.space if self.space else 1.0

    def is_consistent(self) -> bool:
        both = self.shelling - self.shelling_not_k
        return (
            self.k + self.shelling_not_k + self.neither == self.total
            and self.k - self.k_not_shelling == both
            and 0 <= self.total <= self.space
        )

    def absorb(self, other: "EnumerationSummary") -> None:
        for name in ("total", "k", "shelling", "k_not_shelling", "shelling_not_k",
                     "neither", "examined", "pruned", "emitted"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.partial = self.partial or other.partial

    def record(self, is_k: bool, is_shelling: bool, count: int = 1) -> None:
        self.total += count
        if is_k:
            self.k += count
        if is_shelling:
            self.shelling += count
        if is_k and not is_shelling:
            self.k_not_shelling += count
        if is_shelling and not is_k:
            self.shelling_not_k += count
        if not is_k and not is_shelling:
            self.neither += count

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "filter": self.filter,
            "seed": self.seed,
            "space": self.space,
            "total": self.total,
            "k": self.k,
            "shelling": self.shelling,
            "k_not_shelling": self.k_not_shelling,
            "shelling_not_k": self.shelling_not_k,
            "neither": self.neither,
            "examined": self.examined,
            "pruned": self.pruned,
            "emitted": self.emitted,
            "partial": self.partial,
            "coverage": self.coverage,
        }


@dataclass
class EnumerationResult:
    reports: List[OrderingReport]
    summary: EnumerationSummary


# ============================================================================
# DEFINITIONAL CHECKERS
# ============================================================================

def _nonempty_faces(lattice: FaceLattice):
    return [face for face in lattice.faces if face.rank >= 1]


def k_ordering_sink_counts(
    lattice: FaceLattice, graph: PolytopeGraph, ordering: Sequence[str]
) -> Dict[str, int]:
    """Number of sinks of G<(F) for every non-empty face F."""
    digraph = OrderedDigraph(graph, ordering)
    return {
        face.key(lattice.labels): digraph.induced(graph.mask_of(face.elements)).sink_count()
        for face in _nonempty_faces(lattice)
    }


def is_k_ordering(lattice: FaceLattice, graph: PolytopeGraph, ordering: Sequence[str]) -> bool:
    """
    True iff every non-empty face has exactly one sink.

    Checks every face, ranks 1 and 2 included, without early exit.

    Raises:
        InvalidOrderingError: If `ordering` is not a permutation of E.
    """
    return all(count == 1 for count in k_ordering_sink_counts(lattice, graph, ordering).values())


def is_shelling_ordering(om: OrientedMatroid, ordering: Sequence[str]) -> bool:
    """True iff the reorientation on every initial set E_1, ..., E_n is acyclic."""
    sequence = list(ordering)
    if sorted(sequence) != sorted(om.labels) or len(sequence) != om.ground_size:
        raise InvalidOrderingError(f"Ordering {sequence} is not a permutation of {list(om.labels)}")
    return all(
        om.reorient_initial(sequence, k).is_acyclic()
        for k in range(1, om.ground_size + 1)
    )


def check_sh1_prime(lattice: FaceLattice, graph: PolytopeGraph, ordering: Sequence[str]) -> bool:
    """
    Condition (sh.1') on every face of rank >= 2.

    For every pair e_i < e_j in F some F-neighbour e_l of e_j has e_l < e_j.
    """
    digraph = OrderedDigraph(graph, ordering)
    position = {label: rank for rank, label in enumerate(ordering)}
    for face in lattice.faces:
        if face.rank < 2:
            continue
        view = digraph.induced(graph.mask_of(face.elements))
        members = sorted(face.elements, key=position.__getitem__)
        for j, e_j in enumerate(members):
            for e_i in members[:j]:
                if view.out_degree(e_j) == 0:
                    logger.debug(f"(sh.1') fails on {face.key(lattice.labels)} for pair {e_i}, {e_j}")
                    return False
    return True


def check_rank3_criterion(lattice: FaceLattice, graph: PolytopeGraph, ordering: Sequence[str]) -> bool:
    """True iff every rank-3 face has exactly one sink."""
    digraph = OrderedDigraph(graph, ordering)
    return all(
        digraph.induced(graph.mask_of(face.elements)).has_unique_sink()
        for face in lattice.faces_of_rank(3)
    )


def degree_histograms(
    graph: PolytopeGraph, ordering: Sequence[str], rank: int
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    (d+ histogram, d- histogram) over l = 0..rank-1.

    d+(e) counts the neighbours smaller than e (out-arcs), d-(e) the larger
    ones. Histograms are widened when a degree exceeds rank - 1.
    """
    return _histograms(graph, lower_masks(graph, positions_for(graph, ordering)), rank)


def _histograms(graph: PolytopeGraph, lower: Sequence[int], rank: int):
    degrees = [mask.bit_count() for mask in graph.adjacency]
    size = max([rank] + [d + 1 for d in degrees])
    d_plus = [0] * size
    d_minus = [0] * size
    for i, adjacent in enumerate(graph.adjacency):
        d_plus[lower[i].bit_count()] += 1
        d_minus[(adjacent & ~lower[i]).bit_count()] += 1
    return tuple(d_plus), tuple(d_minus)


def verify_h_star_theorem(lattice: FaceLattice, graph: PolytopeGraph, ordering: Sequence[str]) -> bool:
    """
    True iff the d+ histogram of a K-ordering equals the h*-vector.

    Raises:
        NotAKOrderingError: If `ordering` is not a K-ordering.
    """
    if not is_k_ordering(lattice, graph, ordering):
        raise NotAKOrderingError(f"{','.join(ordering)} is not a K-ordering")
    d_plus, _ = degree_histograms(graph, ordering, lattice.rank)
    return tuple(d_plus) == tuple(lattice.h_star())


def reverse(ordering: LinearOrdering) -> LinearOrdering:
    return ordering.reversed()


def functional_ordering(config: PointConfiguration, weights: Sequence[int]) -> LinearOrdering:
    """
    Orders the points by an integer linear functional.

    A generic functional (pairwise distinct values) yields an ordering that
    is both a K-ordering and a shelling ordering.

    Raises:
        ValueError: If the functional takes equal values on two points.
    """
    if len(weights) != config.dim:
        raise ValueError(f"{len(weights)} weights for dimension {config.dim}")
    values = [sum(w * x for w, x in zip(weights, point)) for point in config.points]
    if len(set(values)) != len(values):
        raise ValueError(f"Functional {list(weights)} is not generic on {config.name}")
    order = sorted(range(config.n), key=values.__getitem__)
    return LinearOrdering(tuple(config.labels[i] for i in order))


def random_functional_ordering(config: PointConfiguration, rng: random.Random) -> LinearOrdering:
    bound = EnumerationConfig.FUNCTIONAL_WEIGHT_RANGE
    while True:
        weights = [rng.randint(-bound, bound) for _ in range(config.dim)]
        try:
            return functional_ordering(config, weights)
        except ValueError:
            continue


# ============================================================================
# PRECOMPUTED CONTEXT
# ============================================================================

def _count_sinks(mask: int, lower: Sequence[int], stop_after: int) -> int:
    count = 0
    for i in positions_of(mask):
        if not lower[i] & mask:
            count += 1
            if count > stop_after:
                break
    return count


class PolytopeContext:
    """
    One matroid polytope with the indexes the ordering searches need.

    Faces are bitmasks over ground positions. K-checks only look at faces
    of rank >= 3, since vertices and edges always have a single sink.
    Everything is read-only after construction.
    """

    def __init__(self, om: OrientedMatroid, lattice: FaceLattice, graph: PolytopeGraph):
        self.om = om
        self.lattice = lattice
        self.graph = graph
        self.rank = lattice.rank
        self.n = graph.n
        self.labels = graph.labels
        self.simple = is_simple(graph, self.rank)
        self.h_star = lattice.h_star()

        nonempty = [(face, graph.mask_of(face.elements)) for face in lattice.faces if face.rank >= 1]
        self._faces = tuple(nonempty)
        self._high = tuple(mask for face, mask in nonempty if face.rank >= 3)
        self._sh_faces = tuple(mask for face, mask in nonempty if face.rank >= 2)
        self._rank3 = tuple(mask for face, mask in nonempty if face.rank == 3)

        element_faces: List[List[Tuple[int, int]]] = [[] for _ in range(self.n)]
        for mask in self._high:
            for i in positions_of(mask):
                element_faces[i].append((mask, graph.adjacency[i] & mask))
        self._element_faces = tuple(tuple(entries) for entries in element_faces)

    @classmethod
    def from_configuration(cls, config: PointConfiguration) -> "PolytopeContext":
        om = OrientedMatroid.from_points(config)
        lattice = faces(om)
        return cls(om, lattice, build_graph(lattice))

    @property
    def name(self) -> str:
        return self.lattice.name

    def require_simple(self) -> None:
        require_simple(self.graph, self.rank, self.name)

    # ------------------------------------------------------------------
    # Fast checks on position arrays
    # ------------------------------------------------------------------

    def lower_for(self, position: Sequence[int]) -> Tuple[int, ...]:
        return lower_masks(self.graph, position)

    def k_ok(self, lower: Sequence[int]) -> bool:
        return all(_count_sinks(mask, lower, 1) == 1 for mask in self._high)

    def rank3_ok(self, lower: Sequence[int]) -> bool:
        return all(_count_sinks(mask, lower, 1) == 1 for mask in self._rank3)

    def sh1_prime_ok(self, lower: Sequence[int], position: Sequence[int]) -> bool:
        for mask in self._sh_faces:
            members = sorted(positions_of(mask), key=position.__getitem__)
            if any(not lower[j] & mask for j in members[1:]):
                return False
        return True

    def shelling_ok(self, order: Sequence[int]) -> bool:
        prefix = 0
        for i in order:
            prefix |= 1 << i
            if not self.om.is_acyclic_after_flip(prefix):
                return False
        return True

    def sink_counts(self, lower: Sequence[int]) -> Dict[str, int]:
        return {
            face.key(self.labels): _count_sinks(mask, lower, self.n)
            for face, mask in self._faces
        }

    def histograms(self, lower: Sequence[int]):
        return _histograms(self.graph, lower, self.rank)

    def placement_keeps_k(self, placed: int, element: int) -> bool:
        """
        False iff placing `element` after the prefix `placed` creates a second
        sink: some face already has a placed member but none of the element's
        neighbours in that face is placed.
        """
        for face_mask, neighbours in self._element_faces[element]:
            if placed & face_mask and not placed & neighbours:
                return False
        return True

    # ------------------------------------------------------------------
    # Reports
    # ------------------------------------------------------------------

    def classify(self, ordering: Sequence[str], seed: Optional[int] = None) -> OrderingReport:
        """Full report for one ordering."""
        position = positions_for(self.graph, ordering)
        order = [self.graph.index_of(label) for label in ordering]
        lower = self.lower_for(position)
        is_k = self.k_ok(lower)
        d_plus, d_minus = self.histograms(lower)
        h_star_ok = None
        if self.simple and is_k:
            h_star_ok = tuple(d_plus[:self.rank]) == tuple(self.h_star) and not any(d_plus[self.rank:])
        return OrderingReport(
            ordering=LinearOrdering(tuple(ordering)),
            is_k=is_k,
            is_shelling=self.shelling_ok(order),
            is_sh1_prime=self.sh1_prime_ok(lower, position),
            rank3_ok=self.rank3_ok(lower),
            h_star_ok=h_star_ok,
            sink_counts=self.sink_counts(lower),
            d_plus_hist=d_plus,
            d_minus_hist=d_minus,
            seed=seed,
        )

    def labels_of_order(self, order: Sequence[int]) -> Tuple[str, ...]:
        return tuple(self.labels[i] for i in order)


# ============================================================================
# EXHAUSTIVE WALK
# ============================================================================

def _walk(
    context: PolytopeContext, first: int, prune: bool
) -> Iterator[Tuple[Optional[Tuple[int, ...]], bool, bool, int]]:
    """
    Lexicographic DFS over the orderings that start with `first`.

    Yields (order, is_k, is_shelling, 1) for each classified ordering and
    (None, False, False, size) for a pruned subtree of `size` orderings that
    are neither K nor shelling.
    """
    n = context.n
    full = (1 << n) - 1
    om = context.om
    sequence: List[int] = []

    def extend(placed: int, k_alive: bool, sh_alive: bool):
        if placed == full:
            yield tuple(sequence), k_alive, sh_alive, 1
            return
        if prune and not k_alive and not sh_alive:
            yield None, False, False, math.factorial(n - len(sequence))
            return
        for element in range(n):
            bit = 1 << element
            if placed & bit:
                continue
            k_next = k_alive and context.placement_keeps_k(placed, element)
            sh_next = sh_alive and om.is_acyclic_after_flip(placed | bit)
            sequence.append(element)
            yield from extend(placed | bit, k_next, sh_next)
            sequence.pop()

    bit = 1 << first
    sequence.append(first)
    yield from extend(bit, True, om.is_acyclic_after_flip(bit))


def iter_k_orderings(context: PolytopeContext) -> Iterator[Tuple[str, ...]]:
    """K-orderings in lexicographic order; a prefix with a second sink is cut at once."""
    n = context.n
    full = (1 << n) - 1
    sequence: List[int] = []

    def extend(placed: int):
        if placed == full:
            yield context.labels_of_order(sequence)
            return
        for element in range(n):
            bit = 1 << element
            if placed & bit or not context.placement_keeps_k(placed, element):
                continue
            sequence.append(element)
            yield from extend(placed | bit)
            sequence.pop()

    yield from extend(0)


@dataclass(frozen=True)
class _SearchTask:
    filter: OrderingFilter
    mode: EnumerationMode
    seed: Optional[int]
    branch_budget: Optional[int]
    limit: Optional[int]


def _enumerate_branch(context: PolytopeContext, first: int, task: _SearchTask) -> EnumerationResult:
    summary = EnumerationSummary(task.mode.value, task.filter.value, task.seed, space=0)
    reports: List[OrderingReport] = []
    prune = not task.filter.accepts_neither
    for order, is_k, is_shelling, count in _walk(context, first, prune):
        if order is None:
            summary.record(False, False, count)
            summary.pruned += count
            continue
        if task.branch_budget is not None and summary.examined >= task.branch_budget:
            summary.partial = True
            break
        summary.examined += 1
        summary.record(is_k, is_shelling)
        if task.filter.matches(is_k, is_shelling) and (task.limit is None or len(reports) < task.limit):
            reports.append(context.classify(context.labels_of_order(order), seed=task.seed))
    summary.emitted = len(reports)
    return EnumerationResult(reports, summary)


def _classify_samples(
    context: PolytopeContext, orders: List[Tuple[int, ...]], task: _SearchTask
) -> EnumerationResult:
    summary = EnumerationSummary(task.mode.value, task.filter.value, task.seed, space=0)
    reports: List[OrderingReport] = []
    for order in orders:
        position = [0] * context.n
        for rank, i in enumerate(order):
            position[i] = rank
        is_k = context.k_ok(context.lower_for(position))
        is_shelling = context.shelling_ok(order)
        summary.examined += 1
        summary.record(is_k, is_shelling)
        if task.filter.matches(is_k, is_shelling) and (task.limit is None or len(reports) < task.limit):
            reports.append(context.classify(context.labels_of_order(order), seed=task.seed))
    summary.emitted = len(reports)
    return EnumerationResult(reports, summary)


def draw_samples(n: int, count: int, seed: int) -> List[Tuple[int, ...]]:
    """`count` uniform random permutations of range(n), reproducible from `seed`."""
    rng = random.Random(seed)
    samples = []
    for _ in range(count):
        order = list(range(n))
        rng.shuffle(order)
        samples.append(tuple(order))
    return samples


def split_budget(budget: Optional[int], branches: int) -> Optional[int]:
    """
    Per-branch share of `budget`; None means unbounded.

    Raises:
        ValueError: If the budget is not positive.
    """
    if budget is None:
        return None
    if budget < 1:
        raise ValueError(f"Budget must be positive, got {budget}")
    return max(1, math.ceil(budget / branches))


def _sample_count(budget: Optional[int]) -> int:
    return EnumerationConfig.DEFAULT_SAMPLES if budget is None else split_budget(budget, 1)


def _chunks(items: List, parts: int) -> List[List]:
    size = max(1, math.ceil(len(items) / max(1, parts)))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _run_parallel(function, context, jobs, task, workers: int, progress: bool, label: str):
    """Runs `function(context, job, task)` for each job, results in job order."""
    bar = tqdm(total=len(jobs), desc=label, file=sys.stderr, disable=not progress, leave=False)
    results = []
    if workers <= 1:
        for job in jobs:
            results.append(function(context, job, task))
            bar.update()
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for result in executor.map(function, [context] * len(jobs), jobs, [task] * len(jobs)):
                results.append(result)
                bar.update()
    bar.close()
    return results


def enumerate_orderings(
    context: PolytopeContext,
    filter: OrderingFilter = OrderingFilter.K,
    mode: EnumerationMode = EnumerationMode.EXHAUSTIVE,
    seed: Optional[int] = EnumerationConfig.DEFAULT_SEED,
    budget: Optional[int] = None,
    limit: Optional[int] = None,
    workers: int = 1,
    progress: bool = False,
) -> EnumerationResult:
    """
    Enumerates or samples orderings and emits those matching `filter`.

    Exhaustive mode walks permutations in lexicographic order, one branch
    per first element. A prefix is pruned only when it already fails both
    the K and the shelling condition and the filter cannot match it; its
    subtree is then counted as 'neither', so every count stays exact.
    The budget bounds the individually classified orderings and is shared
    evenly by the branches, so results do not depend on `workers`.

    Sampling mode classifies `budget` uniform random permutations drawn
    from `random.Random(seed)` (default EnumerationConfig.DEFAULT_SAMPLES).

    Raises:
        ValueError: If the budget is not positive.
    """
    n = context.n
    space = math.factorial(n)
    summary = EnumerationSummary(mode.value, filter.value, seed, space=space)
    reports: List[OrderingReport] = []

    logger.info(f">>> Enumerating orderings of {context.name} ({mode.value}, filter={filter.value})")
    if mode is EnumerationMode.EXHAUSTIVE:
        branch_budget = split_budget(budget, n)
        task = _SearchTask(filter, mode, seed, branch_budget, limit)
        results = _run_parallel(_enumerate_branch, context, list(range(n)), task, workers, progress, "branches")
    else:
        count = _sample_count(budget)
        task = _SearchTask(filter, mode, seed, None, limit)
        samples = draw_samples(n, count, seed if seed is not None else EnumerationConfig.DEFAULT_SEED)
        results = _run_parallel(_classify_samples, context, _chunks(samples, workers), task, workers, progress, "samples")

    for result in results:
        summary.absorb(result.summary)
        for report in result.reports:
            if limit is None or len(reports) < limit:
                reports.append(report)
    summary.emitted = len(reports)
    if mode is EnumerationMode.SAMPLE:
        # Samples may repeat, so coverage is not meaningful; total counts draws.
        summary.space = max(space, summary.total)
    if not summary.is_consistent():
        logger.error(f"[ERROR] Inconsistent enumeration counts: {summary.to_dict()}")
    logger.info(
        f"[OK] {context.name}: total={summary.total} k={summary.k} shelling={summary.shelling} "
        f"k_not_shelling={summary.k_not_shelling} partial={summary.partial}"
    )
    return EnumerationResult(reports, summary)


# ============================================================================
# THEOREM VERIFICATION
# ============================================================================

@dataclass
class TheoremReport:
    """Brute-force evidence for the ordering theorems on one simple polytope."""
    name: str
    rank: int
    h_star: Tuple[int, ...]
    mode: str
    orderings: int = 0
    k_orderings: int = 0
    shelling_orderings: int = 0
    shelling_not_k: int = 0
    sh1_prime_disagreements: int = 0
    h_star_mismatches: int = 0
    endpoint_failures: int = 0
    reverse_failures: int = 0
    rank3_disagreements: int = 0
    d_plus_histograms: Set[Tuple[int, ...]] = field(default_factory=set)
    d_minus_histograms: Set[Tuple[int, ...]] = field(default_factory=set)
    examples: Dict[str, List[List[str]]] = field(default_factory=dict)
    partial: bool = False

    @property
    def ok(self) -> bool:
        return not (
            self.shelling_not_k or self.sh1_prime_disagreements or self.h_star_mismatches
            or self.endpoint_failures or self.reverse_failures
        )

    def note(self, kind: str, order: Sequence[str]) -> None:
        bucket = self.examples.setdefault(kind, [])
        if len(bucket) < EnumerationConfig.MAX_VIOLATION_EXAMPLES:
            bucket.append(list(order))

    def absorb(self, other: "TheoremReport") -> None:
        for name in ("orderings", "k_orderings", "shelling_orderings", "shelling_not_k",
                     "sh1_prime_disagreements", "h_star_mismatches", "endpoint_failures",
                     "reverse_failures", "rank3_disagreements"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.d_plus_histograms |= other.d_plus_histograms
        self.d_minus_histograms |= other.d_minus_histograms
        for kind, orders in other.examples.items():
            for order in orders:
                self.note(kind, order)
        self.partial = self.partial or other.partial

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "rank": self.rank,
            "mode": self.mode,
            "h_star": list(self.h_star),
            "orderings": self.orderings,
            "k_orderings": self.k_orderings,
            "shelling_orderings": self.shelling_orderings,
            "shelling_implies_k": self.shelling_not_k == 0,
            "sh1_prime_equivalent": self.sh1_prime_disagreements == 0,
            "h_star_equals_d_plus": self.h_star_mismatches == 0,
            "d_plus_invariant": len(self.d_plus_histograms) <= 1,
            "d_plus_histograms": [list(h) for h in sorted(self.d_plus_histograms)],
            "d_minus_histograms": [list(h) for h in sorted(self.d_minus_histograms)],
            "endpoints_ok": self.endpoint_failures == 0,
            "reverse_closed": self.reverse_failures == 0,
            "rank3_disagreements": self.rank3_disagreements,
            "examples": self.examples,
            "partial": self.partial,
            "ok": self.ok,
        }


def _check_theorems(context: PolytopeContext, order: Tuple[int, ...], is_k: bool,
                    is_shelling: bool, report: TheoremReport) -> None:
    n = context.n
    r = context.rank
    position = [0] * n
    for rank, i in enumerate(order):
        position[i] = rank
    lower = context.lower_for(position)
    labels = context.labels_of_order(order)

    report.orderings += 1
    if is_shelling:
        report.shelling_orderings += 1
        if not is_k:
            report.shelling_not_k += 1
            report.note("shelling_not_k", labels)
    if context.sh1_prime_ok(lower, position) != is_k:
        report.sh1_prime_disagreements += 1
        report.note("sh1_prime_disagreement", labels)
    if context.rank3_ok(lower) != is_k:
        report.rank3_disagreements += 1
        report.note("rank3_disagreement", labels)
    if not is_k:
        return

    report.k_orderings += 1
    d_plus, d_minus = context.histograms(lower)
    report.d_plus_histograms.add(d_plus)
    report.d_minus_histograms.add(d_minus)
    if d_plus[:r] != tuple(context.h_star) or any(d_plus[r:]):
        report.h_star_mismatches += 1
        report.note("h_star_mismatch", labels)
    if d_plus[0] != 1 or d_plus[r - 1] != 1:
        report.endpoint_failures += 1
        report.note("endpoint_failure", labels)
    reversed_position = [n - 1 - p for p in position]
    if not context.k_ok(context.lower_for(reversed_position)):
        report.reverse_failures += 1
        report.note("reverse_failure", labels)


def _theorem_branch(context: PolytopeContext, first: int, task: _SearchTask) -> TheoremReport:
    report = TheoremReport(context.name, context.rank, context.h_star, task.mode.value)
    examined = 0
    for order, is_k, is_shelling, _ in _walk(context, first, prune=False):
        if task.branch_budget is not None and examined >= task.branch_budget:
            report.partial = True
            break
        examined += 1
        _check_theorems(context, order, is_k, is_shelling, report)
    return report


def _theorem_samples(context: PolytopeContext, orders: List[Tuple[int, ...]], task: _SearchTask) -> TheoremReport:
    report = TheoremReport(context.name, context.rank, context.h_star, task.mode.value)
    for order in orders:
        position = [0] * context.n
        for rank, i in enumerate(order):
            position[i] = rank
        is_k = context.k_ok(context.lower_for(position))
        _check_theorems(context, order, is_k, context.shelling_ok(order), report)
    return report


def verify_theorems(
    context: PolytopeContext,
    mode: EnumerationMode = EnumerationMode.EXHAUSTIVE,
    seed: Optional[int] = EnumerationConfig.DEFAULT_SEED,
    budget: Optional[int] = None,
    workers: int = 1,
    progress: bool = False,
) -> TheoremReport:
    """
    Checks by brute force, over every (or every sampled) ordering:
    shelling => K, K <=> (sh.1'), d+ = h* for K-orderings (hence invariance),
    d+_0 = d+_{r-1} = 1, closure of K-orderings under reversal; and counts
    disagreements of the rank-3 criterion with the K verdict.

    Raises:
        NotSimpleError: If the polytope is not simple.
        ValueError: If the budget is not positive.
    """
    context.require_simple()
    logger.info(f">>> Verifying ordering theorems on {context.name} ({mode.value})")
    report = TheoremReport(context.name, context.rank, context.h_star, mode.value)
    if mode is EnumerationMode.EXHAUSTIVE:
        branch_budget = split_budget(budget, context.n)
        task = _SearchTask(OrderingFilter.ALL, mode, seed, branch_budget, None)
        results = _run_parallel(_theorem_branch, context, list(range(context.n)), task, workers, progress, "branches")
    else:
        count = _sample_count(budget)
        task = _SearchTask(OrderingFilter.ALL, mode, seed, None, None)
        samples = draw_samples(context.n, count, seed if seed is not None else EnumerationConfig.DEFAULT_SEED)
        results = _run_parallel(_theorem_samples, context, _chunks(samples, workers), task, workers, progress, "samples")
    for result in results:
        report.absorb(result)
    if report.ok:
        logger.info(f"[OK] {context.name}: {report.orderings} orderings, {report.k_orderings} K-orderings, no violations")
    else:
        logger.warning(f"[WARN] {context.name}: theorem violations found: {report.examples}")
    return report
