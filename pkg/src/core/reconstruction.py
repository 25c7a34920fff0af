"""
Face lattice reconstruction from the graph of a simple matroid polytope.

Works on the abstract graph alone:
1. Every linear ordering orients the graph (larger -> smaller). Its score
   is sum_v 2^(number of larger neighbours of v). In a simple polytope a
   set of k in-arcs at v spans a rank-(k+1) face, so the score counts
   (face, sink) pairs. Good orientations (one sink per face) are exactly
   the minimisers, with minimum f_0 + ... + f_{r-1}.
2. A connected k-regular induced subgraph is a rank-(k+1) face iff it is
   an initial set of some good orientation: no arc leaves it.
"""

import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
from tqdm import tqdm

from src.core.face_lattice import Face, FaceLattice
from src.core.orderings import LinearOrdering, split_budget
from src.core.polytope_graph import PolytopeGraph, lower_masks, positions_for
from src.core.sign_vectors import positions_of

logger = logging.getLogger(__name__)


# ============================================================================
# CONFIGURATION
# ============================================================================

class ReconstructionConfig:
    """Limits for the orientation search."""

    # Orderings scored individually; None searches the whole space.
    DEFAULT_BUDGET: Optional[int] = None


# ============================================================================
# EXCEPTIONS
# ============================================================================

class GraphValidationError(ValueError):
    """Raised when an abstract graph is malformed, disconnected or not regular."""
    pass


class ReconstructionFailedError(ValueError):
    """Raised when the reconstructed family is not a consistent face lattice."""
    pass


# ============================================================================
# ABSTRACT GRAPH
# ============================================================================

@dataclass(frozen=True)
class AbstractGraph:
    """Connected regular graph; its rank is the common degree plus one."""
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    claimed_rank: int

    @classmethod
    def from_edges(
        cls,
        vertices: Sequence[str],
        edges: Iterable[Sequence[str]],
        rank: Optional[int] = None,
        name: str = "graph",
    ) -> "AbstractGraph":
        """
        Validates and builds an abstract graph.

        Raises:
            GraphValidationError: On unknown endpoints, loops, a disconnected
                or non-regular graph, or a rank that contradicts the degree.
        """
        vertices = tuple(str(v) for v in vertices)
        if not vertices:
            raise GraphValidationError(f"{name}: graph has no vertices")
        if len(set(vertices)) != len(vertices):
            raise GraphValidationError(f"{name}: repeated vertex labels")

        g = nx.Graph()
        g.add_nodes_from(vertices)
        for edge in edges:
            if len(edge) != 2:
                raise GraphValidationError(f"{name}: edge {list(edge)} does not have two endpoints")
            u, v = str(edge[0]), str(edge[1])
            if u not in g or v not in g:
                raise GraphValidationError(f"{name}: edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise GraphValidationError(f"{name}: loop at {u}")
            g.add_edge(u, v)

        if not nx.is_connected(g):
            raise GraphValidationError(f"{name}: graph is not connected")
        degrees = {d for _, d in g.degree()}
        if len(degrees) != 1:
            raise GraphValidationError(f"{name}: graph is not regular (degrees {sorted(degrees)})")
        inferred = degrees.pop() + 1
        if rank is not None and rank != inferred:
            raise GraphValidationError(f"{name}: claimed rank {rank} but degree implies {inferred}")

        position = {label: i for i, label in enumerate(vertices)}
        ordered = sorted(
            (tuple(sorted((u, v), key=position.__getitem__)) for u, v in g.edges()),
            key=lambda e: (position[e[0]], position[e[1]]),
        )
        return cls(vertices, tuple(ordered), inferred)

    @classmethod
    def from_polytope_graph(cls, graph: PolytopeGraph) -> "AbstractGraph":
        return cls.from_edges(graph.labels, graph.edges)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AbstractGraph":
        try:
            return cls.from_edges(
                data["vertices"],
                data["edges"],
                rank=data.get("rank"),
                name=str(data.get("name", "graph")),
            )
        except (KeyError, TypeError) as e:
            raise GraphValidationError(f"Malformed graph document: {e}") from e

    @property
    def n(self) -> int:
        return len(self.vertices)

    def to_polytope_graph(self) -> PolytopeGraph:
        return PolytopeGraph(self.vertices, self.edges)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vertices": list(self.vertices),
            "edges": [list(edge) for edge in self.edges],
            "rank": self.claimed_rank,
        }


# ============================================================================
# SCORES & GOOD ORIENTATIONS
# ============================================================================

def _require_regular(graph: PolytopeGraph) -> None:
    degrees = {mask.bit_count() for mask in graph.adjacency}
    if len(degrees) != 1:
        raise GraphValidationError(f"Graph is not regular (degrees {sorted(degrees)})")


def kalai_score(graph: PolytopeGraph, ordering: Sequence[str]) -> int:
    """
    sum_v 2^indeg(v), indeg(v) = number of neighbours larger than v.

    Raises:
        GraphValidationError: If the graph is not regular.
    """
    _require_regular(graph)
    lower = lower_masks(graph, positions_for(graph, ordering))
    return sum(1 << (adjacent & ~lower[i]).bit_count() for i, adjacent in enumerate(graph.adjacency))


def arc_mask(graph: PolytopeGraph, position: Sequence[int]) -> int:
    """Bit k is set iff edge k = (i, j), i < j, is directed j -> i."""
    mask = 0
    for k, (i, j) in enumerate(graph.edge_indices):
        if position[i] < position[j]:
            mask |= 1 << k
    return mask


def is_initial(lower: Sequence[int], subset: int) -> bool:
    """True iff no arc leaves `subset`; `lower` as returned by GoodOrientation.lower."""
    return all(not lower[i] & ~subset for i in positions_of(subset))


@dataclass(frozen=True)
class GoodOrientation:
    """One minimum-score orientation with the lex-first ordering inducing it."""
    ordering: LinearOrdering
    score: int
    arcs: int

    def lower(self, graph: PolytopeGraph) -> Tuple[int, ...]:
        return lower_masks(graph, positions_for(graph, self.ordering))


@dataclass
class OrientationSearch:
    minimum: Optional[int]
    orientations: List[GoodOrientation] = field(default_factory=list)
    examined: int = 0
    pruned: int = 0
    partial: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "minimum": self.minimum,
            "good_orientations": len(self.orientations),
            "examined": self.examined,
            "pruned": self.pruned,
            "partial": self.partial,
        }


def _search_branch(graph: PolytopeGraph, first: int, budget: Optional[int]) -> OrientationSearch:
    """Branch and bound over the orderings starting with `first`, in lex order."""
    n = graph.n
    full = (1 << n) - 1
    adjacency = graph.adjacency
    result = OrientationSearch(minimum=None)
    found: Dict[int, Tuple[int, ...]] = {}
    sequence: List[int] = []
    stop = False

    def extend(placed: int, score: int) -> None:
        nonlocal stop
        if stop:
            return
        if placed == full:
            if budget is not None and result.examined >= budget:
                result.partial = True
                stop = True
                return
            result.examined += 1
            if result.minimum is None or score < result.minimum:
                result.minimum = score
                found.clear()
            if score == result.minimum:
                position = [0] * n
                for rank, i in enumerate(sequence):
                    position[i] = rank
                found.setdefault(arc_mask(graph, position), tuple(sequence))
            return
        remaining = n - len(sequence)
        if result.minimum is not None and score + remaining > result.minimum:
            result.pruned += math.factorial(remaining)
            return
        for v in range(n):
            bit = 1 << v
            if placed & bit:
                continue
            # Every vertex placed later is larger, so unplaced neighbours point in.
            gain = 1 << (adjacency[v] & ~placed).bit_count()
            sequence.append(v)
            extend(placed | bit, score + gain)
            sequence.pop()

    sequence.append(first)
    extend(1 << first, 1 << adjacency[first].bit_count())

    labels = graph.labels
    result.orientations = [
        GoodOrientation(LinearOrdering(tuple(labels[i] for i in order)), result.minimum, arcs)
        for arcs, order in found.items()
    ]
    return result


def find_good_orientations(
    graph: PolytopeGraph,
    budget: Optional[int] = ReconstructionConfig.DEFAULT_BUDGET,
    workers: int = 1,
    progress: bool = False,
) -> OrientationSearch:
    """
    All minimum-score orientations, deduplicated by arc set.

    The search runs one branch per first vertex; the budget (orderings
    scored) is split evenly between branches. A partial result is
    flagged, never silently truncated.

    Raises:
        GraphValidationError: If the graph is not regular.
        ValueError: If the budget is not positive.
    """
    _require_regular(graph)
    n = graph.n
    branch_budget = split_budget(budget, n)
    logger.info(f">>> Searching good orientations ({n} vertices, budget={budget})")

    bar = tqdm(total=n, desc="orientations", file=sys.stderr, disable=not progress, leave=False)
    branches: List[OrientationSearch] = []
    if workers <= 1:
        for first in range(n):
            branches.append(_search_branch(graph, first, branch_budget))
            bar.update()
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for branch in executor.map(_search_branch, [graph] * n, range(n), [branch_budget] * n):
                branches.append(branch)
                bar.update()
    bar.close()

    minimum = min((b.minimum for b in branches if b.minimum is not None), default=None)
    merged = OrientationSearch(minimum=minimum)
    seen: Dict[int, GoodOrientation] = {}
    for branch in branches:
        merged.examined += branch.examined
        merged.pruned += branch.pruned
        merged.partial = merged.partial or branch.partial
        if branch.minimum != minimum:
            continue
        for orientation in branch.orientations:
            # Branches are visited in lex order, so the first ordering kept is lex-first.
            seen.setdefault(orientation.arcs, orientation)
    merged.orientations = list(seen.values())
    logger.info(f"[OK] minimum score {minimum}, {len(merged.orientations)} good orientations")
    if merged.partial:
        logger.warning(f"[WARN] Orientation search stopped by budget after {merged.examined} orderings")
    return merged


# ============================================================================
# FACE RECONSTRUCTION
# ============================================================================

def _bounded_connected_subsets(adjacency: Sequence[int], max_degree: int) -> Iterator[int]:
    """
    Connected vertex subsets whose induced degrees stay <= max_degree.

    Subgraph enumeration rooted at the smallest vertex: each subset is
    produced exactly once. Induced degrees only grow with the subset, so a
    violating extension is dropped with all of its supersets.
    """
    n = len(adjacency)

    def extend(subset: int, extension: int, neighbourhood: int, root: int) -> Iterator[int]:
        yield subset
        while extension:
            w = (extension & -extension).bit_length() - 1
            extension &= extension - 1
            grown = subset | (1 << w)
            touched = (1 << w) | (adjacency[w] & subset)
            if any((adjacency[u] & grown).bit_count() > max_degree for u in positions_of(touched)):
                continue
            exclusive = adjacency[w] & ~(subset | neighbourhood) & ~((1 << (root + 1)) - 1)
            yield from extend(grown, extension | exclusive, neighbourhood | adjacency[w], root)

    for root in range(n):
        above = ~((1 << (root + 1)) - 1)
        yield from extend(1 << root, adjacency[root] & above, adjacency[root], root)


def _regular_degree(adjacency: Sequence[int], subset: int) -> Optional[int]:
    degrees = {(adjacency[i] & subset).bit_count() for i in positions_of(subset)}
    return degrees.pop() if len(degrees) == 1 else None


def reconstruct_faces(
    abstract: AbstractGraph,
    good_orientations: Sequence[GoodOrientation],
    name: str = "reconstructed",
) -> FaceLattice:
    """
    Face lattice read off the graph and its good orientations.

    Raises:
        ReconstructionFailedError: If no good orientation is given, an edge
            is not recovered, or the Euler-Poincare check fails.
    """
    if not good_orientations:
        raise ReconstructionFailedError(f"{name}: no good orientations to reconstruct from")

    graph = abstract.to_polytope_graph()
    rank = abstract.claimed_rank
    adjacency = graph.adjacency
    full = (1 << graph.n) - 1
    lowers = [orientation.lower(graph) for orientation in good_orientations]

    faces: Set[Tuple[int, int]] = {(0, 0), (full, rank)}
    candidates = 0
    for subset in _bounded_connected_subsets(adjacency, max(rank - 2, 0)):
        degree = _regular_degree(adjacency, subset)
        if degree is None:
            continue
        candidates += 1
        if any(is_initial(lower, subset) for lower in lowers):
            faces.add((subset, degree + 1))
    logger.debug(f"{name}: {candidates} regular candidates, {len(faces)} faces accepted")

    lattice = FaceLattice(
        graph.labels,
        rank,
        (Face(frozenset(graph.labels_of(mask)), r) for mask, r in faces),
        name=name,
    )
    if rank >= 2 and len(lattice.faces_of_rank(2)) != len(graph.edge_indices):
        raise ReconstructionFailedError(
            f"{name}: {len(lattice.faces_of_rank(2))} edges recovered of {len(graph.edge_indices)}"
        )
    if not lattice.euler_ok():
        raise ReconstructionFailedError(f"{name}: Euler-Poincare check fails for f={list(lattice.f_vector)}")
    logger.info(f"[OK] {name}: reconstructed f={list(lattice.f_vector)}")
    return lattice


# ============================================================================
# COMPARISON
# ============================================================================

@dataclass
class LatticeComparison:
    """Ranked, inclusion-ordered comparison over the same labels."""
    isomorphic: bool
    missing: List[Dict[str, Any]]
    extra: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return {"isomorphic": self.isomorphic, "missing": self.missing, "extra": self.extra}


def compare_lattices(reference: FaceLattice, candidate: FaceLattice) -> LatticeComparison:
    """Faces of `reference` absent from `candidate` are missing, the converse extra."""
    ours = {(face.elements, face.rank) for face in reference.faces}
    theirs = {(face.elements, face.rank) for face in candidate.faces}
    labels = reference.labels

    def describe(entries) -> List[Dict[str, Any]]:
        faces = sorted((Face(elements, rank) for elements, rank in entries), key=lambda f: (f.rank, f.key(labels)))
        return [{"elements": face.ordered(labels), "rank": face.rank} for face in faces]

    missing = describe(ours - theirs)
    extra = describe(theirs - ours)
    same_labels = set(reference.labels) == set(candidate.labels) and reference.rank == candidate.rank
    return LatticeComparison(same_labels and not missing and not extra, missing, extra)


@dataclass
class ReconstructionResult:
    """`lattice` is None when the orientation search stopped early."""
    lattice: Optional[FaceLattice]
    search: OrientationSearch


def reconstruct(
    abstract: AbstractGraph,
    budget: Optional[int] = ReconstructionConfig.DEFAULT_BUDGET,
    workers: int = 1,
    progress: bool = False,
    name: str = "reconstructed",
) -> ReconstructionResult:
    """
    Good-orientation search followed by face reconstruction.

    A search cut short by the budget may miss the true minimum score, so
    no lattice is built from it; the partial search is returned as is.
    """
    search = find_good_orientations(abstract.to_polytope_graph(), budget, workers, progress)
    if search.partial:
        logger.warning(f"[WARN] {name}: orientation search incomplete, faces not reconstructed")
        return ReconstructionResult(None, search)
    return ReconstructionResult(reconstruct_faces(abstract, search.orientations, name), search)
