"""
Graph G(M) of a matroid polytope and its orientations under linear orderings.

Vertices are the rank-1 faces (the ground set), edges the rank-2 faces.
A linear ordering orients every edge from its larger end to its smaller
end. Arcs are never stored: directions come from the ordering's position
array, and vertex subsets are bitmasks over the ground-set positions.
"""

import logging
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.core.face_lattice import Face, FaceLattice
from src.core.sign_vectors import positions_of

logger = logging.getLogger(__name__)


# ============================================================================
# EXCEPTIONS
# ============================================================================

class CollinearFaceError(ValueError):
    """Raised when a rank-2 face does not have exactly two elements."""
    pass


class InvalidOrderingError(ValueError):
    """Raised when an ordering is not a permutation of the vertex set."""
    pass


class NotSimpleError(ValueError):
    """Raised when a simplicity-dependent operation gets a non-simple polytope."""
    pass


# ============================================================================
# POLYTOPE GRAPH
# ============================================================================

class PolytopeGraph:
    """Undirected graph on the element labels, stored as adjacency bitmasks."""

    def __init__(self, labels: Sequence[str], edges: Iterable[Tuple[str, str]]):
        self._labels = tuple(labels)
        self._index = {label: i for i, label in enumerate(self._labels)}
        adjacency = [0] * len(self._labels)
        pairs = set()
        for u, v in edges:
            i, j = self.index_of(u), self.index_of(v)
            if i == j:
                raise ValueError(f"Loop at {u!r}")
            adjacency[i] |= 1 << j
            adjacency[j] |= 1 << i
            pairs.add((min(i, j), max(i, j)))
        self._adjacency = tuple(adjacency)
        self._edges = tuple(sorted(pairs))

    @classmethod
    def from_lattice(cls, lattice: FaceLattice) -> "PolytopeGraph":
        """
        Graph whose vertices are the rank-1 faces and edges the rank-2 faces.

        Raises:
            CollinearFaceError: If a rank-2 face has more than two elements.
        """
        for face in lattice.faces_of_rank(1):
            if len(face) != 1:
                raise CollinearFaceError(f"Rank-1 face {sorted(face.elements)} is not a single element")
        edges = []
        for face in lattice.faces_of_rank(2):
            if len(face) != 2:
                raise CollinearFaceError(
                    f"Rank-2 face {face.ordered(lattice.labels)} has {len(face)} elements"
                )
            edges.append(tuple(face.ordered(lattice.labels)))
        return cls(lattice.labels, edges)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adjacency

    @property
    def edge_indices(self) -> Tuple[Tuple[int, int], ...]:
        return self._edges

    @property
    def edges(self) -> List[Tuple[str, str]]:
        return [(self._labels[i], self._labels[j]) for i, j in self._edges]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"Unknown vertex {label!r}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        mask = 0
        for label in labels:
            mask |= 1 << self.index_of(label)
        return mask

    def labels_of(self, mask: int) -> Tuple[str, ...]:
        return tuple(self._labels[i] for i in positions_of(mask))

    def degree(self, label: str) -> int:
        return self._adjacency[self.index_of(label)].bit_count()

    def neighbors(self, label: str) -> Tuple[str, ...]:
        return self.labels_of(self._adjacency[self.index_of(label)])

    def degrees(self) -> Dict[str, int]:
        return {label: mask.bit_count() for label, mask in zip(self._labels, self._adjacency)}

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self._labels)
        g.add_edges_from(self.edges)
        return g

    def to_dict(self) -> Dict[str, Any]:
        return {"vertices": list(self._labels), "edges": [list(edge) for edge in self.edges]}

    def __repr__(self) -> str:
        return f"PolytopeGraph(n={self.n}, edges={len(self._edges)})"


def graph(lattice: FaceLattice) -> PolytopeGraph:
    return PolytopeGraph.from_lattice(lattice)


def is_simple(g: PolytopeGraph, rank: int) -> bool:
    """True iff every vertex has degree exactly rank - 1."""
    return all(mask.bit_count() == rank - 1 for mask in g.adjacency)


def require_simple(g: PolytopeGraph, rank: int, name: str = "") -> None:
    if not is_simple(g, rank):
        irregular = {label: d for label, d in g.degrees().items() if d != rank - 1}
        raise NotSimpleError(
            f"{name or 'polytope'} is not simple: degrees {irregular} differ from rank-1={rank - 1}"
        )


# ============================================================================
# ORDERED DIGRAPH
# ============================================================================

def positions_for(g: PolytopeGraph, ordering: Sequence[str]) -> Tuple[int, ...]:
    """
    position[i] = rank of vertex i in `ordering` (0 = smallest).

    Raises:
        InvalidOrderingError: If `ordering` is not a permutation of the vertices.
    """
    sequence = list(ordering)
    if len(sequence) != g.n or set(sequence) != set(g.labels):
        raise InvalidOrderingError(
            f"Ordering {sequence} is not a permutation of {list(g.labels)}"
        )
    position = [0] * g.n
    for rank, label in enumerate(sequence):
        position[g.index_of(label)] = rank
    return tuple(position)


def lower_masks(g: PolytopeGraph, position: Sequence[int]) -> Tuple[int, ...]:
    """lower[i] = neighbours of i that precede i; these are the heads of i's out-arcs."""
    lower = []
    for i, adjacent in enumerate(g.adjacency):
        mask = 0
        for j in positions_of(adjacent):
            if position[j] < position[i]:
                mask |= 1 << j
        lower.append(mask)
    return tuple(lower)


class OrderedDigraph:
    """
    G(M) oriented by a linear ordering, possibly restricted to a vertex subset.

    A light view: graph, position array and vertex mask. Views are cheap and
    can be created freely per worker.
    """

    def __init__(
        self,
        graph: PolytopeGraph,
        ordering: Sequence[str],
        vertex_mask: Optional[int] = None,
    ):
        self._graph = graph
        self._ordering = tuple(ordering)
        self._position = positions_for(graph, self._ordering)
        self._lower = lower_masks(graph, self._position)
        self._mask = (1 << graph.n) - 1 if vertex_mask is None else vertex_mask

    @property
    def graph(self) -> PolytopeGraph:
        return self._graph

    @property
    def ordering(self) -> Tuple[str, ...]:
        return self._ordering

    @property
    def vertex_mask(self) -> int:
        return self._mask

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._graph.labels_of(self._mask)

    def induced(self, vertex_mask: int) -> "OrderedDigraph":
        view = object.__new__(OrderedDigraph)
        view._graph = self._graph
        view._ordering = self._ordering
        view._position = self._position
        view._lower = self._lower
        view._mask = vertex_mask & self._mask
        return view

    def arcs(self) -> List[Tuple[str, str]]:
        """Arcs (tail, head) inside the view, tail larger than head."""
        labels = self._graph.labels
        result = []
        for i in positions_of(self._mask):
            for j in positions_of(self._lower[i] & self._mask):
                result.append((labels[i], labels[j]))
        return sorted(result, key=lambda arc: (self._position[self._graph.index_of(arc[0])], arc[1]))

    def out_degree(self, label: str) -> int:
        i = self._graph.index_of(label)
        return (self._lower[i] & self._mask).bit_count()

    def in_degree(self, label: str) -> int:
        i = self._graph.index_of(label)
        return (self._graph.adjacency[i] & ~self._lower[i] & self._mask).bit_count()

    def sink_mask(self) -> int:
        sinks = 0
        for i in positions_of(self._mask):
            if not self._lower[i] & self._mask:
                sinks |= 1 << i
        return sinks

    def sinks(self) -> FrozenSet[str]:
        """Vertices whose neighbours in the view are all larger."""
        return frozenset(self._graph.labels_of(self.sink_mask()))

    def sink_count(self, stop_after: Optional[int] = None) -> int:
        """Number of sinks; counting stops early once it exceeds `stop_after`."""
        count = 0
        mask = self._mask
        lower = self._lower
        for i in positions_of(mask):
            if not lower[i] & mask:
                count += 1
                if stop_after is not None and count > stop_after:
                    break
        return count

    def has_unique_sink(self) -> bool:
        return self.sink_count(stop_after=1) == 1

    def reaches(self, source: str, target: str) -> bool:
        """True iff a directed path source -> target exists inside the view."""
        start = self._graph.index_of(source)
        goal = self._graph.index_of(target)
        seen = 1 << start
        stack = [start]
        while stack:
            i = stack.pop()
            if i == goal:
                return True
            fresh = self._lower[i] & self._mask & ~seen
            seen |= fresh
            stack.extend(positions_of(fresh))
        return False

    def is_reached_by_all(self, target: str) -> bool:
        """Reachability form of 'target is the unique sink'."""
        return all(self.reaches(source, target) for source in self.vertices)

    def __repr__(self) -> str:
        return f"OrderedDigraph(vertices={list(self.vertices)}, ordering={list(self._ordering)})"


def induced_digraph(
    digraph: OrderedDigraph,
    face: Face,
    lattice: FaceLattice,
) -> OrderedDigraph:
    """
    Induced directed subgraph G<(F) on the face F.

    Raises:
        NotAFaceError: If F is not a face of `lattice`.
    """
    lattice.face(face.elements)
    return digraph.induced(digraph.graph.mask_of(face.elements))


def sinks(digraph: OrderedDigraph) -> FrozenSet[str]:
    return digraph.sinks()
