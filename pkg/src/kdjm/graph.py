"""Weighted graphs, k-disjoint matchings and solution validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence


class GraphError(ValueError):
    """Raised when an edge triple violates the simple-graph model."""

    def __init__(self, message: str, triple: tuple[int, int, int]):
        super().__init__(f"{message}: {triple!r}")
        self.triple = triple


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class ZeroWeightError(GraphError):
    pass


class EndpointOutOfRangeError(GraphError):
    pass


class Edge(NamedTuple):
    u: int
    v: int
    w: int


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable simple undirected graph with positive integer demands.

    Edges are stored canonically (``u < v``) and sorted by ``(u, v)``, so the
    edge index of a pair depends only on the edge set.  ``adjacency[v]`` lists
    ``(neighbor, edge_index)`` pairs in ascending neighbor order.
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...]
    max_degree: int
    max_demand: int

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(e.u, e.v): i for i, e in enumerate(self.edges)}

    @cached_property
    def weights(self) -> tuple[int, ...]:
        return tuple(e.w for e in self.edges)

    @cached_property
    def sorted_edges(self) -> SortedEdgeList:
        return sort_edges_desc(self)

    @cached_property
    def heaviest_first(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adjacency`` reordered by decreasing demand, ties by neighbor."""
        w = self.weights
        return tuple(tuple(sorted(adj, key=lambda t: -w[t[1]])) for adj in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def find_edge(self, u: int, v: int) -> int | None:
        if u > v:
            u, v = v, u
        return self.edge_index.get((u, v))

    def total_demand(self) -> int:
        return sum(e.w for e in self.edges)

    def triples(self) -> list[tuple[int, int, int]]:
        return [tuple(e) for e in self.edges]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return (f"WeightedGraph(n={self.n}, m={self.m}, "
                f"max_degree={self.max_degree}, max_demand={self.max_demand})")


def build_graph(n: int, triples: Iterable[tuple[int, int, int]]) -> WeightedGraph:
    """Build a :class:`WeightedGraph` from ``(u, v, w)`` triples.

    Raises a :class:`GraphError` subclass naming the first offending triple.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    seen: dict[tuple[int, int], int] = {}
    for t in triples:
        u, v, w = (int(x) for x in t)
        triple = (u, v, w)
        if not (0 <= u < n and 0 <= v < n):
            raise EndpointOutOfRangeError(f"endpoint outside 0..{n - 1}", triple)
        if u == v:
            raise SelfLoopError("self-loop", triple)
        if w <= 0:
            raise ZeroWeightError("demand must be positive", triple)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdgeError("duplicate edge", triple)
        seen[key] = w

    edges = tuple(Edge(u, v, w) for (u, v), w in sorted(seen.items()))
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, e in enumerate(edges):
        adj[e.u].append((e.v, i))
        adj[e.v].append((e.u, i))
    for lst in adj:
        lst.sort()
    return WeightedGraph(
        n=n,
        edges=edges,
        adjacency=tuple(tuple(lst) for lst in adj),
        max_degree=max((len(lst) for lst in adj), default=0),
        max_demand=max((e.w for e in edges), default=0),
    )


@dataclass(frozen=True)
class SortedEdgeList:
    """Edge indices by non-increasing demand, ties by ascending ``(u, v)``."""

    order: tuple[int, ...]

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __getitem__(self, i):
        return self.order[i]


def sort_edges_desc(g: WeightedGraph) -> SortedEdgeList:
    # edges are already (u, v)-sorted, so a stable sort on weight alone suffices
    order = sorted(range(g.m), key=lambda i: -g.edges[i].w)
    return SortedEdgeList(tuple(order))


class DisjointMatching:
    """``k`` pairwise edge-disjoint matchings over the edges of a graph.

    ``class_of[e]`` is the class holding edge ``e`` or ``None``;
    ``classes[c]`` lists the edge indices of class ``c`` in insertion order.
    The mutators keep the matching and disjointness invariants; use
    :meth:`from_classes` to wrap arbitrary (possibly invalid) class lists.
    """

    def __init__(self, g: WeightedGraph, k: int):
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        self.graph = g
        self.k = k
        self.class_of: list[int | None] = [None] * g.m
        self.classes: list[list[int]] = [[] for _ in range(k)]
        self.class_weights: list[int] = [0] * k
        # _mate[c][v]: edge of class c at vertex v, -1 if v is free in c
        self._mate: list[list[int]] = [[-1] * g.n for _ in range(k)]

    @classmethod
    def from_classes(cls, g: WeightedGraph, classes: Sequence[Sequence[int]]) -> DisjointMatching:
        """Wrap raw class lists without checking them (see validate_solution)."""
        s = cls(g, max(1, len(classes)))
        s.classes = [list(c) for c in classes] or [[]]
        s.k = len(s.classes)
        s.class_weights = [sum(g.edges[e].w for e in c) for c in s.classes]
        s._mate = [[-1] * g.n for _ in range(s.k)]
        for c, members in enumerate(s.classes):
            for e in members:
                s.class_of[e] = c
                u, v, _ = g.edges[e]
                s._mate[c][u] = e
                s._mate[c][v] = e
        return s

    @property
    def total_weight(self) -> int:
        return sum(self.class_weights)

    def mate_edge(self, c: int, v: int) -> int:
        """Edge of class ``c`` incident to ``v``, or -1."""
        return self._mate[c][v]

    def is_free(self, c: int, v: int) -> bool:
        return self._mate[c][v] < 0

    def can_add(self, e: int, c: int) -> bool:
        u, v, _ = self.graph.edges[e]
        return self.class_of[e] is None and self._mate[c][u] < 0 and self._mate[c][v] < 0

    def add(self, e: int, c: int) -> None:
        if not self.can_add(e, c):
            raise ValueError(f"edge {e} cannot join class {c}")
        u, v, w = self.graph.edges[e]
        self.class_of[e] = c
        self.classes[c].append(e)
        self.class_weights[c] += w
        self._mate[c][u] = e
        self._mate[c][v] = e

    def remove(self, e: int) -> None:
        c = self.class_of[e]
        if c is None:
            raise ValueError(f"edge {e} is not assigned")
        u, v, w = self.graph.edges[e]
        self.class_of[e] = None
        self.classes[c].remove(e)
        self.class_weights[c] -= w
        self._mate[c][u] = -1
        self._mate[c][v] = -1

    def copy(self) -> DisjointMatching:
        s = DisjointMatching.__new__(DisjointMatching)
        s.graph = self.graph
        s.k = self.k
        s.class_of = list(self.class_of)
        s.classes = [list(c) for c in self.classes]
        s.class_weights = list(self.class_weights)
        s._mate = [list(m) for m in self._mate]
        return s

    def class_pairs(self) -> list[list[tuple[int, int]]]:
        """Classes as sorted lists of ``(u, v)`` pairs."""
        edges = self.graph.edges
        return [sorted((edges[e].u, edges[e].v) for e in c) for c in self.classes]

    def __repr__(self) -> str:
        return f"DisjointMatching(k={self.k}, total_weight={self.total_weight})"


def solution_weight(s: DisjointMatching) -> int:
    return s.total_weight


@dataclass(frozen=True)
class SharedEndpoint:
    class_index: int
    e1: int
    e2: int
    vertex: int


@dataclass(frozen=True)
class DuplicateAssignment:
    edge: int


@dataclass(frozen=True)
class WeightMismatch:
    class_index: int | None
    expected: int
    reported: int


@dataclass(frozen=True)
class InvalidEdge:
    edge: int


@dataclass(frozen=True)
class ValidationReport:
    violation: SharedEndpoint | DuplicateAssignment | WeightMismatch | InvalidEdge | None = None
    total_weight: int = 0
    violations: tuple = field(default=(), repr=False)

    @property
    def valid(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.valid


def validate_solution(g: WeightedGraph, s: DisjointMatching) -> ValidationReport:
    """Check ``s`` against ``g`` from its raw class lists.

    Returns a report whose ``violation`` is the first problem found, or
    ``None`` if ``s`` is a valid k-disjoint matching with consistent weights.
    """
    if s.k < 1 or len(s.classes) != s.k:
        raise ValueError("solution must have k >= 1 classes")
    problems: list = []
    owner: dict[int, int] = {}
    m = g.m
    for c, members in enumerate(s.classes):
        at: dict[int, int] = {}
        for e in members:
            if not 0 <= e < m:
                problems.append(InvalidEdge(e))
                continue
            if e in owner:
                problems.append(DuplicateAssignment(e))
            owner[e] = c
            u, v, _ = g.edges[e]
            for x in (u, v):
                if x in at:
                    problems.append(SharedEndpoint(c, at[x], e, x))
                else:
                    at[x] = e
    total = 0
    for c, members in enumerate(s.classes):
        expected = sum(g.edges[e].w for e in members if 0 <= e < m)
        total += expected
        if len(s.class_weights) != s.k or s.class_weights[c] != expected:
            reported = s.class_weights[c] if c < len(s.class_weights) else -1
            problems.append(WeightMismatch(c, expected, reported))
    if s.total_weight != total:
        problems.append(WeightMismatch(None, total, s.total_weight))
    return ValidationReport(problems[0] if problems else None, total, tuple(problems))
