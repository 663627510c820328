"""Greedy b-matching, Misra-Gries edge coloring, and bGreedy&Extend."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import DisjointMatching, SortedEdgeList, WeightedGraph
from .iterative import greedy_it
from .kec import ColorState, KecFlags, color_with_fan


@dataclass
class BMatching:
    edges: list[int]
    saturation: list[int]
    b: int
    weight: int


@dataclass
class EdgeColoring:
    color: list[int | None]
    num_colors: int

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for e, c in enumerate(self.color):
            if c is not None:
                out[c].append(e)
        return out


def greedy_b_matching(g: WeightedGraph, order: SortedEdgeList | Sequence[int], b: int) -> BMatching:
    """Add edges in order unless an endpoint already has ``b`` matched edges."""
    if b < 1:
        raise ValueError(f"b must be at least 1, got {b}")
    sat = [0] * g.n
    chosen: list[int] = []
    weight = 0
    for e in order:
        u, v, w = g.edges[e]
        if sat[u] < b and sat[v] < b:
            sat[u] += 1
            sat[v] += 1
            chosen.append(e)
            weight += w
    return BMatching(chosen, sat, b, weight)


def misra_gries_color(g: WeightedGraph, subgraph_edges: Iterable[int]) -> EdgeColoring:
    """Proper coloring of the given edges with at most ``Delta_sub + 1`` colors."""
    edges = list(subgraph_edges)
    deg = [0] * g.n
    for e in edges:
        u, v, _ = g.edges[e]
        deg[u] += 1
        deg[v] += 1
    palette = max(deg, default=0) + 1
    state = ColorState(g, palette)
    for e in edges:
        u, v, _ = g.edges[e]
        # with Delta + 1 colors the last fan vertex always has a free color
        if not color_with_fan(state, u, v, e, KecFlags()):
            raise AssertionError(f"Misra-Gries failed to color edge {e}")
    used = max(state.color, default=-1) + 1
    return EdgeColoring([c if c >= 0 else None for c in state.color], used)


def extend_greedily(s: DisjointMatching, order: SortedEdgeList | Sequence[int]) -> None:
    """One greedy pass per class over still unassigned edges."""
    for c in range(s.k):
        for e in order:
            if s.can_add(e, c):
                s.add(e, c)


def b_greedy_and_extend(g: WeightedGraph, k: int) -> DisjointMatching:
    if k == 1:
        # a 0-matching is empty, so only the extension step remains
        return greedy_it(g, 1)
    order = g.sorted_edges
    bm = greedy_b_matching(g, order, k - 1)
    coloring = misra_gries_color(g, bm.edges)
    s = DisjointMatching(g, k)
    for e in bm.edges:
        s.add(e, coloring.color[e])
    extend_greedily(s, order)
    return s
