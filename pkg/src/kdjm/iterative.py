"""Iterative algorithms: run a single-matching routine k times on the residual graph.

Each pass sees only edges not yet assigned to an earlier class.  A
postprocessing hook may modify the solution after each class completes, so
the residual is always re-derived from the solution itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .blossom import LIBRARY, max_weight_matching
from .graph import DisjointMatching, SortedEdgeList, WeightedGraph

ClassHook = Callable[[DisjointMatching, int], None]


@dataclass
class Matching:
    edges: list[int] = field(default_factory=list)
    mate: dict[int, int] = field(default_factory=dict)
    weight: int = 0

    def add(self, g: WeightedGraph, e: int) -> None:
        u, v, w = g.edges[e]
        self.edges.append(e)
        self.mate[u] = v
        self.mate[v] = u
        self.weight += w


@dataclass
class PathsAndCycles:
    """Vertex-disjoint paths and even cycles, each as an ordered edge list."""

    paths: list[list[int]] = field(default_factory=list)
    cycles: list[list[int]] = field(default_factory=list)


def _residual(s: DisjointMatching) -> list[bool]:
    return [c is None for c in s.class_of]


def _commit(s: DisjointMatching, matching: Matching, c: int) -> None:
    for e in matching.edges:
        s.add(e, c)


def greedy_matching_pass(g: WeightedGraph, order: SortedEdgeList | Sequence[int],
                         available: list[bool]) -> Matching:
    """Greedy maximal matching over available edges in ``order``.

    Selected edges are flagged unavailable in ``available``.
    """
    matched = [False] * g.n
    result = Matching()
    edges = g.edges
    for e in order:
        if not available[e]:
            continue
        u, v, _ = edges[e]
        if matched[u] or matched[v]:
            continue
        matched[u] = matched[v] = True
        available[e] = False
        result.add(g, e)
    return result


def greedy_it(g: WeightedGraph, k: int, after_class: ClassHook | None = None) -> DisjointMatching:
    s = DisjointMatching(g, k)
    order = g.sorted_edges
    available = _residual(s)
    for c in range(k):
        _commit(s, greedy_matching_pass(g, order, available), c)
        if after_class is not None:
            after_class(s, c)
            available = _residual(s)
    return s


def gpa_build(g: WeightedGraph, order: SortedEdgeList | Sequence[int],
              available: Sequence[bool]) -> PathsAndCycles:
    """Grow paths and even cycles from available edges in weight order.

    An edge is applicable if it joins two different paths, or closes an
    odd-length path into an even cycle.
    """
    n = g.n
    edges = g.edges
    deg = [0] * n
    # for path endpoints: the opposite endpoint and the path length in edges
    other = list(range(n))
    length = [0] * n
    links: list[list[tuple[int, int]]] = [[] for _ in range(n)]

    for e in order:
        if not available[e]:
            continue
        u, v, _ = edges[e]
        if deg[u] >= 2 or deg[v] >= 2:
            continue
        if other[u] == v:
            # same path: only an odd-length path may be closed
            if length[u] % 2 == 0:
                continue
            deg[u] += 1
            deg[v] += 1
            links[u].append((v, e))
            links[v].append((u, e))
            continue
        a, b = other[u], other[v]
        total = length[u] + length[v] + 1
        deg[u] += 1
        deg[v] += 1
        links[u].append((v, e))
        links[v].append((u, e))
        other[a], other[b] = b, a
        length[a] = length[b] = total

    result = PathsAndCycles()
    seen = [False] * n
    for start in range(n):
        if seen[start] or deg[start] != 1:
            continue
        result.paths.append(_walk(start, links, seen))
    for start in range(n):
        if not seen[start] and deg[start] == 2:
            result.cycles.append(_walk(start, links, seen))
    return result


def _walk(start: int, links: list[list[tuple[int, int]]], seen: list[bool]) -> list[int]:
    chain: list[int] = []
    prev_edge = -1
    x = start
    seen[x] = True
    while True:
        step = next(((y, e) for y, e in links[x] if e != prev_edge), None)
        if step is None:
            return chain
        y, e = step
        if chain and e == chain[0]:
            return chain
        chain.append(e)
        prev_edge = e
        if seen[y]:
            return chain
        seen[y] = True
        x = y


def _path_dp(weights: Sequence[int]) -> tuple[int, list[int]]:
    """Maximum-weight matching on a path given its edge weights in order."""
    best_prev2, best_prev = 0, 0
    take: list[bool] = []
    for w in weights:
        with_edge = best_prev2 + w
        take.append(with_edge > best_prev)
        best_prev2, best_prev = best_prev, max(best_prev, with_edge)
    chosen: list[int] = []
    i = len(weights) - 1
    while i >= 0:
        if take[i]:
            chosen.append(i)
            i -= 2
        else:
            i -= 1
    chosen.reverse()
    return best_prev, chosen


def dp_optimal_matching(weights: Sequence[int], cycle: bool = False) -> tuple[int, list[int]]:
    """Optimal matching on a path or even cycle in linear time.

    Returns the weight and the chosen positions into ``weights``.  A cycle is
    solved as two path problems: with its first edge excluded, or included
    (which excludes both neighbours of that edge).
    """
    if not cycle or len(weights) < 3:
        return _path_dp(weights)
    without, chosen_without = _path_dp(weights[1:])
    inner, chosen_inner = _path_dp(weights[2:-1])
    if weights[0] + inner > without:
        return weights[0] + inner, [0] + [i + 2 for i in chosen_inner]
    return without, [i + 1 for i in chosen_without]


def gpa_pass(g: WeightedGraph, order: SortedEdgeList | Sequence[int],
             available: list[bool]) -> Matching:
    structure = gpa_build(g, order, available)
    result = Matching()
    w = g.weights
    for chain, cyc in [(p, False) for p in structure.paths] + [(c, True) for c in structure.cycles]:
        _, picked = dp_optimal_matching([w[e] for e in chain], cycle=cyc)
        for i in picked:
            result.add(g, chain[i])
            available[chain[i]] = False
    return result


def gpa_it(g: WeightedGraph, k: int, after_class: ClassHook | None = None) -> DisjointMatching:
    s = DisjointMatching(g, k)
    order = g.sorted_edges
    available = _residual(s)
    for c in range(k):
        _commit(s, gpa_pass(g, order, available), c)
        if after_class is not None:
            after_class(s, c)
            available = _residual(s)
    return s


def blossom_max_weight_matching(g: WeightedGraph, available: Sequence[bool] | None = None,
                                mode: str = LIBRARY) -> Matching:
    """Exact maximum-weight matching restricted to available edges."""
    if available is None:
        available = [True] * g.m
    ids = [e for e, ok in enumerate(available) if ok]
    if mode == LIBRARY:
        sub = [g.edges[e] for e in ids]
        mate = max_weight_matching(g.n, sub, mode)
    else:
        # the built-in solver is cubic in n: drop isolated vertices first
        local: dict[int, int] = {}
        sub = []
        for e in ids:
            u, v, w = g.edges[e]
            sub.append((local.setdefault(u, len(local)), local.setdefault(v, len(local)), w))
        mate = max_weight_matching(len(local), sub, mode)
    result = Matching()
    for (a, b, _), e in zip(sub, ids):
        if mate[a] == b:
            result.add(g, e)
    return result


def blossom_it(g: WeightedGraph, k: int, after_class: ClassHook | None = None,
               mode: str = LIBRARY) -> DisjointMatching:
    s = DisjointMatching(g, k)
    for c in range(k):
        _commit(s, blossom_max_weight_matching(g, _residual(s), mode), c)
        if after_class is not None:
            after_class(s, c)
    return s
