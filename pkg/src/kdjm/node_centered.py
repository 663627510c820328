"""NodeCentered: color edges vertex by vertex in order of a vertex rating."""

from __future__ import annotations

import enum
from fractions import Fraction

from .graph import DisjointMatching, WeightedGraph


class Rating(enum.Enum):
    MAX = "max"
    AVG = "avg"
    MEDIAN = "median"
    SUM = "sum"
    KSUM = "ksum"

    @classmethod
    def parse(cls, text: str) -> Rating:
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown rating {text!r}; expected one of "
                             f"{[r.value for r in cls]}") from None


DEFAULT_RATING = Rating.KSUM
DEFAULT_THETA = Fraction(1, 5)


def vertex_rating(g: WeightedGraph, v: int, fn: Rating, k: int) -> int | Fraction:
    weights = [g.edges[e].w for _, e in g.heaviest_first[v]]
    if not weights:
        return 0
    if fn is Rating.MAX:
        return weights[0]
    if fn is Rating.SUM:
        return sum(weights)
    if fn is Rating.KSUM:
        return sum(weights[:k])
    if fn is Rating.AVG:
        return Fraction(sum(weights), len(weights))
    # lower median of the ascending sequence
    return weights[len(weights) // 2]


def node_centered(g: WeightedGraph, k: int, fn: Rating = DEFAULT_RATING,
                  theta: Fraction | float | str = DEFAULT_THETA) -> DisjointMatching:
    """Two-phase greedy coloring driven by vertex ratings.

    Phase one visits vertices by decreasing rating and tries each incident
    edge of demand at least ``theta * D`` in decreasing demand order; an edge
    is colored with the lowest color free at both ends, or dropped if none is.
    Phase two handles the deferred lighter edges in global demand order.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    theta = Fraction(theta)
    if not 0 <= theta <= 1:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    s = DisjointMatching(g, k)
    weights = g.weights
    endpoints = g.edges
    cutoff_num, cutoff_den = theta.numerator * g.max_demand, theta.denominator
    ratings = [vertex_rating(g, v, fn, k) for v in range(g.n)]
    # reverse sorting is stable: equal ratings keep increasing vertex id
    vertex_order = sorted(range(g.n), key=ratings.__getitem__, reverse=True)
    seen = [False] * g.m
    deferred = [False] * g.m
    free = [(1 << k) - 1] * g.n  # bit c set while class c is free at v

    def try_color(e: int) -> None:
        u, v, _ = endpoints[e]
        common = free[u] & free[v]
        if common:
            low = common & -common
            free[u] ^= low
            free[v] ^= low
            s.add(e, low.bit_length() - 1)

    for v in vertex_order:
        for _, e in g.heaviest_first[v]:
            if seen[e]:
                continue
            seen[e] = True
            if weights[e] * cutoff_den < cutoff_num:
                deferred[e] = True
            elif free[v]:
                try_color(e)

    for e in g.sorted_edges:
        if deferred[e]:
            try_color(e)
    return s
