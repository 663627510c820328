"""Exact optimum for small instances and ILP model export."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .graph import DisjointMatching, WeightedGraph
from .instances import IoFailure


class LimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ExactLimits:
    max_edges: int = 24
    max_k: int = 4


@dataclass
class ExactResult:
    weight: int
    solution: DisjointMatching
    explored: int


def brute_force_kdjm(g: WeightedGraph, k: int, limits: ExactLimits = ExactLimits()) -> ExactResult:
    """Optimal k-disjoint matching by branch and bound over edge assignments.

    Each edge, in decreasing weight order, is left out or put into a class
    where both endpoints are free.  Classes are opened in index order, which
    removes class-permutation symmetry without changing the optimum.  A branch
    is cut when its weight plus all remaining demand cannot beat the
    incumbent.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if g.m > limits.max_edges or k > limits.max_k:
        raise LimitExceeded(
            f"instance too large for exhaustive search: m={g.m} (max {limits.max_edges}), "
            f"k={k} (max {limits.max_k})")

    order = list(g.sorted_edges)
    ends = [(1 << g.edges[e].u) | (1 << g.edges[e].v) for e in order]
    weights = [g.edges[e].w for e in order]
    suffix = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]

    used = [0] * k            # vertex bitmask per class
    assign = [-1] * len(order)
    best_weight = -1
    best_assign: list[int] = []
    explored = 0

    def search(i: int, opened: int, weight: int) -> None:
        nonlocal best_weight, best_assign, explored
        explored += 1
        if weight + suffix[i] <= best_weight:
            return
        if i == len(order):
            best_weight = weight
            best_assign = list(assign)
            return
        mask = ends[i]
        for c in range(min(opened + 1, k)):
            if used[c] & mask:
                continue
            used[c] |= mask
            assign[i] = c
            search(i + 1, max(opened, c + 1), weight + weights[i])
            used[c] &= ~mask
            assign[i] = -1
        search(i + 1, opened, weight)

    search(0, 0, 0)
    s = DisjointMatching(g, k)
    for i, c in enumerate(best_assign):
        if c >= 0:
            s.add(order[i], c)
    return ExactResult(best_weight, s, explored)


def ilp_model(g: WeightedGraph, k: int) -> str:
    """Assignment-formulation ILP in CPLEX LP format.

    Binary ``x_e{e}_c{c}`` puts edge ``e`` in class ``c``; ``v{v}_c{c}`` keeps
    each class a matching at ``v``; ``e{e}`` assigns each edge at most once.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    out = io.StringIO()
    out.write(f"\\ k-disjoint matching: n={g.n} m={g.m} k={k}\n")
    out.write("Maximize\n")
    terms = [f"{e.w} x_e{i}_c{c}" for i, e in enumerate(g.edges) for c in range(k)]
    out.write(" obj: " + (" + ".join(terms) if terms else "0") + "\n")
    out.write("Subject To\n")
    for v in range(g.n):
        if not g.adjacency[v]:
            continue
        incident = sorted(e for _, e in g.adjacency[v])
        for c in range(k):
            lhs = " + ".join(f"x_e{e}_c{c}" for e in incident)
            out.write(f" v{v}_c{c}: {lhs} <= 1\n")
    for i in range(g.m):
        lhs = " + ".join(f"x_e{i}_c{c}" for c in range(k))
        out.write(f" e{i}: {lhs} <= 1\n")
    out.write("Binary\n")
    for i in range(g.m):
        for c in range(k):
            out.write(f" x_e{i}_c{c}\n")
    out.write("End\n")
    return out.getvalue()


def export_ilp(g: WeightedGraph, k: int, destination: str | os.PathLike | TextIO) -> str:
    """Write the ILP model to a path or text stream and return its text."""
    text = ilp_model(g, k)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            Path(destination).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot write model to {destination}: {exc}") from exc
    return text
