"""Weight-improving postprocessing by maximum-gain 2-augmentations (ROMA, Swaps).

Replacement edges must be unused by every class, so a repaired solution stays
a valid k-disjoint matching.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .graph import DisjointMatching, WeightedGraph


@dataclass(frozen=True)
class SwapCandidate:
    edge: int
    left: int    # edge <u, r>
    right: int   # edge <v, s>
    gain: int


def _best_free_edges(g: WeightedGraph, s: DisjointMatching, c: int, x: int,
                     skip: int) -> list[tuple[int, int, int]]:
    """The two heaviest unused edges ``<x, y>`` with ``y`` free in class ``c``.

    Returns ``(weight, neighbour, edge)`` triples sorted by decreasing weight,
    ties by neighbour id.
    """
    mate = s._mate[c]
    class_of = s.class_of
    weights = g.weights
    found = []
    for y, e in g.heaviest_first[x]:
        if y == skip or class_of[e] is not None or mate[y] >= 0:
            continue
        found.append((weights[e], y, e))
        if len(found) == 2:
            break
    return found


def find_two_augmentation(g: WeightedGraph, s: DisjointMatching, e: int) -> SwapCandidate | None:
    c = s.class_of[e]
    if c is None:
        raise ValueError(f"edge {e} is not in any class")
    u, v, w = g.edges[e]
    best = None
    for wr, r, er in _best_free_edges(g, s, c, u, v):
        for ws, t, es in _best_free_edges(g, s, c, v, u):
            if r == t:
                continue
            gain = wr + ws - w
            if gain > 0 and (best is None or gain > best.gain):
                best = SwapCandidate(e, er, es, gain)
    return best


def max_gain_two_augmentation(g: WeightedGraph, s: DisjointMatching, e: int) -> SwapCandidate | None:
    """Replace ``e`` by its best positive-gain pair of free edges, if any."""
    cand = find_two_augmentation(g, s, e)
    if cand is not None:
        c = s.class_of[e]
        s.remove(e)
        s.add(cand.left, c)
        s.add(cand.right, c)
    return cand


def swaps(g: WeightedGraph, s: DisjointMatching, c: int) -> int:
    """One pass over class ``c`` in decreasing weight order; returns swap count."""
    edges = g.edges
    snapshot = sorted(s.classes[c], key=lambda e: (-edges[e].w, edges[e].u, edges[e].v))
    done = 0
    for e in snapshot:
        if s.class_of[e] == c and max_gain_two_augmentation(g, s, e) is not None:
            done += 1
    return done


def roma(g: WeightedGraph, s: DisjointMatching, c: int, repetitions: int = 4,
         seed: int = 0) -> int:
    """Random-order sweeps over the vertices of class ``c``.

    Each sweep shuffles the vertices with a generator derived from
    ``(seed, c, sweep)`` and augments at every matched vertex.  Stops early
    after a sweep without change.  Returns the number of sweeps run.
    """
    if repetitions < 1:
        raise ValueError(f"ROMA needs at least one repetition, got {repetitions}")
    sweeps = 0
    for sweep in range(repetitions):
        sweeps += 1
        order = list(range(g.n))
        random.Random(f"roma:{seed}:{c}:{sweep}").shuffle(order)
        changed = False
        for x in order:
            e = s.mate_edge(c, x)
            if e >= 0 and max_gain_two_augmentation(g, s, e) is not None:
                changed = True
        if not changed:
            break
    return sweeps


class Strategy(enum.Enum):
    NONE = "none"
    LOCAL_SWAPS = "local"
    GLOBAL_SWAPS = "global"
    ROMA = "roma"

    @classmethod
    def parse(cls, text: str) -> Strategy:
        aliases = {"localswaps": "local", "globalswaps": "global", "": "none"}
        key = text.strip().lower()
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class Postprocessing:
    strategy: Strategy = Strategy.NONE
    roma_repetitions: int = 4
    seed: int = 0


def apply_strategy(g: WeightedGraph, s: DisjointMatching, post: Postprocessing,
                   class_index: int | None = None) -> None:
    """Run ``post`` on ``s``.

    Call with ``class_index`` when that class has just been completed and
    without it once all classes exist.  LocalSwaps and ROMA act at class
    completion; GlobalSwaps acts once at the end.
    """
    strat = post.strategy
    if strat is Strategy.NONE:
        return
    if class_index is not None:
        if strat is Strategy.LOCAL_SWAPS:
            swaps(g, s, class_index)
        elif strat is Strategy.ROMA:
            roma(g, s, class_index, post.roma_repetitions, post.seed)
    elif strat is Strategy.GLOBAL_SWAPS:
        for c in range(s.k):
            swaps(g, s, c)
