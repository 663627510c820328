"""Weight-aware k-edge-coloring built on Misra-Gries fans and cd-path inversion.

The :class:`ColorState` here is also used by plain Misra-Gries coloring in
:mod:`kdjm.coloring`, which is this routine with an unbounded degree cap and
``Delta + 1`` colors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import DisjointMatching, WeightedGraph


@dataclass(frozen=True)
class KecFlags:
    cc: bool = False  # try a common free color first
    lc: bool = False  # prefer the color with least total weight
    rl: bool = False  # rotate the whole fan when no inversion was needed
    lf: bool = False  # append fan neighbours without a free color last

    @classmethod
    def parse(cls, text: str) -> KecFlags:
        names = {t.strip().lower() for t in text.replace(",", "+").split("+") if t.strip()}
        names.discard("none")
        unknown = names - {"cc", "lc", "rl", "lf"}
        if unknown:
            raise ValueError(f"unknown k-EC flags: {sorted(unknown)}")
        return cls(**{name: True for name in names})

    def __str__(self) -> str:
        on = [name.upper() for name in ("cc", "lc", "rl", "lf") if getattr(self, name)]
        return "+".join(on) if on else "none"


DEFAULT_FLAGS = KecFlags(cc=True, rl=True)


def _bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ColorState:
    """Partial proper edge coloring with ``k`` colors.

    ``at[v][c]`` is the edge of color ``c`` at ``v`` (-1 if ``c`` is free on
    ``v``); ``color[e]`` is the color of ``e`` (-1 if uncolored).  ``free[v]``
    mirrors ``at[v]`` as a bit mask with bit ``c`` set while ``c`` is free.
    """

    def __init__(self, g: WeightedGraph, k: int):
        self.g = g
        self.k = k
        self.color = [-1] * g.m
        self.at = [[-1] * k for _ in range(g.n)]
        self.free = [(1 << k) - 1] * g.n
        self.cdeg = [0] * g.n
        self.color_weight = [0] * k

    def is_free(self, v: int, c: int) -> bool:
        return self.at[v][c] < 0

    def saturated(self, v: int) -> bool:
        return self.cdeg[v] >= self.k

    def free_colors(self, v: int) -> list[int]:
        return list(_bits(self.free[v]))

    def pick(self, candidates: Iterable[int] | int, lightest: bool) -> int | None:
        """Lowest candidate color, or the one of least total weight.

        ``candidates`` may be a bit mask.
        """
        if isinstance(candidates, int):
            if not candidates:
                return None
            if not lightest:
                return (candidates & -candidates).bit_length() - 1
            candidates = _bits(candidates)
        best = None
        for c in candidates:
            if best is None:
                best = c
                if not lightest:
                    return best
            elif self.color_weight[c] < self.color_weight[best]:
                best = c
        return best

    def _place(self, e: int, c: int) -> None:
        u, v, w = self.g.edges[e]
        self.color[e] = c
        self.at[u][c] = e
        self.at[v][c] = e
        self.free[u] &= ~(1 << c)
        self.free[v] &= ~(1 << c)
        self.color_weight[c] += w

    def _lift(self, e: int) -> None:
        u, v, w = self.g.edges[e]
        c = self.color[e]
        self.color[e] = -1
        self.at[u][c] = -1
        self.at[v][c] = -1
        self.free[u] |= 1 << c
        self.free[v] |= 1 << c
        self.color_weight[c] -= w

    def set_color(self, e: int, c: int) -> None:
        if self.color[e] >= 0:
            self._lift(e)
        else:
            u, v, _ = self.g.edges[e]
            self.cdeg[u] += 1
            self.cdeg[v] += 1
        self._place(e, c)

    def other(self, e: int, x: int) -> int:
        u, v, _ = self.g.edges[e]
        return v if x == u else u

    def to_solution(self) -> DisjointMatching:
        classes: list[list[int]] = [[] for _ in range(self.k)]
        for e, c in enumerate(self.color):
            if c >= 0:
                classes[c].append(e)
        # a proper coloring is a valid k-disjoint matching by construction
        return DisjointMatching.from_classes(self.g, classes)


def find_common_free_color(state: ColorState, u: int, v: int, lightest: bool = False) -> int | None:
    return state.pick(state.free[u] & state.free[v], lightest)


def invert_cd_path(state: ColorState, u: int, c: int, d: int) -> list[int]:
    """Swap colors ``c`` and ``d`` along the alternating path leaving ``u``.

    Requires ``c`` free on ``u`` and ``d`` used on ``u``; afterwards ``d`` is
    free on ``u``.  Returns the path's edges.
    """
    if not state.is_free(u, c) or state.is_free(u, d):
        raise ValueError(f"cd-path precondition fails at vertex {u} for colors {c}, {d}")
    path = []
    x, want = u, d
    while True:
        e = state.at[x][want]
        if e < 0:
            break
        path.append(e)
        x = state.other(e, x)
        want = c if want == d else d
    # detach first so that intermediate states never hold two equal colors
    swapped = [d if state.color[e] == c else c for e in path]
    for e in path:
        state._lift(e)
    for e, new in zip(path, swapped):
        state._place(e, new)
    return path


@dataclass
class Fan:
    center: int
    vertices: list[int]  # w0 = v, w1, ..., wl
    edges: list[int]     # edges[i] joins center and vertices[i]


def build_fan(state: ColorState, u: int, v: int, e: int, large_fan: bool = False) -> Fan:
    """Maximal fan around ``u`` starting at ``v`` for the uncolored edge ``e``.

    A neighbour ``w`` extends the fan if the color of ``<u, w>`` is free on the
    current last fan vertex.  With ``large_fan``, neighbours without any free
    color are only appended when no other extension exists.
    """
    fan = Fan(u, [v], [e])
    at_u = state.at[u]
    free, cdeg, k = state.free, state.cdeg, state.k
    # each color used at u leads to a distinct neighbour, so dropping a color
    # from the candidates keeps fan vertices distinct
    unused = ~free[u]
    last = v
    while True:
        cand = unused & free[last]
        if not cand:
            return fan
        pick = cand & -cand
        if large_fan:
            rest = cand
            while rest:
                bit = rest & -rest
                if cdeg[state.other(at_u[bit.bit_length() - 1], u)] < k:
                    pick = bit
                    break
                rest ^= bit
        f = at_u[pick.bit_length() - 1]
        last = state.other(f, u)
        fan.vertices.append(last)
        fan.edges.append(f)
        unused &= ~pick


def _prefix_end(state: ColorState, fan: Fan, d: int) -> int:
    """First fan index j whose vertex has ``d`` free and whose prefix is a fan."""
    for j, w in enumerate(fan.vertices):
        if j > 0:
            col = state.color[fan.edges[j]]
            if col < 0 or not state.is_free(fan.vertices[j - 1], col):
                return -1
        if state.is_free(w, d):
            return j
    return -1


def rotate_fan(state: ColorState, fan: Fan, j: int, d: int) -> None:
    """Shift colors down the fan prefix ``0..j`` and color ``<u, w_j>`` with ``d``."""
    new_colors = [state.color[fan.edges[i + 1]] for i in range(j)] + [d]
    for i in range(1, j + 1):
        state._lift(fan.edges[i])
    for i in range(j + 1):
        state._place(fan.edges[i], new_colors[i])
    state.cdeg[fan.center] += 1
    state.cdeg[fan.vertices[0]] += 1


def color_with_fan(state: ColorState, u: int, v: int, e: int, flags: KecFlags = KecFlags()) -> bool:
    """One Misra-Gries attempt to color ``e = <u, v>`` around center ``u``.

    Fails (returning False, coloring unchanged) when the last fan vertex has
    no free color.  Never uncolors an edge.
    """
    fan = build_fan(state, u, v, e, flags.lf)
    last = fan.vertices[-1]
    d = state.pick(state.free[last], flags.lc)
    if d is None:
        return False
    c = state.pick(state.free[u], flags.lc)
    if c is None:
        return False
    inverted = False
    if not state.is_free(u, d):
        invert_cd_path(state, u, c, d)
        inverted = True
    if flags.rl and not inverted:
        j = len(fan.vertices) - 1
    else:
        j = _prefix_end(state, fan, d)
    if j < 0:
        raise AssertionError(f"no rotatable fan prefix for edge {e}")
    rotate_fan(state, fan, j, d)
    return True


def color_edge(state: ColorState, e: int, flags: KecFlags = KecFlags()) -> bool:
    """Try to color edge ``e``; returns False if it had to be skipped."""
    u, v, _ = state.g.edges[e]
    if state.saturated(u) or state.saturated(v):
        return False
    if flags.cc:
        c = find_common_free_color(state, u, v, flags.lc)
        if c is not None:
            state.set_color(e, c)
            return True
    if color_with_fan(state, u, v, e, flags):
        return True
    return color_with_fan(state, v, u, e, flags)


def k_ec(g: WeightedGraph, k: int, flags: KecFlags = DEFAULT_FLAGS) -> DisjointMatching:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    state = ColorState(g, k)
    cdeg = state.cdeg
    edges = g.edges
    for e in g.sorted_edges:
        u, v, _ = edges[e]
        if cdeg[u] < k and cdeg[v] < k:
            color_edge(state, e, flags)
    return state.to_solution()
