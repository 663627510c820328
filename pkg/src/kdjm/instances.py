"""Instance readers, trace aggregation and instance generators.

Generators are pure functions of their parameters and seed.  Every generator
and reader is reachable through an instance spec string such as
``kind=rmat,x=10,init=rmat_b,dist=uni,seed=42`` (see :func:`load_instance`).
"""

from __future__ import annotations

import os
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import WeightedGraph, build_graph


class IoFailure(OSError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class UnsupportedFormat(ValueError):
    pass


class InvalidInitiator(ValueError):
    pass


def _read_text(path: str | os.PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _id_key(token: str):
    # numeric ids sort numerically, before any non-numeric ids
    try:
        return (0, int(token), "")
    except ValueError:
        return (1, 0, token)


def _dense_graph(demand: dict[tuple[str, str], int]) -> WeightedGraph:
    ids = sorted({x for pair in demand for x in pair}, key=_id_key)
    index = {x: i for i, x in enumerate(ids)}
    triples = [(index[a], index[b], w) for (a, b), w in demand.items() if w > 0]
    return build_graph(len(ids), triples)


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if _id_key(a) <= _id_key(b) else (b, a)


def parse_edge_list(text: str) -> WeightedGraph:
    """Parse ``u v w`` lines; ``#`` starts a comment.

    Vertex ids are remapped to ``0..n-1`` in ascending id order and repeated
    pairs (in either direction) are merged by summing their demands.
    """
    demand: dict[tuple[str, str], int] = defaultdict(int)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v w', got {raw!r}", lineno)
        u, v, w_text = parts
        try:
            w = int(w_text)
        except ValueError:
            raise ParseError(f"demand must be an integer, got {w_text!r}", lineno) from None
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if w <= 0:
            raise ParseError(f"demand must be positive, got {w}", lineno)
        demand[_pair(u, v)] += w
    return _dense_graph(demand)


def read_edge_list(path: str | os.PathLike) -> WeightedGraph:
    return parse_edge_list(_read_text(path))


def format_edge_list(g: WeightedGraph) -> str:
    lines = [f"# n={g.n} m={g.m}"]
    lines += [f"{u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def write_edge_list(g: WeightedGraph, path: str | os.PathLike) -> None:
    try:
        Path(path).write_text(format_edge_list(g), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def parse_matrix_market(text: str, scale: float = 1.0) -> WeightedGraph:
    """Graph of a square coordinate Matrix Market matrix.

    Off-diagonal nonzeros become edges.  The demand of ``{i, j}`` is the
    largest ``|value|`` over the entries ``(i, j)`` and ``(j, i)``, times
    ``scale``, rounded to an integer and at least 1.  Pattern matrices get
    unit demands.
    """
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ParseError("missing %%MatrixMarket header", 1)
    header = lines[0].lower().split()
    if len(header) != 5 or header[1] != "matrix":
        raise UnsupportedFormat(f"unsupported header {lines[0]!r}")
    _, _, layout, fieldtype, symmetry = header
    if layout != "coordinate":
        raise UnsupportedFormat(f"only coordinate format is supported, got {layout!r}")
    if fieldtype not in ("real", "integer", "pattern"):
        raise UnsupportedFormat(f"unsupported field type {fieldtype!r}")
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise UnsupportedFormat(f"unsupported symmetry {symmetry!r}")

    size = None
    best: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if size is None:
            if len(parts) != 3:
                raise ParseError("expected 'rows cols entries'", lineno)
            rows, cols, _nnz = (int(x) for x in parts)
            if rows != cols:
                raise UnsupportedFormat(f"matrix must be square, got {rows}x{cols}")
            size = rows
            continue
        want = 2 if fieldtype == "pattern" else 3
        if len(parts) < want:
            raise ParseError(f"malformed entry {raw!r}", lineno)
        try:
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            value = 1.0 if fieldtype == "pattern" else abs(float(parts[2]))
        except ValueError:
            raise ParseError(f"malformed entry {raw!r}", lineno) from None
        if not (0 <= i < size and 0 <= j < size):
            raise ParseError(f"index out of range in {raw!r}", lineno)
        if i == j or value == 0:
            continue
        key = (min(i, j), max(i, j))
        best[key] = max(best.get(key, 0.0), value)
    if size is None:
        raise ParseError("missing size line")
    triples = [(i, j, max(1, round(v * scale))) for (i, j), v in sorted(best.items())]
    return build_graph(size, triples)


def read_matrix_market(path: str | os.PathLike, scale: float = 1.0) -> WeightedGraph:
    return parse_matrix_market(_read_text(path), scale)


def aggregate_trace(records: Iterable[tuple[object, object, int]]) -> WeightedGraph:
    """Symmetric demand graph from ``(src, dst, volume)`` flow records.

    Volumes are summed over both directions; self-flows are dropped.
    """
    demand: dict[tuple[str, str], int] = defaultdict(int)
    for src, dst, volume in records:
        a, b = str(src), str(dst)
        if a == b:
            continue
        volume = int(volume)
        if volume < 0:
            raise ValueError(f"negative flow volume {volume} for {a}->{b}")
        demand[_pair(a, b)] += volume
    return _dense_graph(demand)


def read_trace(path: str | os.PathLike) -> WeightedGraph:
    records = []
    for lineno, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'src dst volume', got {raw!r}", lineno)
        try:
            records.append((parts[0], parts[1], int(parts[2])))
        except ValueError:
            raise ParseError(f"volume must be an integer, got {parts[2]!r}", lineno) from None
    return aggregate_trace(records)


@dataclass(frozen=True)
class InitiatorMatrix:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        probs = (self.a, self.b, self.c, self.d)
        if any(p < 0 for p in probs) or sum(probs) != 1:
            raise InvalidInitiator(f"initiator probabilities must be >= 0 and sum to 1, got "
                                   f"{tuple(str(p) for p in probs)}")

    @classmethod
    def of(cls, a, b, c, d) -> InitiatorMatrix:
        # str() first so that 0.15 means exactly 3/20
        return cls(*(Fraction(str(x)) for x in (a, b, c, d)))

    def probabilities(self) -> np.ndarray:
        return np.array([float(self.a), float(self.b), float(self.c), float(self.d)])


INITIATORS = {
    "rmat_b": InitiatorMatrix.of("0.55", "0.15", "0.15", "0.15"),
    "rmat_g": InitiatorMatrix.of("0.45", "0.15", "0.15", "0.25"),
    "rmat_er": InitiatorMatrix.of("0.25", "0.25", "0.25", "0.25"),
}

MAX_DEMAND = 500_000


def _demands(rng: np.random.Generator, count: int, dist: str, max_demand: int) -> np.ndarray:
    if dist in ("uni", "uniform"):
        return rng.integers(1, max_demand, size=count, endpoint=True)
    if dist in ("exp", "exponential"):
        # mean of a twentieth of the range keeps the tail inside [1, max_demand]
        raw = 1 + np.floor(rng.exponential(max_demand / 20, size=count))
        return np.minimum(raw, max_demand).astype(np.int64)
    raise ValueError(f"unknown demand distribution {dist!r}")


def gen_rmat(x: int, initiator: InitiatorMatrix | str = "rmat_er", edge_factor: int = 16,
             dist: str = "uni", max_demand: int = MAX_DEMAND, seed: int = 0) -> WeightedGraph:
    """Kronecker (RMAT) graph with ``2**x`` vertices.

    Samples ``edge_factor * 2**x`` vertex pairs by recursive quadrant choice,
    drops self-loops, merges repeated pairs and draws one demand per edge.
    """
    if isinstance(initiator, str):
        try:
            initiator = INITIATORS[initiator]
        except KeyError:
            raise InvalidInitiator(f"unknown initiator {initiator!r}") from None
    if not 10 <= x <= 20:
        warnings.warn(f"RMAT scale {x} is outside the usual range 10..20", stacklevel=2)
    if x < 0 or edge_factor < 0 or max_demand < 1:
        raise ValueError("scale, edge factor and max demand must be non-negative/positive")
    rng = np.random.default_rng(seed)
    n = 1 << x
    samples = edge_factor * n
    src = np.zeros(samples, dtype=np.int64)
    dst = np.zeros(samples, dtype=np.int64)
    cumulative = np.cumsum(initiator.probabilities())
    for level in range(x):
        quadrant = np.searchsorted(cumulative, rng.random(samples), side="right")
        quadrant = np.minimum(quadrant, 3)
        src |= (quadrant >> 1) << level
        dst |= (quadrant & 1) << level
    keep = src != dst
    lo = np.minimum(src[keep], dst[keep])
    hi = np.maximum(src[keep], dst[keep])
    pairs = np.unique(lo * n + hi)
    weights = _demands(rng, len(pairs), dist, max_demand)
    triples = [(int(p // n), int(p % n), int(w)) for p, w in zip(pairs, weights)]
    return build_graph(n, triples)


def gen_pfabric_like(n: int = 144, rate: float = 0.5, horizon: float = 100.0, seed: int = 0,
                     alpha: float = 1.1, min_size: int = 1, max_size: int = 30_000) -> WeightedGraph:
    """Demand graph of Poisson flow arrivals between random host pairs.

    Flows arrive at total intensity ``rate * n`` per time unit until
    ``horizon``; sizes follow a bounded Pareto law on ``[min_size,
    max_size]``.  Flow sizes are summed per host pair.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if n < 2:
        raise ValueError("need at least two hosts")
    rng = np.random.default_rng(seed)
    count = int(rng.poisson(rate * n * horizon)) if horizon > 0 else 0
    src = rng.integers(0, n, size=count)
    dst = (src + rng.integers(1, n, size=count)) % n
    u = rng.random(count)
    ratio = (min_size / max_size) ** alpha
    sizes = np.ceil(min_size * (1 - u * (1 - ratio)) ** (-1 / alpha)).astype(np.int64)
    sizes = np.clip(sizes, min_size, max_size)
    demand: dict[tuple[int, int], int] = defaultdict(int)
    for a, b, sz in zip(src.tolist(), dst.tolist(), sizes.tolist()):
        demand[(min(a, b), max(a, b))] += sz
    return build_graph(n, [(a, b, w) for (a, b), w in demand.items()])


def gen_hypercube_pendant(k: int, w: int = 1000, eps: int = 1) -> WeightedGraph:
    """Hypercube ``Q_k`` with ``k`` pendant vertices attached to each corner.

    Hypercube edges get demand ``w + eps`` and pendant edges ``w``; greedy
    methods then take all hypercube edges while the optimum takes all
    pendant edges.
    """
    if not 1 <= k <= 10:
        raise ValueError(f"k must lie in 1..10, got {k}")
    corners = 1 << k
    triples = []
    for v in range(corners):
        for bit in range(k):
            x = v ^ (1 << bit)
            if v < x:
                triples.append((v, x, w + eps))
        for j in range(k):
            triples.append((v, corners + v * k + j, w))
    return build_graph(corners * (1 + k), triples)


def gen_triangle_pendant() -> WeightedGraph:
    """Triangle 0-1-2 with a degree-one vertex hanging off each corner."""
    return build_graph(6, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (0, 3, 1), (1, 4, 1), (2, 5, 1)])


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    params: dict[str, str] = field(default_factory=dict, hash=False)

    @property
    def id(self) -> str:
        return ",".join([f"kind={self.kind}"] + [f"{k}={v}" for k, v in self.params.items()])

    def __str__(self) -> str:
        return self.id


_KIND_ALIASES = {
    "edgelist": "edgelist", "edge_list": "edgelist", "el": "edgelist",
    "mtx": "mtx", "matrix_market": "mtx", "mm": "mtx",
    "trace": "trace",
    "rmat": "rmat",
    "pfabric": "pfabric",
    "hypercube": "hypercube_pendant", "hypercube_pendant": "hypercube_pendant",
    "hypercube-pendant": "hypercube_pendant",
    "triangle": "triangle_pendant", "triangle_pendant": "triangle_pendant",
    "triangle-pendant": "triangle_pendant",
}

_STOCHASTIC = {"rmat", "pfabric"}


def parse_instance_spec(text: str) -> InstanceSpec:
    """Parse ``kind=...,key=value`` specs; a bare path means an edge list."""
    text = text.strip()
    if "=" not in text:
        alias = _KIND_ALIASES.get(text.lower())
        if alias is not None:
            return InstanceSpec(alias)
        if text.lower().endswith(".mtx"):
            return InstanceSpec("mtx", {"path": text})
        return InstanceSpec("edgelist", {"path": text})
    params: dict[str, str] = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value in instance spec, got {item!r}")
        params[key.strip().lower()] = value.strip()
    kind = params.pop("kind", None)
    if kind is None:
        raise ValueError(f"instance spec needs kind=..., got {text!r}")
    try:
        kind = _KIND_ALIASES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown instance kind {kind!r}") from None
    if kind in _STOCHASTIC and "seed" not in params:
        raise ValueError(f"generator {kind!r} requires seed=...")
    return InstanceSpec(kind, params)


def load_instance(spec: InstanceSpec | str) -> WeightedGraph:
    if isinstance(spec, str):
        spec = parse_instance_spec(spec)
    p = dict(spec.params)
    kind = spec.kind
    if kind == "edgelist":
        return read_edge_list(p["path"])
    if kind == "mtx":
        return read_matrix_market(p["path"], float(p.get("scale", 1.0)))
    if kind == "trace":
        return read_trace(p["path"])
    if kind == "triangle_pendant":
        return gen_triangle_pendant()
    if kind == "hypercube_pendant":
        return gen_hypercube_pendant(int(p.get("k", 3)), int(p.get("w", 1000)), int(p.get("eps", 1)))
    if kind == "rmat":
        init = p.get("init", "rmat_er")
        if init not in INITIATORS:
            vals = init.split("/")
            if len(vals) != 4:
                raise InvalidInitiator(f"initiator must be a preset or a/b/c/d, got {init!r}")
            init = InitiatorMatrix.of(*vals)
        return gen_rmat(int(p.get("x", 10)), init, int(p.get("ef", 16)), p.get("dist", "uni"),
                        int(p.get("max", MAX_DEMAND)), int(p["seed"]))
    if kind == "pfabric":
        return gen_pfabric_like(int(p.get("n", 144)), float(p.get("rate", 0.5)),
                                float(p.get("horizon", 100.0)), int(p["seed"]))
    raise ValueError(f"unknown instance kind {kind!r}")
