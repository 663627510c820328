"""Algorithm registry and configuration strings.

A configuration is written ``name`` or ``name:key=value,key=value``, e.g.
``gpa_it:post=local`` or ``node_centered:rating=ksum,theta=0.2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .blossom import LIBRARY, MODES
from .coloring import b_greedy_and_extend
from .graph import DisjointMatching, WeightedGraph
from .iterative import blossom_it, gpa_it, greedy_it
from .kec import DEFAULT_FLAGS, KecFlags, k_ec
from .node_centered import DEFAULT_RATING, DEFAULT_THETA, Rating, node_centered
from .postprocess import Postprocessing, Strategy, apply_strategy

ALGORITHMS = ("greedy_it", "gpa_it", "blossom_it", "bgreedy_extend", "node_centered", "kec")
ITERATIVE = {"greedy_it", "gpa_it", "blossom_it"}

_ALIASES = {
    "greedy-it": "greedy_it", "greedy": "greedy_it",
    "gpa-it": "gpa_it", "gpa": "gpa_it",
    "blossom-it": "blossom_it", "blossom": "blossom_it",
    "bgreedy&extend": "bgreedy_extend", "bgreedy": "bgreedy_extend",
    "nodecentered": "node_centered", "node-centered": "node_centered", "nc": "node_centered",
    "k-ec": "kec", "k_ec": "kec",
}


@dataclass(frozen=True)
class AlgorithmConfig:
    algorithm: str
    rating: Rating = DEFAULT_RATING
    theta: Fraction = DEFAULT_THETA
    flags: KecFlags = DEFAULT_FLAGS
    post: Postprocessing = field(default_factory=Postprocessing)
    blossom_mode: str = LIBRARY

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")

    @property
    def deterministic(self) -> bool:
        return self.post.strategy is not Strategy.ROMA

    @property
    def params(self) -> str:
        """Canonical parameter string (without the algorithm name)."""
        parts = []
        if self.algorithm == "node_centered":
            parts += [f"rating={self.rating.value}", f"theta={self.theta}"]
        if self.algorithm == "kec":
            parts.append(f"flags={self.flags}")
        if self.algorithm == "blossom_it" and self.blossom_mode != LIBRARY:
            parts.append(f"mode={self.blossom_mode}")
        if self.post.strategy is not Strategy.NONE:
            parts.append(f"post={self.post.strategy.value}")
            if self.post.strategy is Strategy.ROMA:
                parts.append(f"l={self.post.roma_repetitions}")
        return ",".join(parts)

    def with_seed(self, seed: int) -> AlgorithmConfig:
        return replace(self, post=replace(self.post, seed=seed))

    def __str__(self) -> str:
        return f"{self.algorithm}:{self.params}" if self.params else self.algorithm


def parse_config(text: str) -> AlgorithmConfig:
    name, _, rest = text.strip().partition(":")
    name = name.strip().lower()
    name = _ALIASES.get(name, name)
    kwargs: dict = {}
    strategy = Strategy.NONE
    repetitions = 4
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value in {text!r}, got {item!r}")
        key = key.strip().lower()
        value = value.strip()
        if key == "rating":
            kwargs["rating"] = Rating.parse(value)
        elif key == "theta":
            kwargs["theta"] = Fraction(value)
        elif key == "flags":
            kwargs["flags"] = KecFlags.parse(value)
        elif key == "post":
            strategy = Strategy.parse(value)
        elif key == "l":
            repetitions = int(value)
        elif key == "mode":
            if value not in MODES:
                raise ValueError(f"blossom mode must be one of {MODES}")
            kwargs["blossom_mode"] = value
        else:
            raise ValueError(f"unknown parameter {key!r} in {text!r}")
    return AlgorithmConfig(name, post=Postprocessing(strategy, repetitions), **kwargs)


def solve(g: WeightedGraph, k: int, config: AlgorithmConfig | str) -> DisjointMatching:
    """Run one configured algorithm, including its postprocessing."""
    if isinstance(config, str):
        config = parse_config(config)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    post = config.post
    alg = config.algorithm

    if alg in ITERATIVE:
        def hook(s: DisjointMatching, c: int) -> None:
            apply_strategy(g, s, post, c)

        hook_arg = hook if post.strategy is not Strategy.NONE else None
        if alg == "greedy_it":
            s = greedy_it(g, k, hook_arg)
        elif alg == "gpa_it":
            s = gpa_it(g, k, hook_arg)
        else:
            s = blossom_it(g, k, hook_arg, mode=config.blossom_mode)
    else:
        if alg == "bgreedy_extend":
            s = b_greedy_and_extend(g, k)
        elif alg == "node_centered":
            s = node_centered(g, k, config.rating, config.theta)
        else:
            s = k_ec(g, k, config.flags)
        # all classes complete at once
        for c in range(k):
            apply_strategy(g, s, post, c)
    apply_strategy(g, s, post)
    return s


BEST_CONFIGS = (
    "greedy_it",
    "gpa_it:post=local",
    "blossom_it",
    "bgreedy_extend",
    "node_centered:rating=ksum,theta=1/5",
    "kec:flags=cc+rl",
)


def all_configs() -> list[AlgorithmConfig]:
    """The experiment configuration set: NodeCentered with every rating and
    threshold, Greedy-It with and without Swaps, GPA-It with and without Swaps
    or with ROMA, plain Blossom-It and bGreedy&Extend, and k-EC with every
    flag combination."""
    none, local, glob = (Postprocessing(s) for s in
                         (Strategy.NONE, Strategy.LOCAL_SWAPS, Strategy.GLOBAL_SWAPS))
    out = [AlgorithmConfig("node_centered", rating=rating, theta=theta)
           for rating in Rating for theta in (Fraction(0), Fraction(1, 5), Fraction(1, 2))]
    out += [AlgorithmConfig("greedy_it", post=p) for p in (none, local, glob)]
    out += [AlgorithmConfig("gpa_it", post=p)
            for p in (none, local, glob, Postprocessing(Strategy.ROMA, 4, 0))]
    out += [AlgorithmConfig("blossom_it"), AlgorithmConfig("bgreedy_extend")]
    out += [AlgorithmConfig("kec", flags=KecFlags(*(bool(bits >> i & 1) for i in range(4))))
            for bits in range(16)]
    return out
