"""Experiment runner: algorithm x config x k sweeps with median-of-repetitions timing.

Every repetition runs in a forked child so a timeout can stop it; only the
``solve`` call is timed.  Relative quality is measured against the exact
optimum when the oracle ran, otherwise against the best weight any record of
the same (instance, k) cell achieved.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import os
import re
import statistics
import time
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .algorithms import AlgorithmConfig, parse_config, solve
from .exact import ExactLimits, LimitExceeded, brute_force_kdjm
from .graph import WeightedGraph, validate_solution
from .instances import IoFailure, load_instance, parse_instance_spec

OK = "ok"
TIMEOUT = "timeout"
ERROR = "error"

DEFAULT_KS = (2, 4, 8, 16, 32, 64, 96)
DEFAULT_TIMEOUT = 4 * 3600.0

CSV_HEADER = ("instance", "algorithm", "config", "k", "seed", "status", "weight",
              "rel_quality", "t1_ns", "t2_ns", "t3_ns", "t_median_ns")
# trailing columns carry the remaining record fields so the file round-trips
CSV_EXTRA = ("class_weights", "rep_weights", "extra_times_ns", "reference", "message")


def parse_duration(text: str | float | int) -> float:
    """Seconds from ``90``, ``1.5``, ``250ms``, ``30s``, ``10m`` or ``4h``."""
    if isinstance(text, (int, float)):
        return float(text)
    m = re.fullmatch(r"\s*([0-9]*\.?[0-9]+)\s*(ms|s|m|h)?\s*", text)
    if m is None:
        raise ValueError(f"cannot parse duration {text!r}")
    scale = {"ms": 1e-3, "s": 1.0, "m": 60.0, "h": 3600.0, None: 1.0}[m.group(2)]
    return float(m.group(1)) * scale


@dataclass(frozen=True)
class ExperimentPlan:
    instances: tuple[str, ...]
    configs: tuple[str, ...]
    ks: tuple[int, ...] = DEFAULT_KS
    repetitions: int = 3
    timeout: float = DEFAULT_TIMEOUT
    out: str | None = None
    base_seed: int = 0
    oracle: bool = False
    pin_cpu: bool = True

    def __post_init__(self):
        if not self.instances or not self.configs or not self.ks:
            raise ValueError("plan needs at least one instance, config and k")
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise ValueError(f"repetitions must be odd and positive, got {self.repetitions}")
        if any(k < 1 for k in self.ks):
            raise ValueError(f"k values must be at least 1, got {self.ks}")
        if not self.timeout > 0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")
        for c in self.configs:
            parse_config(c)
        for spec in self.instances:
            parse_instance_spec(spec)


@dataclass(frozen=True)
class ExperimentRecord:
    instance: str
    algorithm: str
    config: str
    k: int
    seed: int
    status: str
    weight: int | None = None
    class_weights: tuple[int, ...] = ()
    times_ns: tuple[int, ...] = ()
    median_ns: int | None = None
    rel_quality: float | None = None
    rep_weights: tuple[int, ...] = ()
    reference: str = ""      # "OPT" or "BEST"
    message: str = ""

    @property
    def key(self) -> tuple[str, str, str, int]:
        return (self.instance, self.algorithm, self.config, self.k)


def median_time(times: Sequence[int]) -> int:
    """Middle order statistic of an odd number of timings."""
    if len(times) % 2 == 0:
        raise ValueError("median needs an odd number of timings")
    return sorted(times)[len(times) // 2]


def _pin_to_one_cpu() -> None:
    # best effort: the paper's runs were pinned to a single CPU
    try:
        cpus = sorted(os.sched_getaffinity(0))
        os.sched_setaffinity(0, {cpus[0]})
    except (AttributeError, OSError, IndexError):
        pass


def _measure(g: WeightedGraph, k: int, config: AlgorithmConfig) -> tuple:
    start = time.perf_counter_ns()
    s = solve(g, k, config)
    elapsed = time.perf_counter_ns() - start
    report = validate_solution(g, s)
    if not report.valid:
        return (ERROR, f"invalid solution: {report.violation}")
    return (OK, s.total_weight, tuple(s.class_weights), elapsed)


def _child(conn, g, k, config, pin) -> None:
    if pin:
        _pin_to_one_cpu()
    try:
        conn.send(_measure(g, k, config))
    except BaseException as exc:  # noqa: BLE001 - reported as a record status
        conn.send((ERROR, f"{type(exc).__name__}: {exc}"))
    finally:
        conn.close()


def run_once(g: WeightedGraph, k: int, config: AlgorithmConfig, timeout: float,
             pin: bool = True) -> tuple:
    """One timed repetition in a forked child.

    Returns ``("ok", weight, class_weights, ns)``, ``("timeout",)`` or
    ``("error", message)``.
    """
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        # no fork on this platform: run inline, the timeout cannot be enforced
        try:
            return _measure(g, k, config)
        except Exception as exc:  # noqa: BLE001
            return (ERROR, f"{type(exc).__name__}: {exc}")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(send, g, k, config, pin), daemon=True)
    proc.start()
    send.close()
    try:
        if not recv.poll(timeout):
            proc.kill()
            return (TIMEOUT,)
        try:
            return recv.recv()
        except EOFError:
            return (ERROR, f"worker died with exit code {proc.exitcode}")
    finally:
        proc.join()
        recv.close()


def _run_cell(instance: str, g: WeightedGraph, config: AlgorithmConfig, k: int,
              plan: ExperimentPlan) -> ExperimentRecord:
    base = dict(instance=instance, algorithm=config.algorithm, config=str(config), k=k,
                seed=plan.base_seed)
    weights, classes, times = [], [], []
    for rep in range(plan.repetitions):
        cfg = config if config.deterministic else config.with_seed(plan.base_seed + rep)
        outcome = run_once(g, k, cfg, plan.timeout, plan.pin_cpu)
        if outcome[0] == TIMEOUT:
            return ExperimentRecord(status=TIMEOUT, message=f"repetition {rep} exceeded "
                                    f"{plan.timeout:g} s", **base)
        if outcome[0] == ERROR:
            return ExperimentRecord(status=ERROR, message=outcome[1], **base)
        _, w, cw, ns = outcome
        weights.append(w)
        classes.append(cw)
        times.append(ns)
    if config.deterministic and len(set(weights)) > 1:
        return ExperimentRecord(status=ERROR, rep_weights=tuple(weights),
                                message="deterministic config gave different weights", **base)
    # the repetition with the median weight represents the record
    pick = sorted(range(len(weights)), key=lambda i: (weights[i], i))[len(weights) // 2]
    return ExperimentRecord(status=OK, weight=weights[pick], class_weights=classes[pick],
                            times_ns=tuple(times), median_ns=median_time(times),
                            rep_weights=tuple(weights), **base)


def _optimum(g: WeightedGraph, k: int) -> int | None:
    try:
        return brute_force_kdjm(g, k, ExactLimits()).weight
    except LimitExceeded:
        return None


def attach_quality(records: Iterable[ExperimentRecord],
                   optima: dict[tuple[str, int], int] | None = None) -> list[ExperimentRecord]:
    """Fill ``rel_quality`` against OPT where known, else the cell's BEST."""
    records = list(records)
    optima = optima or {}
    best: dict[tuple[str, int], int] = {}
    for r in records:
        if r.status == OK:
            cell = (r.instance, r.k)
            best[cell] = max(best.get(cell, 0), r.weight)
    out = []
    for r in records:
        if r.status != OK:
            out.append(r)
            continue
        cell = (r.instance, r.k)
        if cell in optima:
            ref, label = optima[cell], "OPT"
        else:
            ref, label = best[cell], "BEST"
        if ref == 0:
            quality = 1.0
        elif r.weight > ref:
            out.append(replace(r, status=ERROR, message=f"weight {r.weight} exceeds OPT {ref}"))
            continue
        else:
            quality = r.weight / ref
        out.append(replace(r, rel_quality=quality, reference=label))
    return out


def run_plan(plan: ExperimentPlan,
             progress: Callable[[ExperimentRecord], None] | None = None) -> list[ExperimentRecord]:
    """Execute every (instance, config, k) cell serially and write the CSV."""
    configs = [parse_config(c) for c in plan.configs]
    records: list[ExperimentRecord] = []
    optima: dict[tuple[str, int], int] = {}
    for text in plan.instances:
        spec = parse_instance_spec(text)
        try:
            g = load_instance(spec)
        except (IoFailure, ValueError, KeyError) as exc:
            for cfg in configs:
                for k in plan.ks:
                    rec = ExperimentRecord(spec.id, cfg.algorithm, str(cfg), k, plan.base_seed,
                                           ERROR, message=f"cannot load instance: {exc}")
                    records.append(rec)
                    if progress:
                        progress(rec)
            continue
        if plan.oracle:
            for k in plan.ks:
                opt = _optimum(g, k)
                if opt is not None:
                    optima[(spec.id, k)] = opt
        for cfg in configs:
            for k in plan.ks:
                rec = _run_cell(spec.id, g, cfg, k, plan)
                records.append(rec)
                if progress:
                    progress(rec)
    records = sorted(attach_quality(records, optima), key=lambda r: r.key)
    if plan.out:
        write_csv(records, plan.out)
    return records


# --- CSV ---------------------------------------------------------------------

def _ints(values: Sequence[int]) -> str:
    return ";".join(str(v) for v in values)


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(";")) if text else ()


def _opt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def record_row(r: ExperimentRecord) -> list[str]:
    times = list(r.times_ns)
    head = [_opt(t) for t in times[:3]] + [""] * (3 - min(3, len(times)))
    return [r.instance, r.algorithm, r.config, str(r.k), str(r.seed), r.status,
            _opt(r.weight), _opt(r.rel_quality), *head, _opt(r.median_ns),
            _ints(r.class_weights), _ints(r.rep_weights), _ints(times[3:]),
            r.reference, r.message]


def write_csv(records: Iterable[ExperimentRecord], path: str | os.PathLike) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER + CSV_EXTRA)
            for r in records:
                w.writerow(record_row(r))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_csv(path: str | os.PathLike) -> list[ExperimentRecord]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if not rows or tuple(rows[0][:len(CSV_HEADER)]) != CSV_HEADER:
        raise ValueError(f"{path}: header does not match {','.join(CSV_HEADER)}")
    extra = rows[0][len(CSV_HEADER):]
    out = []
    for row in rows[1:]:
        cols = dict(zip(CSV_HEADER + tuple(extra), row))
        times = [int(cols[t]) for t in ("t1_ns", "t2_ns", "t3_ns") if cols[t]]
        times += _parse_ints(cols.get("extra_times_ns", ""))
        out.append(ExperimentRecord(
            instance=cols["instance"], algorithm=cols["algorithm"], config=cols["config"],
            k=int(cols["k"]), seed=int(cols["seed"]), status=cols["status"],
            weight=int(cols["weight"]) if cols["weight"] else None,
            class_weights=_parse_ints(cols.get("class_weights", "")),
            times_ns=tuple(times),
            median_ns=int(cols["t_median_ns"]) if cols["t_median_ns"] else None,
            rel_quality=float(cols["rel_quality"]) if cols["rel_quality"] else None,
            rep_weights=_parse_ints(cols.get("rep_weights", "")),
            reference=cols.get("reference", ""), message=cols.get("message", "")))
    return out


# --- reporting ---------------------------------------------------------------

@dataclass
class Report:
    baseline: str
    speedup: dict[str, float] = field(default_factory=dict)
    mean_quality: dict[tuple[str, int], float] = field(default_factory=dict)
    min_quality: dict[tuple[str, int], float] = field(default_factory=dict)
    growth: dict[str, float] = field(default_factory=dict)
    k_range: tuple[int, int] | None = None

    def format(self) -> str:
        lines = [f"speedup vs {self.baseline} (geometric mean of median-time ratios)"]
        for cfg, v in sorted(self.speedup.items()):
            lines.append(f"  {cfg:<40} {v:10.3f}")
        if self.k_range:
            lo, hi = self.k_range
            lines.append(f"runtime growth k={lo} -> k={hi} (geometric mean over instances)")
            for cfg, v in sorted(self.growth.items()):
                lines.append(f"  {cfg:<40} {v:10.3f}")
        lines.append("relative quality per k (mean / min)")
        for (cfg, k) in sorted(self.mean_quality):
            lines.append(f"  {cfg:<40} k={k:<4} {self.mean_quality[cfg, k]:.4f} / "
                         f"{self.min_quality[cfg, k]:.4f}")
        return "\n".join(lines)


def _geomean(values: Sequence[float]) -> float:
    return math.exp(statistics.fmean(math.log(v) for v in values))


def compare_report(records: Iterable[ExperimentRecord], baseline: str | None = None) -> Report:
    """Speedups against ``baseline``, runtime growth over k and quality per k.

    ``baseline`` is a config string; it defaults to ``greedy_it`` when present,
    else the first config in sorted order.
    """
    ok = [r for r in records if r.status == OK]
    configs = sorted({r.config for r in ok})
    if baseline is None:
        baseline = "greedy_it" if "greedy_it" in configs else (configs[0] if configs else "")
    report = Report(baseline)
    times = {(r.instance, r.config, r.k): r.median_ns for r in ok}
    for cfg in configs:
        ratios = [times[inst, baseline, k] / max(1, t)
                  for (inst, c, k), t in times.items()
                  if c == cfg and (inst, baseline, k) in times]
        if ratios:
            report.speedup[cfg] = _geomean([max(r, 1e-300) for r in ratios])
    ks = sorted({r.k for r in ok})
    if len(ks) >= 2:
        lo, hi = ks[0], ks[-1]
        report.k_range = (lo, hi)
        for cfg in configs:
            growth = [times[inst, cfg, hi] / max(1, times[inst, cfg, lo])
                      for inst in {r.instance for r in ok}
                      if (inst, cfg, lo) in times and (inst, cfg, hi) in times]
            if growth:
                report.growth[cfg] = _geomean(growth)
    quality = defaultdict(list)
    for r in ok:
        if r.rel_quality is not None:
            quality[r.config, r.k].append(r.rel_quality)
    for key, vals in quality.items():
        report.mean_quality[key] = statistics.fmean(vals)
        report.min_quality[key] = min(vals)
    return report


# --- plan files --------------------------------------------------------------

_PLAN_KEYS = {"instance", "alg", "k", "reps", "timeout", "seed", "out", "oracle", "pin"}


def parse_plan(text: str, **overrides) -> ExperimentPlan:
    """Plan from ``key=value`` lines; ``instance`` and ``alg`` may repeat.

    ``k`` takes a comma-separated list, ``timeout`` a duration such as ``4h``.
    Blank lines and ``#`` comments are ignored.
    """
    instances: list[str] = []
    configs: list[str] = []
    settings: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not eq or key not in _PLAN_KEYS:
            raise ValueError(f"plan line {lineno}: expected one of {sorted(_PLAN_KEYS)} "
                             f"as key=value, got {raw!r}")
        if key == "instance":
            instances.append(value)
        elif key == "alg":
            configs.append(value)
        elif key == "k":
            settings["ks"] = tuple(int(t) for t in value.split(",") if t.strip())
        elif key == "reps":
            settings["repetitions"] = int(value)
        elif key == "timeout":
            settings["timeout"] = parse_duration(value)
        elif key == "seed":
            settings["base_seed"] = int(value)
        elif key == "out":
            settings["out"] = value
        else:
            settings[{"oracle": "oracle", "pin": "pin_cpu"}[key]] = value.lower() in (
                "1", "true", "yes", "on")
    settings.update({k: v for k, v in overrides.items() if v is not None})
    instances = list(settings.pop("instances", ())) or instances
    configs = list(settings.pop("configs", ())) or configs
    return ExperimentPlan(tuple(instances), tuple(configs), **settings)


def read_plan(path: str | os.PathLike, **overrides) -> ExperimentPlan:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read plan {path}: {exc}") from exc
    return parse_plan(text, **overrides)
