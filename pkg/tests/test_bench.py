from __future__ import annotations

import csv

import pytest

from kdjm import bench
from kdjm.bench import (CSV_HEADER, ERROR, OK, TIMEOUT, ExperimentPlan, ExperimentRecord,
                        attach_quality, compare_report, median_time, parse_duration, parse_plan,
                        read_csv, read_plan, run_plan, write_csv)


def record(config, weight, k=2, instance="g", times=(10, 10, 10)):
    return ExperimentRecord(instance, config.split(":")[0], config, k, 0, OK, weight=weight,
                            class_weights=(weight,), times_ns=times,
                            median_ns=median_time(times), rep_weights=(weight,) * len(times))


def test_triangle_pendant_plan(tmp_path):
    out = tmp_path / "r.csv"
    plan = ExperimentPlan(("triangle",), ("greedy_it", "blossom_it"), ks=(3,), out=str(out),
                          timeout=60)
    records = run_plan(plan)
    by_alg = {r.algorithm: r for r in records}
    assert by_alg["blossom_it"].weight == 5
    assert by_alg["greedy_it"].weight == 6
    assert by_alg["greedy_it"].rel_quality == 1.0
    assert by_alg["blossom_it"].rel_quality == pytest.approx(5 / 6)
    assert all(r.reference == "BEST" for r in records)
    assert [r.key for r in records] == sorted(r.key for r in records)
    with open(out, newline="") as fh:
        header = next(csv.reader(fh))
    assert tuple(header[:12]) == CSV_HEADER


def test_oracle_reference():
    plan = ExperimentPlan(("triangle",), ("blossom_it", "kec"), ks=(3,), oracle=True,
                          repetitions=1)
    records = run_plan(plan)
    assert {r.reference for r in records} == {"OPT"}
    assert {r.config: r.rel_quality for r in records} == {
        "blossom_it": pytest.approx(5 / 6), "kec:flags=CC+RL": 1.0}


def test_timeout_record():
    # a scale-14 RMAT instead of scale 20 keeps instance generation short
    plan = ExperimentPlan(("kind=rmat,x=14,seed=1",), ("blossom_it:mode=plain",), ks=(8,),
                          timeout=0.001, repetitions=1)
    (r,) = run_plan(plan)
    assert r.status == TIMEOUT
    assert r.weight is None and r.median_ns is None and r.rel_quality is None


def test_three_equal_repetitions():
    plan = ExperimentPlan(("kind=hypercube,k=3",), ("gpa_it:post=local",), ks=(3,))
    (r,) = run_plan(plan)
    assert r.status == OK and len(r.rep_weights) == 3 and len(set(r.rep_weights)) == 1
    assert len(r.times_ns) == 3 and r.median_ns == sorted(r.times_ns)[1]


def test_roma_repetitions_use_derived_seeds(monkeypatch):
    seen = []
    original = bench.run_once

    def spy(g, k, config, timeout, pin=True):
        seen.append(config.post.seed)
        return original(g, k, config, timeout, pin)

    monkeypatch.setattr(bench, "run_once", spy)
    plan = ExperimentPlan(("kind=rmat,x=10,seed=2",), ("gpa_it:post=roma,l=4",), ks=(4,),
                          base_seed=7)
    (r,) = run_plan(plan)
    assert r.status == OK and seen == [7, 8, 9]
    assert r.weight == sorted(r.rep_weights)[1]


def test_nondeterminism_is_an_error(monkeypatch):
    answers = iter([(OK, 5, (5,), 100), (OK, 6, (6,), 100), (OK, 5, (5,), 100)])
    monkeypatch.setattr(bench, "run_once", lambda *a, **kw: next(answers))
    (r,) = run_plan(ExperimentPlan(("triangle",), ("greedy_it",), ks=(1,)))
    assert r.status == ERROR and r.rep_weights == (5, 6, 5)


def test_unloadable_instance_gives_error_records(tmp_path):
    plan = ExperimentPlan((str(tmp_path / "missing.txt"),), ("greedy_it", "kec"), ks=(2, 4))
    records = run_plan(plan)
    assert len(records) == 4 and all(r.status == ERROR for r in records)


def test_csv_round_trip(tmp_path):
    plan = ExperimentPlan(("triangle", "kind=rmat,x=14,seed=1"),
                          ("greedy_it", "node_centered:rating=avg,theta=1/2",
                           "blossom_it:mode=plain"),
                          ks=(2, 8), timeout=0.5, repetitions=3)
    records = run_plan(plan)
    records.append(record("kec", 5, times=(1, 2, 3, 4, 5)))
    path = tmp_path / "r.csv"
    write_csv(records, path)
    assert read_csv(path) == records


def test_csv_header_checked(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n")
    with pytest.raises(ValueError):
        read_csv(path)


def test_quality_examples():
    recs = attach_quality([record("a", 4), record("b", 5), record("c", 5)])
    assert [r.rel_quality for r in recs] == [0.8, 1.0, 1.0]
    (single,) = attach_quality([record("a", 7)])
    assert single.rel_quality == 1.0
    (zero,) = attach_quality([record("a", 0)])
    assert zero.rel_quality == 1.0
    (over,) = attach_quality([record("a", 9)], {("g", 2): 8})
    assert over.status == ERROR


def test_best_reached_per_cell():
    plan = ExperimentPlan(("triangle", "kind=hypercube,k=3"), ("greedy_it", "gpa_it", "kec"),
                          ks=(2, 3), repetitions=1)
    records = run_plan(plan)
    for cell in {(r.instance, r.k) for r in records}:
        assert max(r.rel_quality for r in records if (r.instance, r.k) == cell) == 1.0


def test_report_identical_runtimes():
    recs = attach_quality([record("greedy_it", 5), record("kec", 5),
                           record("greedy_it", 6, k=4), record("kec", 6, k=4)])
    report = compare_report(recs)
    assert report.baseline == "greedy_it"
    assert report.speedup == {"greedy_it": 1.0, "kec": 1.0}
    assert report.growth == {"greedy_it": 1.0, "kec": 1.0}
    assert report.mean_quality[("kec", 2)] == 1.0
    assert "speedup vs greedy_it" in report.format()


def test_report_ratios():
    recs = attach_quality([record("greedy_it", 4, times=(40, 40, 40)),
                           record("kec", 5, times=(10, 10, 10)),
                           record("greedy_it", 4, k=8, times=(80, 80, 80)),
                           record("kec", 5, k=8, times=(40, 40, 40))])
    report = compare_report(recs)
    assert report.speedup["kec"] == pytest.approx(((40 / 10) * (80 / 40)) ** 0.5)
    assert report.growth["kec"] == pytest.approx(4.0)
    assert report.min_quality[("greedy_it", 2)] == pytest.approx(0.8)
    assert compare_report(recs, "kec").speedup["kec"] == 1.0


def test_helpers():
    assert median_time([5, 1, 3]) == 3
    with pytest.raises(ValueError):
        median_time([1, 2])
    assert parse_duration("4h") == 14400
    assert parse_duration("250ms") == 0.25
    assert parse_duration(3) == 3.0
    with pytest.raises(ValueError):
        parse_duration("soon")


def test_plan_validation():
    with pytest.raises(ValueError):
        ExperimentPlan(("triangle",), ("greedy_it",), repetitions=2)
    with pytest.raises(ValueError):
        ExperimentPlan(("triangle",), ("greedy_it",), ks=(0,))
    with pytest.raises(ValueError):
        ExperimentPlan(("triangle",), ("simplex",))
    with pytest.raises(ValueError):
        ExperimentPlan((), ("greedy_it",))
    assert ExperimentPlan(("triangle",), ("greedy_it",)).ks == (2, 4, 8, 16, 32, 64, 96)


def test_plan_files(tmp_path):
    text = """# sweep
instance = triangle
instance = kind=hypercube,k=3
alg = greedy_it
alg = kec:flags=cc+rl
k = 2,4
reps = 5
timeout = 30s
seed = 3
oracle = yes
"""
    plan = parse_plan(text)
    assert plan.instances == ("triangle", "kind=hypercube,k=3")
    assert plan.configs == ("greedy_it", "kec:flags=cc+rl")
    assert (plan.ks, plan.repetitions, plan.timeout, plan.base_seed, plan.oracle) == \
        ((2, 4), 5, 30.0, 3, True)
    path = tmp_path / "p.plan"
    path.write_text(text)
    plan = read_plan(path, ks=(8,), configs=["gpa_it"])
    assert plan.ks == (8,) and plan.configs == ("gpa_it",)
    with pytest.raises(ValueError):
        parse_plan("instances = triangle\n")
