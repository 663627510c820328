from __future__ import annotations

import io
import math
import random
import re

import numpy as np
import pytest
from scipy.optimize import Bounds, LinearConstraint, milp

from conftest import exhaustive_kdjm_weight, random_graph
from kdjm.algorithms import BEST_CONFIGS, all_configs, solve
from kdjm.exact import ExactLimits, LimitExceeded, brute_force_kdjm, export_ilp, ilp_model
from kdjm.graph import build_graph, validate_solution
from kdjm.instances import IoFailure, gen_hypercube_pendant, gen_triangle_pendant
from kdjm.iterative import blossom_max_weight_matching


def test_examples(unit_triangle):
    assert brute_force_kdjm(unit_triangle, 2).weight == 2
    assert brute_force_kdjm(unit_triangle, 3).weight == 3
    res = brute_force_kdjm(gen_triangle_pendant(), 3)
    assert res.weight == 6
    assert validate_solution(gen_triangle_pendant(), res.solution).valid
    assert res.solution.total_weight == 6


def test_limits():
    g = gen_hypercube_pendant(3)
    with pytest.raises(LimitExceeded):
        brute_force_kdjm(g, 3)
    with pytest.raises(LimitExceeded):
        brute_force_kdjm(gen_triangle_pendant(), 5)
    assert brute_force_kdjm(gen_triangle_pendant(), 5, ExactLimits(max_k=6)).weight == 6


def test_against_plain_enumeration():
    rng = random.Random(59)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 6), max_edges=7, max_weight=9)
        for k in (1, 2, 3):
            res = brute_force_kdjm(g, k)
            assert res.weight == exhaustive_kdjm_weight(g, k)
            assert validate_solution(g, res.solution).valid
            assert res.solution.total_weight == res.weight


def test_k1_equals_max_weight_matching():
    rng = random.Random(61)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 8), max_edges=14)
        assert brute_force_kdjm(g, 1).weight == blossom_max_weight_matching(g).weight


def test_monotone_in_k_and_doubling_bound():
    rng = random.Random(67)
    for _ in range(25):
        g = random_graph(rng, rng.randint(3, 8), max_edges=12)
        opt = [brute_force_kdjm(g, k).weight for k in range(1, 5)]
        assert opt == sorted(opt)
        for k in range(1, 5):
            assert opt[k - 1] <= 2 * opt[math.ceil(k / 2) - 1]


def test_heuristics_below_optimum():
    rng = random.Random(71)
    configs = list(BEST_CONFIGS) + [str(c) for c in all_configs()[::5]]
    for _ in range(20):
        g = random_graph(rng, rng.randint(2, 8), max_edges=12)
        for k in (1, 2, 3):
            opt = brute_force_kdjm(g, k).weight
            for cfg in configs:
                assert solve(g, k, cfg).total_weight <= opt


def test_ilp_counts(triangle):
    text = ilp_model(triangle, 2)
    binaries = text.split("Binary\n")[1].split("End")[0].split()
    assert len(binaries) == 6
    assert len(re.findall(r"^ v\d+_c\d+:", text, re.M)) == 6
    assert len(re.findall(r"^ e\d+:", text, re.M)) == 3
    assert text == ilp_model(triangle, 2)


def test_ilp_empty():
    text = ilp_model(build_graph(0, []), 2)
    assert " obj: 0\n" in text
    assert "x_" not in text


def test_export_targets(tmp_path, triangle):
    buf = io.StringIO()
    text = export_ilp(triangle, 2, buf)
    assert buf.getvalue() == text
    path = tmp_path / "model.lp"
    export_ilp(triangle, 2, path)
    assert path.read_text() == text
    with pytest.raises(IoFailure):
        export_ilp(triangle, 2, tmp_path / "missing" / "model.lp")


def solve_lp_text(text: str) -> float:
    """Solve an exported model with scipy's MILP solver."""
    body = text.split("Maximize\n")[1]
    obj_text, rest = body.split("Subject To\n")
    cons_text = rest.split("Binary\n")[0]
    names = text.split("Binary\n")[1].split("End")[0].split()
    col = {name: i for i, name in enumerate(names)}
    c = np.zeros(len(names))
    for coef, name in re.findall(r"(\d+) (x_e\d+_c\d+)", obj_text):
        c[col[name]] = -int(coef)
    rows = []
    for line in cons_text.strip().splitlines():
        lhs = line.split(":", 1)[1].split("<=")[0]
        row = np.zeros(len(names))
        for name in re.findall(r"x_e\d+_c\d+", lhs):
            row[col[name]] = 1
        rows.append(row)
    res = milp(c, constraints=LinearConstraint(np.array(rows), -np.inf, 1),
               integrality=np.ones(len(names)), bounds=Bounds(0, 1))
    assert res.success
    return -res.fun


def test_exported_model_solves_to_optimum():
    assert round(solve_lp_text(ilp_model(gen_triangle_pendant(), 3))) == 6
    rng = random.Random(73)
    for _ in range(10):
        g = random_graph(rng, rng.randint(3, 8), max_edges=12)
        for k in (1, 2, 3):
            assert round(solve_lp_text(ilp_model(g, k))) == brute_force_kdjm(g, k).weight
