"""Acceptance criteria. Each test covers one criterion; a PASS/FAIL summary
line per criterion is printed at the end of the pytest run."""

import json
import time
from math import ceil

import numpy as np
import pytest

from secidx import cli, io
from secidx.coding import all_windows, build_check_matrix, build_coding_matrix
from secidx.errors import NoConsistentSupport
from secidx.guard import correct, detect_H, detect_R, max_correctable
from secidx.index import (
    EIGEN,
    SPARK,
    SUBSET,
    eigen_structure,
    is_maximally_secure,
    oracle_security_index,
    security_index,
    security_index_eigen,
    security_index_subset,
    spark,
)
from secidx.model import AttackSignal, Trajectory
from secidx.polymat import apply_shift_polynomial, security_index_from_R
from secidx.simulate import inject, random_attack, simulate

from conftest import example_R, example_system

ATTACKS_PER_WEIGHT = 10
REL_ERR = 1e-8


@pytest.fixture(scope="module")
def indexed(suite):
    """(suite item, delta, witness report) for every suite system."""
    return [(item, security_index(item.sys)) for item in suite]


def _pairs():
    rng = np.random.default_rng(2016)
    pairs = [(1.0, 2.0)]
    while len(pairs) < 6:
        a, b = rng.uniform(-3, 3, 2)
        if abs(a - b) > 1e-3:
            pairs.append((a, b))
    return pairs


def test_ac1_example_reproduction():
    start = time.perf_counter()
    for l1, l2 in _pairs():
        sys = example_system(l1, l2)
        report = security_index(sys)
        assert set(report.values) == {SUBSET, SPARK, EIGEN}
        assert all(v == 2 for v in report.values.values())
        assert oracle_security_index(build_coding_matrix(sys)) == 2
        assert security_index_from_R(example_R(l1, l2)) == 2
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.2f} s"


def test_ac2_subset_spark_oracle_agree(suite):
    assert len(suite) == 200
    assert {s.sys.n for s in suite} == {1, 2, 3, 4}
    assert {s.sys.N for s in suite} == set(range(2, 8))
    start = time.perf_counter()
    for item in suite:
        cm = build_coding_matrix(item.sys)
        a = security_index_subset(cm).delta
        b = spark(build_check_matrix(cm))
        c = oracle_security_index(cm)
        assert a == b == c, (item.kind, item.seed, a, b, c)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.2f} s"


def test_ac3_eigen_method_consistent(suite):
    repeated = 0
    diagonalizable = 0
    for item in suite:
        es = eigen_structure(item.sys.A)
        if not es.diagonalizable:
            continue
        diagonalizable += 1
        cm = build_coding_matrix(item.sys)
        assert security_index_eigen(item.sys, es).delta == security_index_subset(cm).delta, item.seed
        if item.kind == "repeated" and max(B.shape[1] for B in es.eigenspaces) >= 2:
            repeated += 1
    assert repeated >= 20
    assert diagonalizable >= 100


def test_ac4_detection(indexed):
    rng = np.random.default_rng(404)
    evaded = 0
    for item, report in indexed:
        sys, delta = item.sys, report.delta
        T = sys.n + 3
        for q in range(1, delta):
            for k in range(ATTACKS_PER_WEIGHT):
                x0 = rng.standard_normal(sys.n)
                y = simulate(sys, x0, T)
                assert not detect_H(sys, y).attacked
                eta = random_attack(sys.N, T, q, seed=int(rng.integers(2**31)))
                assert detect_H(sys, inject(y, eta)).attacked, (item.seed, q, k)
        # an attack that is itself a minimal-weight trajectory stays invisible
        w = simulate(sys, 3.0 * report.witness_state, T).samples.copy()
        outside = [i - 1 for i in range(1, sys.N + 1) if i not in report.witness_support]
        w[outside] = 0
        eta = AttackSignal(w)
        assert eta.weight == delta
        y = simulate(sys, rng.standard_normal(sys.n), T)
        if not detect_H(sys, inject(y, eta)).attacked:
            evaded += 1
    assert evaded == len(indexed)


def test_ac5_correction(indexed):
    rng = np.random.default_rng(505)
    systems = 0
    beyond = 0
    for item, report in indexed:
        sys, delta = item.sys, report.delta
        if delta < 3:
            continue
        systems += 1
        T = 2 * sys.n + 2
        for q in range(max_correctable(delta) + 1):
            for _ in range(ATTACKS_PER_WEIGHT):
                x0 = rng.standard_normal(sys.n)
                eta = random_attack(sys.N, T, q, seed=int(rng.integers(2**31)))
                res = correct(sys, inject(simulate(sys, x0, T), eta), delta=delta)
                assert np.linalg.norm(res.x0_estimate - x0) <= REL_ERR * np.linalg.norm(x0)
                assert res.attack_support == eta.support

        # beyond the bound: a random attack of weight ceil(delta/2), and an
        # attack cancelling part of a minimal trajectory so that the signal
        # looks like a smaller attack on the remaining part
        x0 = rng.standard_normal(sys.n)
        y = simulate(sys, x0, T)
        w = simulate(sys, report.witness_state, T).samples
        supp = sorted(report.witness_support)
        cancel = np.zeros_like(w)
        rows = [i - 1 for i in supp[: ceil(delta / 2)]]
        cancel[rows] = -w[rows]
        attacks = [
            random_attack(sys.N, T, ceil(delta / 2), seed=int(rng.integers(2**31))),
            AttackSignal(cancel),
        ]
        for eta in attacks:
            assert eta.weight >= ceil(delta / 2)
            try:
                res = correct(sys, inject(y, eta), delta=delta)
            except NoConsistentSupport:
                beyond += 1
                continue
            wrong_support = res.attack_support != eta.support
            wrong_state = np.linalg.norm(res.x0_estimate - x0) > REL_ERR * np.linalg.norm(x0)
            assert wrong_support and wrong_state
            beyond += 1
    assert systems >= 10
    assert beyond >= 10


def test_ac6_maximal_security(indexed):
    for item, report in indexed:
        assert is_maximally_secure(build_coding_matrix(item.sys)) == (report.delta == item.sys.N)


def test_ac7_behaviour_properties(suite):
    rng = np.random.default_rng(707)
    tol = 1e-9
    for item in suite:
        sys = item.sys
        x0 = rng.standard_normal(sys.n) + 1j * rng.standard_normal(sys.n)
        T = sys.n + 4
        y = simulate(sys, x0, T)
        shifted = simulate(sys, sys.A @ x0, T - 1)
        assert np.max(np.abs(y.samples[:, 1:] - shifted.samples)) <= tol
        rep = detect_H(sys, y)
        assert not rep.attacked and rep.max_syndrome_norm <= tol
        H = build_check_matrix(build_coding_matrix(sys)).H
        assert np.max(np.abs(H @ all_windows(y, sys.n))) <= tol * np.max(np.abs(y.samples))
    for l1, l2 in _pairs():
        sys, R = example_system(l1, l2), example_R(l1, l2)
        y = simulate(sys, rng.standard_normal(2), 6)
        assert np.max(np.abs(apply_shift_polynomial(R, y).samples)) <= tol * np.max(np.abs(y.samples))
        assert not detect_R(R, y).attacked


def test_ac8_cli_round_trip(tmp_path, capsys):
    ex1 = tmp_path / "ex1.json"
    ex1.write_text(json.dumps({"A": [[1, 0], [0, 2]], "C": [[1, 1], [1, -1]]}))
    s3 = tmp_path / "s3.json"
    s3.write_text(json.dumps({"A": [[2]], "C": [[1], [1], [1]]}))

    def run(*argv):
        return cli.main([str(a) for a in argv])

    for system, x0, delta in [(ex1, "1,1", 2), (s3, "1", 3)]:
        clean, attacked = tmp_path / "clean.csv", tmp_path / "attacked.csv"
        assert run("simulate", system, "--x0", x0, "--T", 5, "--out", clean,
                   "--attack-weight", 1, "--seed", 7, "--attacked-out", attacked) == 0
        assert run("detect", system, clean) == 0
        assert run("detect", system, attacked) == 1
        assert run("correct", system, clean) == 0
        expected = 0 if max_correctable(delta) >= 1 else 5
        capsys.readouterr()
        assert run("correct", system, attacked, "--json") == expected
        if expected == 0:
            out = json.loads(capsys.readouterr().out)
            sidecar = json.loads((tmp_path / "attacked.csv.json").read_text())
            assert out["support"] == sidecar["support"]
    assert run("simulate", ex1, "--x0", "1,1", "--T", 5, "--attack-weight", 3,
               "--attacked-out", tmp_path / "x.csv") == 2
    assert run("detect", ex1, tmp_path / "clean.csv", "--rule", "R") == 2
    # weight 2 on the three-sensor system is at the delta/2 bound
    y = io.read_trajectory(tmp_path / "clean.csv").samples.copy()
    y[0] += 1.0
    y[2] -= 2.0
    io.write_trajectory(tmp_path / "two.csv", Trajectory(y))
    assert run("correct", s3, tmp_path / "two.csv") == 5
