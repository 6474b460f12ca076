import numpy as np
import pytest

from secidx.errors import HorizonTooShort, InsufficientObservability, NoConsistentSupport
from secidx.guard import correct, detect_H, detect_R, max_correctable, reconstruct_state
from secidx.index import security_index
from secidx.model import AttackSignal, Trajectory, make_system
from secidx.simulate import inject, random_attack, simulate


def test_detect_H_examples(ex1):
    y = simulate(ex1, [1, 1], 5)
    assert not detect_H(ex1, y).attacked
    eta = np.zeros((2, 5))
    eta[1] = 1.0
    report = detect_H(ex1, inject(y, AttackSignal(eta)))
    assert report.attacked
    assert report.first_flagged_window == 0
    assert report.max_syndrome_norm > 1e-3
    with pytest.raises(HorizonTooShort):
        detect_H(ex1, Trajectory(np.zeros((2, 1))))


def test_detect_flag_matches_norm(ex1):
    y = simulate(ex1, [1, -1], 5)
    for seed in range(5):
        r = inject(y, random_attack(2, 5, 1, seed))
        rep = detect_H(ex1, r)
        assert rep.attacked == (rep.max_syndrome_norm > 1e-9)


def test_detect_late_attack_flags_later_window(ex1):
    y = simulate(ex1, [1, 1], 6).samples.copy()
    y[0, 5] += 1.0
    rep = detect_H(ex1, Trajectory(y))
    assert rep.attacked and rep.first_flagged_window == 4


def test_detect_R_agrees_with_detect_H(ex1, ex1_R):
    rng = np.random.default_rng(11)
    for trial in range(40):
        y = simulate(ex1, rng.standard_normal(2), 6)
        q = trial % 3
        r = inject(y, random_attack(2, 6, q, seed=trial))
        assert detect_R(ex1_R, r).attacked == detect_H(ex1, r).attacked == (q > 0)


def test_detect_R_examples(ex1, ex1_R):
    y = simulate(ex1, [1, 1], 5)
    assert not detect_R(ex1_R, y).attacked
    eta = np.zeros((2, 5))
    eta[1] = 1.0
    assert detect_R(ex1_R, inject(y, AttackSignal(eta))).attacked


def test_correct_three_sensor_example(three_sensor):
    y = simulate(three_sensor, [1], 4)
    eta = np.zeros((3, 4))
    eta[1] = 5.0
    res = correct(three_sensor, inject(y, AttackSignal(eta)))
    np.testing.assert_allclose(res.x0_estimate, [1], atol=1e-12)
    assert res.attack_support == {2}
    assert res.residual < 1e-12
    # {} and then every size-1 support, for the uniqueness check
    assert res.search_size == 4
    np.testing.assert_allclose(res.corrected.samples, y.samples, atol=1e-12)


def test_correct_clean(three_sensor):
    y = simulate(three_sensor, [-0.7], 5)
    res = correct(three_sensor, y)
    assert res.attack_support == frozenset()
    np.testing.assert_allclose(res.x0_estimate, [-0.7])


def test_correct_refuses_beyond_bound(ex1):
    y = simulate(ex1, [1, 1], 5)
    for seed in range(5):
        with pytest.raises(NoConsistentSupport):
            correct(ex1, inject(y, random_attack(2, 5, 1, seed)))


def test_max_correctable():
    assert [max_correctable(d) for d in range(1, 8)] == [0, 0, 1, 1, 2, 2, 3]


def test_reconstruct_state(ex1):
    r = simulate(ex1, [1, 1], 4)
    np.testing.assert_allclose(reconstruct_state(ex1, r, {1, 2}), [1, 1], atol=1e-12)
    np.testing.assert_allclose(reconstruct_state(ex1, r, {1}), [1, 1], atol=1e-12)
    with pytest.raises(InsufficientObservability):
        reconstruct_state(ex1, r, set())


def test_reconstruct_state_unobservable_subset():
    sys = make_system(np.diag([1.0, 2.0]), np.eye(2))
    with pytest.raises(InsufficientObservability):
        reconstruct_state(sys, simulate(sys, [1, 1], 4), {1})


def test_correct_recovers_on_suite(suite):
    rng = np.random.default_rng(21)
    checked = 0
    for item in suite:
        sys = item.sys
        delta = security_index(sys).delta
        if delta < 3:
            continue
        T = 2 * sys.n + 2
        x0 = rng.standard_normal(sys.n)
        q = max_correctable(delta)
        r = inject(simulate(sys, x0, T), random_attack(sys.N, T, q, seed=checked))
        res = correct(sys, r, delta=delta)
        assert np.linalg.norm(res.x0_estimate - x0) <= 1e-8 * np.linalg.norm(x0)
        checked += 1
    assert checked > 20
