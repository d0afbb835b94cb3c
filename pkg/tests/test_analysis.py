import math

import numpy as np
import pytest

from lambdatunnel.analysis import (
    TwoLevelInit,
    asymptotic_right_trapping,
    dark_init_localization,
    dark_overlap,
    free_tunneling,
    general_init_localization,
    left_init_localization,
)
from lambdatunnel.dynamics import DEFAULT_EPS, integrate, integrate_until_settled
from lambdatunnel.errors import DetuningMismatch, GammaZero, NotNormalized, ZeroCoupling
from lambdatunnel.qsys import Amplitudes, SystemParams, initial_state

S = 1 / math.sqrt(2)


def random_init(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return TwoLevelInit(*v)


def settled_lr(params, init: TwoLevelInit, eps=DEFAULT_EPS):
    traj = integrate_until_settled(params, Amplitudes(init.c1, init.c2, 0), eps)
    return traj.p_left[-1], traj.p_right[-1]


def test_init_normalization():
    with pytest.raises(NotNormalized):
        TwoLevelInit(1, 0.01)


@pytest.mark.parametrize("delta", [0.3, 1.0, 4.0])
def test_free_tunneling_examples(delta):
    left = TwoLevelInit.left()
    assert free_tunneling(left, delta, math.pi / delta) == pytest.approx((0, 1), abs=1e-15)
    assert free_tunneling(left, delta, 2 * math.pi / delta) == pytest.approx((1, 0), abs=1e-15)
    for t in (0.0, 0.7, 13.0):
        assert free_tunneling(TwoLevelInit(1, 0), delta, t) == pytest.approx((0.5, 0.5), abs=1e-15)


def test_free_tunneling_closed_forms():
    for t in np.linspace(0, 20, 41):
        assert free_tunneling(TwoLevelInit.left(), 1.0, t) == pytest.approx(
            (math.cos(t / 2) ** 2, math.sin(t / 2) ** 2), abs=1e-15)
        assert free_tunneling(TwoLevelInit.right(), 1.0, t) == pytest.approx(
            (math.sin(t / 2) ** 2, math.cos(t / 2) ** 2), abs=1e-15)


def test_free_tunneling_matches_dynamics(backend, rng):
    delta = 0.9
    p = SystemParams(0, 0, 0, delta, 0)
    for _ in range(3):
        init = random_init(rng)
        traj = integrate(p, Amplitudes(init.c1, init.c2, 0), 30.0, sample_every=50)
        expected = np.array([free_tunneling(init, delta, t) for t in traj.times])
        assert np.max(np.abs(traj.p_left - expected[:, 0])) <= 1e-8
        assert np.max(np.abs(traj.p_right - expected[:, 1])) <= 1e-8


def test_right_trapping_examples():
    assert asymptotic_right_trapping(TwoLevelInit.right()).p_right_inf == pytest.approx(1, abs=1e-15)
    assert asymptotic_right_trapping(TwoLevelInit.left()).p_right_inf == pytest.approx(0, abs=1e-15)
    res = asymptotic_right_trapping(TwoLevelInit(1, 0))
    assert (res.p_left_inf, res.p_right_inf) == (0.0, 0.5)


def test_dark_init_examples():
    assert dark_init_localization(SystemParams(1.2, -1.2, 0, 0, 0)) == pytest.approx((0, 1), abs=1e-15)
    assert dark_init_localization(SystemParams(0.8, 0.8, 0, 0, 0)) == pytest.approx((1, 0), abs=1e-15)
    assert dark_init_localization(SystemParams(1, 0, 0, 0, 0)) == pytest.approx((0.5, 0.5), abs=1e-15)
    with pytest.raises(ZeroCoupling):
        dark_init_localization(SystemParams(0, 0, 0, 0, 0))


def test_dark_init_spot_case_by_integration(backend):
    p = SystemParams(1, 0, 0, 0, 0.5)
    traj = integrate(p, initial_state("dark", p), 40.0, sample_every=100)
    assert np.max(np.abs(traj.p_left - 0.5)) < 1e-12
    assert np.max(np.abs(traj.p_right - 0.5)) < 1e-12


def test_general_init_examples():
    p = SystemParams(0.6, -1.4, 0.2, 0.2, 0.3)
    u1, u2 = p.mixing()
    dark = general_init_localization(TwoLevelInit(u2, -u1), p)
    assert (dark.p_left_inf, dark.p_right_inf) == pytest.approx(dark_init_localization(p), abs=1e-15)
    bright = general_init_localization(TwoLevelInit(u1, u2), p)
    assert (bright.p_left_inf, bright.p_right_inf) == pytest.approx((0, 0), abs=1e-15)


def test_general_init_left_spot_value(backend):
    # |2/sqrt2 + 1/sqrt2|^2 * 3^2 / (2 * 25) = 0.81
    p = SystemParams(1, 2, 0, 0, 0.6)
    res = general_init_localization(TwoLevelInit.left(), p)
    assert res.p_left_inf == pytest.approx(0.81, abs=1e-15)
    numeric = settled_lr(p, TwoLevelInit.left())
    assert numeric[0] == pytest.approx(0.81, abs=1e-5)
    assert numeric[1] == pytest.approx(res.p_right_inf, abs=1e-5)


@pytest.mark.parametrize(
    "o1, o2, expected",
    [(1.0, -1.0, (0.0, 0.0)), (0.7, 0.7, (1.0, 0.0)), (1.0, 0.0, (0.25, 0.25))],
)
def test_left_init_examples(o1, o2, expected):
    res = left_init_localization(SystemParams(o1, o2, 0, 0, 0.5))
    assert (res.p_left_inf, res.p_right_inf) == pytest.approx(expected, abs=1e-15)


def test_left_init_spot_case_by_integration(backend):
    assert settled_lr(SystemParams(1, 0, 0, 0, 0.5), TwoLevelInit.left()) == pytest.approx(
        (0.25, 0.25), abs=1e-5)


def test_left_equals_general(rng):
    for _ in range(500):
        p = SystemParams(*rng.uniform(-5, 5, 2), 0.1, 0.1, rng.uniform(0.01, 2))
        a = left_init_localization(p)
        b = general_init_localization(TwoLevelInit.left(), p)
        assert abs(a.p_left_inf - b.p_left_inf) <= 1e-14
        assert abs(a.p_right_inf - b.p_right_inf) <= 1e-14


def test_survival_bound(rng):
    for _ in range(500):
        p = SystemParams(*rng.uniform(-5, 5, 2), 0.0, 0.0, 1.0)
        init = random_init(rng)
        res = general_init_localization(init, p)
        assert res.survival == pytest.approx(dark_overlap(init, p), abs=1e-14)
        assert 0 <= res.survival <= 1 + 1e-15


def test_preconditions():
    with pytest.raises(DetuningMismatch):
        general_init_localization(TwoLevelInit.left(), SystemParams(1, 1, 0, 0.1, 0.5))
    with pytest.raises(GammaZero):
        left_init_localization(SystemParams(1, 1, 0, 0, 0))
    with pytest.raises(ZeroCoupling):
        left_init_localization(SystemParams(0, 0, 0, 0, 1))


def test_oracle_match_random(backend, rng):
    eps = DEFAULT_EPS
    worst = 0.0
    for _ in range(50):
        while True:
            o1, o2 = rng.uniform(-2, 2, 2)
            if math.hypot(o1, o2) > 0.3:
                break
        om = math.hypot(o1, o2)
        d0 = rng.uniform(-0.5, 0.5)
        p = SystemParams(o1, o2, d0, d0, rng.uniform(0.2, 2.0) * om)
        init = random_init(rng)
        res = general_init_localization(init, p)
        num = settled_lr(p, init, eps)
        worst = max(worst, abs(num[0] - res.p_left_inf), abs(num[1] - res.p_right_inf))
    assert worst <= max(1e-5, 10 * eps)
