import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from omgbh.channel import (
    CapacityStatus,
    ChannelClass,
    canonical_channel,
    capacity_region,
    check_covariance,
    classify,
    is_completely_positive,
    is_entanglement_breaking,
    make_channel,
    on_degradable_boundary,
    point_channel,
    squeezed_covariance,
    thermal_covariance,
)
from omgbh.errors import CompletePositivityError

I2 = np.eye(2)
SZ = np.diag([1.0, -1.0])


def test_pure_loss_example():
    ch = make_channel(math.sqrt(0.5) * I2, 0.5 * I2)
    assert ch.tau == pytest.approx(0.5)
    assert ch.y == pytest.approx(0.5)
    assert ch.rank == 2
    assert (ch.rank_T, ch.rank_N) == (2, 2)
    assert classify(ch) is ChannelClass.CLoss


def test_conjugate_example():
    ch = make_channel(SZ, 2 * I2)
    assert ch.tau == pytest.approx(-1.0)
    assert classify(ch) is ChannelClass.D


def test_make_channel_rejects_non_cp():
    with pytest.raises(CompletePositivityError):
        make_channel(math.sqrt(0.5) * I2, 0.1 * I2)
    with pytest.raises(CompletePositivityError):
        make_channel(I2, np.diag([1.0, -0.5]))


def test_make_channel_rejects_asymmetric_noise():
    with pytest.raises(ValueError):
        make_channel(I2, np.array([[1.0, 0.5], [0.0, 1.0]]))


@pytest.mark.parametrize(
    "cls, tau",
    [
        (ChannelClass.A1, 1.0),
        (ChannelClass.A2, 1.0),
        (ChannelClass.B1, 1.0),
        (ChannelClass.B2Identity, 1.0),
    ],
)
def test_classify_fixed_canonical(cls, tau):
    assert classify(canonical_channel(cls, tau)) is cls


def test_classify_roundtrip_random(rng):
    for _ in range(100):
        n = float(rng.uniform(0, 5))
        assert classify(canonical_channel(ChannelClass.A1, n_mean=n)) is ChannelClass.A1
        assert classify(canonical_channel(ChannelClass.A2, n_mean=n)) is ChannelClass.A2
        assert classify(canonical_channel(ChannelClass.B2, n_mean=n + 0.01)) is ChannelClass.B2
        tl, ta, td = rng.uniform(0.01, 0.99), rng.uniform(1.01, 5), -rng.uniform(0.01, 5)
        assert classify(canonical_channel(ChannelClass.CLoss, tl, n)) is ChannelClass.CLoss
        assert classify(canonical_channel(ChannelClass.CAmp, ta, n)) is ChannelClass.CAmp
        assert classify(canonical_channel(ChannelClass.D, td, n)) is ChannelClass.D


def test_canonical_channel_rejects_bad_tau():
    with pytest.raises(ValueError):
        canonical_channel(ChannelClass.CLoss, 1.5)
    with pytest.raises(ValueError):
        canonical_channel(ChannelClass.D, 0.5)
    with pytest.raises(ValueError):
        canonical_channel(ChannelClass.B2, n_mean=0.0)


def test_b_band_takes_precedence():
    ch = point_channel(1.0 + 1e-12, 0.3)
    assert classify(ch) is ChannelClass.B2


def _random_cp_channel(rng):
    T = rng.normal(size=(2, 2))
    A = rng.normal(size=(2, 2))
    N = A @ A.T + 1e-3 * np.eye(2)
    tau = np.linalg.det(T)
    need = abs(tau - 1.0)
    have = math.sqrt(np.linalg.det(N))
    if have < need:
        N *= need / have * (1 + rng.uniform(0, 0.5))
    return make_channel(T, N)


def _random_state(rng):
    nu = 1.0 + rng.exponential(1.0)
    z = rng.uniform(-1.0, 1.0)
    th = rng.uniform(0, math.pi)
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    return R @ np.diag([nu * math.exp(2 * z), nu * math.exp(-2 * z)]) @ R.T


def test_apply_preserves_uncertainty(rng):
    worst = math.inf
    for _ in range(10_000):
        ch = _random_cp_channel(rng)
        V = ch.apply(_random_state(rng))
        worst = min(worst, np.linalg.det(V) - 1.0)
        assert np.linalg.eigvalsh(V).min() > 0
    assert worst >= -1e-9


def test_apply_thermal_loss():
    ch = point_channel(0.25, 0.75)
    np.testing.assert_allclose(ch.apply(thermal_covariance(1.0)), (0.25 * 3 + 0.75) * I2)


def test_check_covariance():
    check_covariance(np.eye(2))
    check_covariance(squeezed_covariance(0.7))
    with pytest.raises(ValueError):
        check_covariance(0.5 * np.eye(2))


def test_same_action_ignores_global_sign():
    a = make_channel(-I2, 0.5 * I2)
    b = make_channel(I2, 0.5 * I2)
    assert a.same_action(b)
    assert not a.same_action(make_channel(I2, 0.6 * I2))


@pytest.mark.parametrize(
    "tau, y, expected",
    [
        (0.5, 0.5, CapacityStatus.Zero),
        (0.75, 0.25, CapacityStatus.Exact),
        (0.75, 0.6, CapacityStatus.Unknown),
        (1.0, 0.0, CapacityStatus.Infinite),
        (2.0, 1.0, CapacityStatus.Exact),
        (0.3, 0.9, CapacityStatus.Zero),
        (-1.0, 2.0, CapacityStatus.Zero),
        (4.0, 3.0, CapacityStatus.Exact),
    ],
)
def test_capacity_region_examples(tau, y, expected):
    assert capacity_region(tau, y) is expected


def test_capacity_region_positive_lower_bound():
    # u*log u - (1+u) log(1+u) + log(tau/(1-tau)) with u = K/(1-tau)
    tau, y = 0.9, 0.15
    K = (y - (1 - tau)) / 2
    u = K / (1 - tau)
    lim = u * math.log2(u) - (1 + u) * math.log2(1 + u) + math.log2(tau / (1 - tau))
    assert lim > 0
    assert capacity_region(tau, y) is CapacityStatus.PositiveLowerBound


def test_capacity_region_rejects_non_cp():
    with pytest.raises(CompletePositivityError):
        capacity_region(0.5, 0.1)


def test_degradable_boundary():
    assert on_degradable_boundary(0.75, 0.25)
    assert on_degradable_boundary(3.0, 2.0)
    assert not on_degradable_boundary(0.25, 0.75)
    assert not on_degradable_boundary(0.75, 0.3)


@given(st.floats(-5, 5), st.floats(0, 10))
def test_eb_implies_zero(tau, y):
    if is_completely_positive(tau, y) and is_entanglement_breaking(tau, y):
        assert capacity_region(tau, y) is CapacityStatus.Zero


@given(st.floats(1.001, 10), st.floats(0, 1))
def test_amplifier_boundary_is_exact(tau, frac):
    assert capacity_region(tau, tau - 1.0) is CapacityStatus.Exact


def test_eb_boundary_inclusive():
    assert is_entanglement_breaking(0.5, 1.5)
    assert not is_entanglement_breaking(0.5, 1.5 - 1e-9)
