"""Black hole parameters ``(r, s)`` mapped to the a, b and c mode channels.

Mode a is the outgoing radiation seen outside, b the interior partner and c
the late-time signal that crosses the horizon.  The horizon modes a and b
start in vacuum and the code state enters on c.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    DEFAULT_TOL,
    OneModeChannel,
    check_covariance,
    is_completely_positive,
    make_channel,
)
from .errors import CompletePositivityError, NotInBlackHoleRegionError
from .symplectic import (
    BlackHoleParams,
    _as_params,
    is_symplectic,
    one_minus_cos_over_sq,
    sinc,
    symplectic_matrix,
)

_I2 = np.eye(2)


class ModeTag(enum.Enum):
    A = 0
    B = 1
    C = 2

    @property
    def slice(self) -> slice:
        return slice(2 * self.value, 2 * self.value + 2)


class Parity(enum.Enum):
    even = 0
    odd = 1


@dataclass(frozen=True)
class BlackHolePoint:
    """Coordinates ``(tau_a, y_a)`` of a Gaussian black hole channel."""

    tau_a: float
    y_a: float

    @property
    def cos2r(self) -> float:
        return self.y_a - self.tau_a


def a_params(p) -> tuple[float, float]:
    """``(tau_a, y_a) = (s^2 sinc^2 r, cos 2r + tau_a)``."""
    p = _as_params(p)
    tau = (p.s * sinc(p.r)) ** 2
    return tau, math.cos(2.0 * p.r) + tau


def c_params(p) -> tuple[float, float]:
    """``(tau_c, y_c)`` of the channel across the horizon."""
    p = _as_params(p)
    h = one_minus_cos_over_sq(p.r)
    s2 = p.s * p.s
    tau = (1.0 - h * s2) ** 2
    y = s2 * sinc(p.r) ** 2 + s2 * p.r_kappa**2 * h * h
    return tau, y


def a_channel(p) -> OneModeChannel:
    """Outgoing channel in canonical form ``(sqrt(tau_a) I, y_a I)``."""
    tau, y = a_params(p)
    return make_channel(math.sqrt(tau) * _I2, y * _I2)


def c_channel(p) -> OneModeChannel:
    """Channel into the black hole, ``T = C_cc I`` as produced by the isometry.

    ``C_cc = 1 - s^2 (1 - cos r) / r^2`` may be negative; only ``tau_c = C_cc^2``
    enters the classification.
    """
    p = _as_params(p)
    t = 1.0 - one_minus_cos_over_sq(p.r) * p.s * p.s
    _, y = c_params(p)
    return make_channel(t * _I2, y * _I2)


def extract_mode_channel(S, mode: ModeTag, tol: float = DEFAULT_TOL) -> OneModeChannel:
    """Reduce the 6x6 isometry to the channel from mode c to ``mode``.

    The two ancilla modes (a, b) are in vacuum, so each contributes
    ``S_block S_block^T`` to the noise.
    """
    S = np.asarray(S, dtype=float)
    if S.shape != (6, 6):
        raise ValueError(f"expected a 6x6 matrix, got {S.shape}")
    if not is_symplectic(S, tol=1e-8 * max(1.0, float(np.max(np.abs(S)))) ** 2):
        raise ValueError("S is not symplectic")
    mode = ModeTag(mode) if not isinstance(mode, ModeTag) else mode
    rows = S[mode.slice]
    T = rows[:, 4:6]
    Sa, Sb = rows[:, 0:2], rows[:, 2:4]
    N = Sa @ Sa.T + Sb @ Sb.T
    return make_channel(T, N, tol)


def b_channel(p) -> OneModeChannel:
    """Channel into the interior partner mode; conjugate class for ``s > r``."""
    return extract_mode_channel(symplectic_matrix(_as_params(p)), ModeTag.B)


def output_covariance(p, V_in) -> np.ndarray:
    """Full 6x6 output covariance for vacuum horizon modes and code ``V_in`` on c."""
    V_in = check_covariance(V_in)
    if V_in.shape != (2, 2):
        raise ValueError("code covariance must be 2x2")
    S = symplectic_matrix(_as_params(p))
    V = np.zeros((6, 6))
    V[:4, :4] = np.eye(4)
    V[4:, 4:] = V_in
    out = S @ V @ S.T
    return 0.5 * (out + out.T)


def bc_complement_covariance(p, V_in) -> np.ndarray:
    """4x4 covariance of the complementary (b, c) output."""
    return output_covariance(p, V_in)[2:, 2:].copy()


def in_black_hole_region(tau: float, y: float, tol: float = 0.0) -> bool:
    """Inclusive strip ``tau >= 0``, ``|y - tau| <= 1``, ``y >= |tau - 1|``."""
    return tau >= -tol and abs(y - tau) <= 1.0 + tol and y >= abs(tau - 1.0) - tol


def _as_point(pt) -> BlackHolePoint:
    return pt if isinstance(pt, BlackHolePoint) else BlackHolePoint(*pt)


def _parity(parity) -> Parity:
    if isinstance(parity, Parity):
        return parity
    if isinstance(parity, str):
        return Parity[parity]
    return Parity(int(parity) % 2)


def _check_point(pt: BlackHolePoint, tol: float) -> None:
    tau, y = pt.tau_a, pt.y_a
    if not is_completely_positive(tau, y, tol):
        raise CompletePositivityError(f"({tau}, {y}) violates y >= |tau - 1|", tau, y)
    if not in_black_hole_region(tau, y, tol):
        raise NotInBlackHoleRegionError(f"({tau}, {y}) lies outside the black hole strip")


def inverse_map(pt, parity="even", tol: float = 1e-12) -> BlackHoleParams | None:
    """Isometry parameters producing the a-channel ``pt``.

    ``r = acos(y_a - tau_a)/2 + k pi`` with ``k = 0`` (even) or ``k = 1`` (odd),
    ``s = r sqrt(tau_a) / |sin r|``.  Returns ``None`` when the odd branch lands
    on ``r = pi`` with ``tau_a > 0`` (no finite ``s``).
    """
    pt = _as_point(pt)
    _check_point(pt, tol)
    k = _parity(parity).value
    tau = max(pt.tau_a, 0.0)
    r = 0.5 * math.acos(min(1.0, max(-1.0, pt.cos2r))) + k * math.pi
    sin_r = abs(math.sin(r))
    if k == 0:
        s = math.sqrt(tau) / abs(sinc(r))
    elif sin_r < 1e-12:
        if tau > 0:
            return None
        s = r
    else:
        s = r * math.sqrt(tau) / sin_r
    # round-off can leave s a hair below r on the line y = 1 - tau
    if s < r and r - s <= 1e-9 * max(1.0, r):
        s = r
    return BlackHoleParams(r, s)


def c_params_from_a(pt, parity="even", tol: float = 1e-12) -> tuple[float, float] | None:
    """``(tau_c, y_c)`` as a function of the a-channel and the branch parity.

    With ``R = tau_a / sin^2 r`` one has ``R (cos r - 1) = -tau_a / (1 + cos r)``,
    which gives ``tau_c = (1 - tau_a/(1 + cos r))^2`` and
    ``y_c = tau_a^2/(1 + cos r)^2 + 2 tau_a cos r/(1 + cos r)``, finite at ``r = 0``.
    """
    pt = _as_point(pt)
    p = inverse_map(pt, parity, tol)
    if p is None:
        return None
    c = math.cos(p.r)
    if 1.0 + c < 1e-12:
        # r = pi with tau_a = 0: the a-channel carries nothing, w -> 0
        return c_params(p)
    w = pt.tau_a / (1.0 + c)
    return (1.0 - w) ** 2, w * w + 2.0 * c * w
