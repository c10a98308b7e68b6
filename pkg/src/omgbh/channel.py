"""One-mode Gaussian channels ``V -> T V T^T + N`` and their classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CompletePositivityError

DEFAULT_TOL = 1e-10

_I2 = np.eye(2)
_SZ = np.diag([1.0, -1.0])
_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


class ChannelClass(enum.Enum):
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    B2Identity = "B2Identity"
    CLoss = "CLoss"
    CAmp = "CAmp"
    D = "D"


class CapacityStatus(enum.Enum):
    Zero = "Zero"
    Exact = "Exact"
    PositiveLowerBound = "PositiveLowerBound"
    Unknown = "Unknown"
    Infinite = "Infinite"


def matrix_rank(M: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    sv = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def check_covariance(V, tol: float = 1e-9) -> np.ndarray:
    """Validate a ``2m x 2m`` covariance matrix (hbar = 2) and return it as an array.

    Raises ``ValueError`` unless ``V`` is real, symmetric and satisfies
    ``V + i Omega >= 0`` within ``tol``.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError(f"covariance must be square with even size, got {V.shape}")
    scale = max(1.0, float(np.max(np.abs(V))))
    if np.max(np.abs(V - V.T)) > tol * scale:
        raise ValueError("covariance matrix is not symmetric")
    m = V.shape[0] // 2
    Om = np.kron(np.eye(m), _OMEGA)
    if np.min(np.linalg.eigvalsh(V + 1j * Om)) < -tol * scale:
        raise ValueError("covariance matrix violates the uncertainty relation V + i Omega >= 0")
    return V


def thermal_covariance(n_mean: float) -> np.ndarray:
    """One-mode thermal covariance ``(2 n + 1) I``."""
    if n_mean < 0:
        raise ValueError("mean photon number must be non-negative")
    return (2.0 * n_mean + 1.0) * _I2


def squeezed_covariance(zeta: float) -> np.ndarray:
    return np.diag([math.exp(-2.0 * zeta), math.exp(2.0 * zeta)])


@dataclass(frozen=True, eq=False)
class OneModeChannel:
    """Gaussian channel acting on one-mode covariances as ``T V T^T + N``.

    ``tau``, ``y`` and ``rank`` are derived from ``T`` and ``N`` on access.
    """

    T: np.ndarray
    N: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def tau(self) -> float:
        return float(np.linalg.det(self.T))

    @property
    def y(self) -> float:
        return math.sqrt(max(float(np.linalg.det(self.N)), 0.0))

    @property
    def rank(self) -> int:
        return min(matrix_rank(self.T, self.tol), matrix_rank(self.N, self.tol))

    @property
    def rank_T(self) -> int:
        return matrix_rank(self.T, self.tol)

    @property
    def rank_N(self) -> int:
        return matrix_rank(self.N, self.tol)

    def apply(self, V_in) -> np.ndarray:
        V_in = check_covariance(V_in)
        if V_in.shape != (2, 2):
            raise ValueError("one-mode channel expects a 2x2 covariance")
        return self.T @ V_in @ self.T.T + self.N

    def same_action(self, other: "OneModeChannel", atol: float = 1e-10) -> bool:
        """Equal maps on covariances, i.e. ``T`` equal up to overall sign and ``N`` equal."""
        T_close = np.allclose(self.T, other.T, atol=atol, rtol=0) or np.allclose(
            self.T, -other.T, atol=atol, rtol=0
        )
        return T_close and np.allclose(self.N, other.N, atol=atol, rtol=0)


def make_channel(T, N, tol: float = DEFAULT_TOL) -> OneModeChannel:
    """Build a channel after checking ``y >= |tau - 1|`` and ``N >= 0``.

    Raises:
        ValueError: ``T`` or ``N`` is not 2x2 or ``N`` is not symmetric.
        CompletePositivityError: the pair does not define a channel.
    """
    T = np.array(T, dtype=float)
    N = np.array(N, dtype=float)
    if T.shape != (2, 2) or N.shape != (2, 2):
        raise ValueError("T and N must be 2x2")
    if abs(N[0, 1] - N[1, 0]) > tol:
        raise ValueError("N is not symmetric")
    N = 0.5 * (N + N.T)
    T.setflags(write=False)
    N.setflags(write=False)
    ch = OneModeChannel(T, N, tol)
    tau, y = ch.tau, ch.y
    if np.min(np.linalg.eigvalsh(N)) < -tol:
        raise CompletePositivityError(f"N is not positive semidefinite (tau={tau}, y={y})", tau, y)
    if y < abs(tau - 1.0) - tol:
        raise CompletePositivityError(f"y={y} < |tau - 1|={abs(tau - 1.0)}", tau, y)
    return ch


def canonical_channel(cls: ChannelClass, tau: float = 1.0, n_mean: float = 0.0) -> OneModeChannel:
    """Canonical representative of an equivalence class.

    ``tau`` is used by the loss, amplifier and conjugate classes only;
    ``n_mean`` is the thermal photon number of the environment (or the added
    noise for B2).
    """
    if n_mean < 0:
        raise ValueError("n_mean must be non-negative")
    w = 2.0 * n_mean + 1.0
    if cls is ChannelClass.A1:
        return make_channel(np.zeros((2, 2)), w * _I2)
    if cls is ChannelClass.A2:
        return make_channel(np.diag([1.0, 0.0]), w * _I2)
    if cls is ChannelClass.B1:
        return make_channel(_I2, np.diag([0.0, 1.0]))
    if cls is ChannelClass.B2:
        if n_mean <= 0:
            raise ValueError("B2 needs positive added noise; use B2Identity for the identity")
        return make_channel(_I2, n_mean * _I2)
    if cls is ChannelClass.B2Identity:
        return make_channel(_I2, np.zeros((2, 2)))
    if cls is ChannelClass.CLoss:
        if not 0 < tau < 1:
            raise ValueError("lossy channel needs 0 < tau < 1")
        return make_channel(math.sqrt(tau) * _I2, (1 - tau) * w * _I2)
    if cls is ChannelClass.CAmp:
        if not tau > 1:
            raise ValueError("amplifier needs tau > 1")
        return make_channel(math.sqrt(tau) * _I2, (tau - 1) * w * _I2)
    if cls is ChannelClass.D:
        if not tau < 0:
            raise ValueError("conjugate channel needs tau < 0")
        return make_channel(math.sqrt(-tau) * _SZ, (1 - tau) * w * _I2)
    raise ValueError(f"unknown class {cls!r}")


def point_channel(tau: float, y: float, tol: float = DEFAULT_TOL) -> OneModeChannel:
    """Phase-insensitive channel realising the point ``(tau, y)``.

    ``T = sqrt(tau) I`` (``sqrt(-tau) sigma_z`` for ``tau < 0``), ``N = y I``.
    """
    if y < 0:
        raise ValueError("y must be non-negative")
    T = math.sqrt(tau) * _I2 if tau >= 0 else math.sqrt(-tau) * _SZ
    return make_channel(T, y * _I2, tol)


def classify(ch: OneModeChannel, tol: float = DEFAULT_TOL) -> ChannelClass:
    """Equivalence-class label of a completely positive channel.

    The ``tau = 1`` family is tested first, so a point within ``tol`` of both
    the B band and a neighbouring class is labelled B.
    """
    tau = ch.tau
    if abs(tau - 1.0) <= tol:
        rank_N = matrix_rank(ch.N, tol)
        if rank_N == 0:
            return ChannelClass.B2Identity
        return ChannelClass.B1 if rank_N == 1 else ChannelClass.B2
    if tau < -tol:
        return ChannelClass.D
    if abs(tau) <= tol:
        return ChannelClass.A1 if matrix_rank(ch.T, tol) == 0 else ChannelClass.A2
    return ChannelClass.CLoss if tau < 1.0 else ChannelClass.CAmp


def is_completely_positive(tau: float, y: float, tol: float = DEFAULT_TOL) -> bool:
    return y >= 0 and y >= abs(tau - 1.0) - tol


def _require_cp(tau: float, y: float, tol: float) -> None:
    if not is_completely_positive(tau, y, tol):
        raise CompletePositivityError(f"(tau, y)=({tau}, {y}) violates y >= |tau - 1|", tau, y)


def is_entanglement_breaking(tau: float, y: float) -> bool:
    """Gaussian entanglement-breaking criterion ``y >= |tau| + 1`` (boundary included)."""
    return y >= abs(tau) + 1.0


def on_degradable_boundary(tau: float, y: float, tol: float = DEFAULT_TOL) -> bool:
    """Points on ``y = tau - 1`` (``tau >= 1``) or ``y = 1 - tau`` (``1/2 <= tau <= 1``)."""
    if tau >= 1.0 - tol and abs(y - (tau - 1.0)) <= tol:
        return True
    return 0.5 - tol <= tau <= 1.0 + tol and abs(y - (1.0 - tau)) <= tol


def capacity_region(tau: float, y: float, tol: float = DEFAULT_TOL, base=2) -> CapacityStatus:
    """Quantum-capacity status of the phase-insensitive channel at ``(tau, y)``.

    Order of tests: noiseless identity, the zero-capacity region ``y >= tau``
    (ties go to Zero), the degradable boundary, then the sign of the
    infinite-power coherent information.  ``(1/2, 1/2)`` is both degradable and
    antidegradable and reports Zero.
    """
    from .capacity import coherent_info_limit

    _require_cp(tau, y, tol)
    if abs(tau - 1.0) <= tol and y <= tol:
        return CapacityStatus.Infinite
    if y >= tau - tol:
        return CapacityStatus.Zero
    if on_degradable_boundary(tau, y, tol):
        return CapacityStatus.Exact
    lim = coherent_info_limit(tau, y, base, tol=tol)
    return CapacityStatus.PositiveLowerBound if lim > 0 else CapacityStatus.Unknown
