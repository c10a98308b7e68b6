"""Gaussian entropies, coherent information and capacity reports.

Entropic quantities take a ``base`` argument (2 or e; default 2, i.e. qubits).
Every value scales uniformly as ``1 / ln(base)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from .channel import (
    DEFAULT_TOL,
    CapacityStatus,
    _require_cp,
    capacity_region,
    check_covariance,
    is_entanglement_breaking,
    thermal_covariance,
)
from .errors import CompletePositivityError, InternalInconsistencyError, UnsupportedChannelError

# x_+/- below -CLAMP_TOL (relative to the photon-number scale) are an error
CLAMP_TOL = 1e-12


def log_base(base) -> float:
    """Natural log of a base given as a number or the string ``"e"``."""
    if isinstance(base, str):
        if base.strip().lower() == "e":
            return 1.0
        base = float(base)
    base = float(base)
    if not base > 1.0:
        raise ValueError(f"log base must exceed 1, got {base}")
    return math.log(base)


def g_entropy(x, base=2):
    """Entropy of a thermal state with mean photon number ``x``.

    ``g(x) = (1 + x) log(1 + x) - x log x`` with ``g(0) = 0``.  Accepts scalars
    or arrays.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("g_entropy needs x >= 0")
    val = (xlogy(1.0 + x, 1.0 + x) - xlogy(x, x)) / log_base(base)
    return float(val) if val.ndim == 0 else val


def k_noise(tau: float, y: float, tol: float = DEFAULT_TOL) -> float:
    """Added classical noise ``K = (y - |1 - tau|) / 2``."""
    _require_cp(tau, y, tol)
    return max(0.5 * (y - abs(1.0 - tau)), 0.0)


class CohInfoTerms(NamedTuple):
    K: float
    N_prime: float
    D: float
    x_plus: float
    x_minus: float


def _clamp(x: float, scale: float, name: str) -> float:
    if x >= 0:
        return x
    if x >= -CLAMP_TOL * max(1.0, scale):
        return 0.0
    raise InternalInconsistencyError(f"{name}={x} is negative")


def coherent_info_terms(tau: float, y: float, N: float, tol: float = DEFAULT_TOL) -> CohInfoTerms:
    """Intermediate quantities ``(K, N', D, x_+, x_-)`` at input power ``N``.

    ``x_+`` and ``x_-`` are evaluated in a cancellation-free form obtained by
    rationalising ``D - (N - N' + 1)`` and ``D - (N' - N + 1)``; this matters
    for ``N`` in the millions.
    """
    if tau <= 0:
        raise UnsupportedChannelError(f"coherent information needs tau > 0, got {tau}")
    if N < 0:
        raise ValueError("input power N must be non-negative")
    K = k_noise(tau, y, tol)
    # N' = tau N + c ; c differs between loss and amplifier branches
    c = K if tau < 1.0 else tau - 1.0 + K
    N_prime = tau * N + c
    # D^2 = (N + N' + 1)^2 - 4 tau N (N + 1), expanded to avoid cancelling N^2 terms
    D2 = (1.0 - tau) ** 2 * N * N + 2.0 * N * ((1.0 + tau) * (c + 1.0) - 2.0 * tau) + (c + 1.0) ** 2
    if D2 < 0:
        if D2 < -CLAMP_TOL * max(1.0, (N + N_prime + 1.0) ** 2):
            raise InternalInconsistencyError(f"D^2={D2} is negative")
        D2 = 0.0
    D = math.sqrt(D2)
    # x_+ = (D - (N - N' + 1))/2,  x_- = (D - (N' - N + 1))/2
    den_p = D + (N - N_prime + 1.0)
    den_m = D + (N_prime - N + 1.0)
    num_p = 2.0 * (N + 1.0) * (N_prime - tau * N)
    num_m = 2.0 * N * (N_prime + 1.0 - tau * (N + 1.0))
    x_plus = num_p / den_p if den_p > 0 else 0.5 * (D + N_prime - N - 1.0)
    x_minus = num_m / den_m if den_m > 0 else 0.5 * (D - N_prime + N - 1.0)
    scale = N + N_prime + 1.0
    x_plus = _clamp(x_plus, scale, "x_plus")
    x_minus = _clamp(x_minus, scale, "x_minus")
    return CohInfoTerms(K, N_prime, D, x_plus, x_minus)


def coherent_info_at(tau: float, y: float, N: float, base=2, tol: float = DEFAULT_TOL) -> float:
    """Coherent information of a thermal Gaussian code with mean photon number ``N``."""
    t = coherent_info_terms(tau, y, N, tol)
    return g_entropy(t.N_prime, base) - g_entropy(t.x_plus, base) - g_entropy(t.x_minus, base)


def coherent_info_limit(tau: float, y: float, base=2, tol: float = DEFAULT_TOL) -> float:
    """Infinite-power limit of :func:`coherent_info_at`.

    For ``tau != 1`` with ``u = K / |1 - tau|``::

        u log u - (1 + u) log(1 + u) + log(tau / |1 - tau|)

    which reduces to ``log(tau / |1 - tau|)`` at ``K = 0``.  At ``tau = 1`` the
    value is ``-1/ln(base) - log_base(K)``, or ``+inf`` for the identity.
    """
    if not tau > 0:
        raise UnsupportedChannelError(f"coherent information needs tau > 0, got {tau}")
    lb = log_base(base)
    K = k_noise(tau, y, tol)
    d = abs(1.0 - tau)
    if d <= tol:
        if K <= tol:
            return math.inf
        return -1.0 / lb - math.log(K) / lb
    u = K / d
    # u log u - (1 + u) log(1 + u) = -u log1p(1/u) - log1p(u)
    head = 0.0 if u == 0.0 else -u * math.log1p(1.0 / u) - math.log1p(u)
    return (head + math.log(tau) - math.log(d)) / lb


def optimize_coherent_info(
    tau: float, y: float, base=2, log10_bounds=(-3.0, 8.0), xtol: float = 1e-6
) -> tuple[float, float]:
    """Numerical supremum of :func:`coherent_info_at` over the input power.

    Bounded scalar search over ``log10 N``; the endpoint ``N = 0`` (value 0)
    and the upper bound are also compared.  Returns ``(N_best, value)``.
    Diagnostic only: capacity reports use the closed-form limit.
    """
    f = lambda t: -coherent_info_at(tau, y, 10.0**t, base)
    res = minimize_scalar(f, bounds=log10_bounds, method="bounded", options={"xatol": xtol})
    cands = [(10.0 ** res.x, -res.fun), (0.0, coherent_info_at(tau, y, 0.0, base))]
    hi = 10.0 ** log10_bounds[1]
    cands.append((hi, coherent_info_at(tau, y, hi, base)))
    return max(cands, key=lambda c: c[1])


@dataclass
class CapacityReport:
    tau: float
    y: float
    status: CapacityStatus
    coh_info_limit: float | None
    lower_bound: float
    exact_value: float | None = None
    K: float = 0.0
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "y": self.y,
            "status": self.status.value,
            "K": self.K,
            "coh_info_limit": self.coh_info_limit,
            "lower_bound": self.lower_bound,
            "exact_value": self.exact_value,
            "notes": list(self.notes),
        }


def capacity_report(tau: float, y: float, base=2, tol: float = DEFAULT_TOL) -> CapacityReport:
    """Quantum-capacity summary for the phase-insensitive channel at ``(tau, y)``."""
    status = capacity_region(tau, y, tol, base)
    K = k_noise(tau, y, tol)
    lim = coherent_info_limit(tau, y, base, tol) if tau > 0 else None
    notes = []
    if lim is None:
        notes.append("tau <= 0: coherent-information formula not applicable")
    elif abs(tau - 1.0) <= tol:
        notes.append("tau = 1 branch: -1/ln(base) - log K")
    elif K <= tol:
        notes.append("K = 0 branch: log(tau/|1 - tau|)")
    else:
        notes.append("general branch, infinite input power")

    exact = None
    if status is CapacityStatus.Zero:
        lower = 0.0
        exact = 0.0
        if is_entanglement_breaking(tau, y):
            notes.append("entanglement breaking")
        else:
            notes.append("antidegradable composition region y >= tau")
        if abs(y - tau) <= tol:
            notes.append("on the boundary y = tau; reported as zero capacity")
        if abs(tau - 0.5) <= tol and abs(y - 0.5) <= tol:
            notes.append("degradable and antidegradable")
    elif status is CapacityStatus.Infinite:
        lower = math.inf
        exact = math.inf
        notes.append("noiseless identity channel, capacity diverges")
    elif status is CapacityStatus.Exact:
        lower = max(0.0, lim)
        exact = lim
        notes.append("degradable: single-letter capacity equals coherent information")
    elif status is CapacityStatus.PositiveLowerBound:
        lower = lim
        notes.append("coherent information is a lower bound on the capacity")
    else:
        lower = 0.0
        notes.append("capacity unknown; coherent information does not exclude a positive value")
    return CapacityReport(tau, y, status, lim, lower, exact, K, notes)


def symplectic_eigenvalues(V, tol: float = 1e-9) -> np.ndarray:
    """Williamson spectrum ``nu_1 >= ... >= nu_m`` of a covariance matrix."""
    V = check_covariance(V, tol)
    m = V.shape[0] // 2
    Om = np.kron(np.eye(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ev = np.sort(np.abs(np.linalg.eigvals(Om @ V)))[::-1]
    # eigenvalues come in pairs +/- i nu
    return np.ascontiguousarray(ev[::2])


def gaussian_entropy(V, base=2, tol: float = 1e-9) -> float:
    """Von Neumann entropy of a zero-mean Gaussian state, ``sum_i g((nu_i - 1)/2)``."""
    nu = symplectic_eigenvalues(V, tol)
    if np.any(nu < 1.0 - tol):
        raise ValueError(f"symplectic eigenvalue below 1: {nu.min()}")
    n = np.maximum((nu - 1.0) / 2.0, 0.0)
    return float(np.sum(g_entropy(n, base)))


def pair_coherent_info(p, N: float, base=2) -> tuple[float, float]:
    """Coherent information of the a-channel and of its bc complement.

    A thermal code of mean photon number ``N`` enters mode c, the horizon
    modes start in vacuum.  Returns ``(H(a) - H(bc), H(bc) - H(a))``.
    """
    from .blackhole import output_covariance

    V = output_covariance(p, thermal_covariance(N))
    h_a = gaussian_entropy(V[:2, :2], base)
    h_bc = gaussian_entropy(V[2:, 2:], base)
    return h_a - h_bc, h_bc - h_a


__all__ = [
    "CapacityReport",
    "CohInfoTerms",
    "CompletePositivityError",
    "capacity_report",
    "coherent_info_at",
    "coherent_info_limit",
    "coherent_info_terms",
    "g_entropy",
    "gaussian_entropy",
    "k_noise",
    "log_base",
    "optimize_coherent_info",
    "pair_coherent_info",
    "symplectic_eigenvalues",
]
