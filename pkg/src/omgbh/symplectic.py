"""Symplectic matrices of the three-mode black hole isometry.

The isometry ``e^X`` with ``X = r*kappa (a^dag b^dag - a b) + s (a^dag c - a c^dag)``
acts linearly on the column ``(a, b^dag, c)``.  The generator of that action is

    G = [[0, -rk, -s], [-rk, 0, 0], [s, 0, 0]],   rk = sqrt(s^2 - r^2)

and ``G^3 = -r^2 G``, so ``L = exp(G) = I + sinc(r) G + h(r) G^2`` with
``h(r) = (1 - cos r) / r^2``.  Everything below is written in terms of ``sinc``
and ``h`` so that ``r = 0`` needs no special casing.

Quadratures use hbar = 2: ``q = a + a^dag``, ``p = -i (a - a^dag)``, vacuum
covariance equal to the identity.  Mode order in 6x6 matrices is (a, b, c).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CompletePositivityError

SYMPLECTIC_TOL = 1e-10

_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
_SIGMA = np.array([[1.0, 1.0j], [1.0, -1.0j]])


def sinc(x: float) -> float:
    """Unnormalised sinc, ``sin(x)/x`` with ``sinc(0) = 1``."""
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


def one_minus_cos_over_sq(x: float) -> float:
    """``(1 - cos x) / x^2``, equal to ``sinc(x/2)^2 / 2``."""
    return 0.5 * sinc(0.5 * x) ** 2


@dataclass(frozen=True)
class BlackHoleParams:
    """Isometry parameters ``(r, s)`` of one black hole interaction.

    ``r`` is the squeezing/rotation angle and ``s`` the beam-splitter strength.
    Complete positivity of the outgoing channel requires ``s >= r >= 0``.
    """

    r: float
    s: float

    def __post_init__(self):
        r, s = float(self.r), float(self.s)
        if not (math.isfinite(r) and math.isfinite(s)):
            raise ValueError(f"non-finite parameters r={r}, s={s}")
        if r < 0:
            raise ValueError(f"r must be non-negative, got {r}")
        if s < r:
            raise CompletePositivityError(f"s={s} < r={r} violates complete positivity")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    @property
    def r_kappa(self) -> float:
        """``r * kappa = sqrt(s^2 - r^2)``, finite for every admissible pair."""
        return math.sqrt(max(self.s * self.s - self.r * self.r, 0.0))

    @property
    def kappa(self) -> float:
        if self.r == 0.0:
            return math.inf if self.s > 0 else 0.0
        return self.r_kappa / self.r


def _as_params(p) -> BlackHoleParams:
    if isinstance(p, BlackHoleParams):
        return p
    r, s = p
    return BlackHoleParams(r, s)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form ``omega + ... + omega`` on ``n_modes`` modes."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes}")
    return np.kron(np.eye(int(n_modes)), _OMEGA)


def bogoliubov_coeffs(p, branch: int = 1) -> tuple[float, float, float]:
    """Coefficients ``(alpha, beta, gamma)`` of ``A = alpha a + beta b^dag + gamma c``.

    ``beta`` is reported on the requested sign ``branch`` (``+1`` by default).
    The physical sign produced by ``e^X`` is ``branch=-1``; it is the one that
    appears in :func:`build_L`.
    """
    p = _as_params(p)
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    sc = sinc(p.r)
    alpha = math.cos(p.r)
    beta = branch * p.r_kappa * sc
    gamma = -p.s * sc
    return alpha, beta, gamma


def ladder_generator(p) -> np.ndarray:
    """Matrix ``G`` with ``[X, v] = G v`` for ``v = (a, b^dag, c)``."""
    p = _as_params(p)
    rk, s = p.r_kappa, p.s
    return np.array([[0.0, -rk, -s], [-rk, 0.0, 0.0], [s, 0.0, 0.0]])


def build_L(p) -> np.ndarray:
    """3x3 map ``(a, b^dag, c) -> (A, B^dag, C)`` of the black hole isometry."""
    p = _as_params(p)
    G = ladder_generator(p)
    return np.eye(3) + sinc(p.r) * G + one_minus_cos_over_sq(p.r) * (G @ G)


def ladder_matrix(L: np.ndarray) -> np.ndarray:
    """Expand ``L`` to the 6x6 action on ``(a, a^dag, b, b^dag, c, c^dag)``.

    ``L`` acts on the column ``(a, b^dag, c)``; its conjugate copy acts on
    ``(a^dag, b, c^dag)``.  The result is ``L (+) conj(L)`` rearranged to
    the interleaved ordering, which is what the symplectic test is stated on.
    """
    L = np.asarray(L, dtype=float)
    # position of each column operator in the interleaved ordering
    plain = (0, 3, 4)  # a, b^dag, c
    conj = (1, 2, 5)  # a^dag, b, c^dag
    M = np.zeros((6, 6))
    for i in range(3):
        for j in range(3):
            M[plain[i], plain[j]] = L[i, j]
            M[conj[i], conj[j]] = L[i, j]
    return M


def embed_and_quadrature(L: np.ndarray) -> np.ndarray:
    """Quadrature-basis symplectic matrix ``S = Sigma^-1 (L (+) L) Sigma``.

    ``S`` acts on ``(q_a, p_a, q_b, p_b, q_c, p_c)`` in the Heisenberg picture,
    so covariances transform as ``V -> S V S^T``.
    """
    M = ladder_matrix(L)
    Sigma = np.kron(np.eye(3), _SIGMA)
    S = np.linalg.solve(Sigma, M @ Sigma)
    if np.max(np.abs(S.imag)) > 1e-12 * max(1.0, np.max(np.abs(S.real))):
        raise ValueError("quadrature transformation is not real")
    return np.ascontiguousarray(S.real)


def symplectic_matrix(p) -> np.ndarray:
    """Shorthand for ``embed_and_quadrature(build_L(p))``."""
    return embed_and_quadrature(build_L(p))


def is_symplectic(M: np.ndarray, tol: float = SYMPLECTIC_TOL, form: np.ndarray | None = None) -> bool:
    """True iff ``max|M Omega M^T - Omega| <= tol``.

    ``form`` overrides the standard block-diagonal ``Omega``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] % 2:
        raise ValueError(f"dimension {M.shape[0]} is odd")
    Om = symplectic_form(M.shape[0] // 2) if form is None else form
    return bool(np.max(np.abs(M @ Om @ M.T - Om)) <= tol)
