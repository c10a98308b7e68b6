"""Truncated Fock-space oracle for the black hole isometry.

The generator ``X = rk (a^dag b^dag - a b) + s (a^dag c - a c^dag)`` conserves
``n_a - n_b + n_c``, and so does its truncation to ``n <= cutoff`` per mode.
Operators are therefore stored block-diagonally, one dense block per charge
sector (at most ``(cutoff + 1)^2`` states), and exponentiated block by block.

Conventions: basis index ``(n_a * d + n_b) * d + n_c`` with ``d = cutoff + 1``;
``q = a + a^dag``, ``p = -i (a - a^dag)``; the state evolves as
``rho -> e^{-X} rho e^{X}`` so that ``<a>_out = <e^X a e^{-X}>_in``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .blackhole import bc_complement_covariance, extract_mode_channel, ModeTag
from .capacity import log_base
from .channel import check_covariance
from .errors import TruncationSizeError
from .symplectic import _as_params, bogoliubov_coeffs, symplectic_matrix

MAX_DIM = 10**6


def ladder(d: int) -> np.ndarray:
    """Truncated annihilation operator on ``d`` Fock levels."""
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1)


def quadratures(d: int) -> tuple[np.ndarray, np.ndarray]:
    a = ladder(d)
    return a + a.T, -1j * (a - a.T)


@dataclass(frozen=True, eq=False)
class TruncatedOp:
    """Block-diagonal real operator on a truncated three-mode Fock space.

    ``blocks`` maps a sector charge to ``(basis_indices, dense_block)``.
    """

    cutoff: int
    n_modes: int
    blocks: dict = field(repr=False)

    @property
    def d(self) -> int:
        return self.cutoff + 1

    @property
    def dim(self) -> int:
        return self.d**self.n_modes

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec)
        out = np.zeros_like(vec, dtype=np.result_type(vec, float))
        for idx, blk in self.blocks.values():
            out[idx] = blk @ vec[idx]
        return out

    def dagger(self) -> "TruncatedOp":
        return TruncatedOp(self.cutoff, self.n_modes, {q: (i, b.conj().T) for q, (i, b) in self.blocks.items()})

    def to_dense(self) -> np.ndarray:
        if self.dim > 20000:
            raise TruncationSizeError(f"dense form of a {self.dim}-dimensional operator refused")
        out = np.zeros((self.dim, self.dim))
        for idx, blk in self.blocks.values():
            out[np.ix_(idx, idx)] = blk
        return out

    def norm(self) -> float:
        """Spectral norm (max over blocks)."""
        return max((np.linalg.norm(b, 2) for _, b in self.blocks.values() if b.size), default=0.0)

    def antihermitian_defect(self) -> float:
        return max((float(np.max(np.abs(b + b.conj().T))) for _, b in self.blocks.values()), default=0.0)

    def unitarity_defect(self) -> float:
        return max(
            (float(np.max(np.abs(b.conj().T @ b - np.eye(len(i))))) for i, b in self.blocks.values()),
            default=0.0,
        )


def _sector_blocks(rows, cols, vals, charge, d3):
    blocks = {}
    order = np.argsort(charge, kind="stable")
    bounds = np.flatnonzero(np.diff(charge[order])) + 1
    for idx in np.split(order, bounds):
        blocks[int(charge[idx[0]])] = (idx, np.zeros((len(idx), len(idx))))
    pos = np.empty(d3, dtype=np.int64)
    for _, (idx, _) in blocks.items():
        pos[idx] = np.arange(len(idx))
    for r, c, v in zip(rows, cols, vals):
        q = int(charge[r])
        blocks[q][1][pos[r], pos[c]] += v
    return blocks


def build_generator(p, cutoff: int) -> TruncatedOp:
    """Generator ``X`` of the isometry, exactly antisymmetric by construction."""
    p = _as_params(p)
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    d = cutoff + 1
    if d**3 > MAX_DIM:
        raise TruncationSizeError(f"(cutoff + 1)^3 = {d**3} exceeds {MAX_DIM}")
    na, nb, nc = (x.ravel() for x in np.indices((d, d, d)))
    index = (na * d + nb) * d + nc
    charge = na - nb + nc

    rows, cols, vals = [], [], []
    # a^dag b^dag
    m = (na < cutoff) & (nb < cutoff)
    rows.append(((na[m] + 1) * d + nb[m] + 1) * d + nc[m])
    cols.append(index[m])
    vals.append(p.r_kappa * np.sqrt((na[m] + 1.0) * (nb[m] + 1.0)))
    # a^dag c
    m = (na < cutoff) & (nc > 0)
    rows.append(((na[m] + 1) * d + nb[m]) * d + nc[m] - 1)
    cols.append(index[m])
    vals.append(p.s * np.sqrt((na[m] + 1.0) * nc[m]))
    rows, cols, vals = (np.concatenate(x) for x in (rows, cols, vals))
    # X = M - M^T
    all_rows = np.concatenate([rows, cols])
    all_cols = np.concatenate([cols, rows])
    all_vals = np.concatenate([vals, -vals])
    keep = all_vals != 0
    blocks = _sector_blocks(all_rows[keep], all_cols[keep], all_vals[keep], charge, d**3)
    return TruncatedOp(cutoff, 3, blocks)


def exponentiate(X: TruncatedOp, sectors=None) -> TruncatedOp:
    """``e^X`` block by block (Pade scaling and squaring).

    ``sectors`` restricts the computation to the listed charges; other
    blocks are omitted and :meth:`TruncatedOp.apply` zeroes them.
    """
    blocks = {}
    for q, (idx, blk) in X.blocks.items():
        if sectors is not None and q not in sectors:
            continue
        blocks[q] = (idx, scipy.linalg.expm(blk) if blk.size else blk)
    return TruncatedOp(X.cutoff, X.n_modes, blocks)


def evolution(p, cutoff: int, sectors=None) -> TruncatedOp:
    """Schrodinger-picture evolution ``e^{-X}``."""
    p = _as_params(p)
    key = None if sectors is None else tuple(sorted(sectors))
    return _evolution_cached(p.r, p.s, int(cutoff), key)


@lru_cache(maxsize=16)
def _evolution_cached(r, s, cutoff, sectors):
    return exponentiate(build_generator((r, s), cutoff), sectors).dagger()


# ---------------------------------------------------------------- states


@dataclass
class FockState:
    """Mixture ``sum_k w_k |psi_k><psi_k|`` of real three-mode vectors."""

    cutoff: int
    weights: np.ndarray
    vectors: list

    @property
    def d(self) -> int:
        return self.cutoff + 1

    def evolve(self, U: TruncatedOp) -> "FockState":
        return FockState(self.cutoff, self.weights, [U.apply(v) for v in self.vectors])

    def reduced(self, keep: str) -> np.ndarray:
        """Reduced density matrix on ``"a"``, ``"b"``, ``"c"``, ``"bc"`` or ``"abc"``."""
        d = self.d
        if keep == "abc":
            return sum(w * np.outer(v, v) for w, v in zip(self.weights, self.vectors))
        if keep == "a":
            return sum(w * (v.reshape(d, d * d) @ v.reshape(d, d * d).T) for w, v in zip(self.weights, self.vectors))
        rho_bc = sum(w * (v.reshape(d, d * d).T @ v.reshape(d, d * d)) for w, v in zip(self.weights, self.vectors))
        if keep == "bc":
            return rho_bc
        t = rho_bc.reshape(d, d, d, d)
        if keep == "b":
            return np.einsum("ikjk->ij", t)
        if keep == "c":
            return np.einsum("kikj->ij", t)
        raise ValueError(f"unknown subsystem {keep!r}")

    def total_photons(self) -> float:
        d = self.d
        n = np.indices((d, d, d)).sum(axis=0).ravel()
        return float(sum(w * np.dot(n, v * v) for w, v in zip(self.weights, self.vectors)))


def _basis(d: int, na: int, nb: int, nc: int) -> np.ndarray:
    v = np.zeros(d**3)
    v[(na * d + nb) * d + nc] = 1.0
    return v


def thermal_weights(n_mean: float, cutoff: int) -> np.ndarray:
    k = np.arange(cutoff + 1)
    w = (n_mean / (n_mean + 1.0)) ** k if n_mean > 0 else (k == 0).astype(float)
    return w / w.sum()


def squeezed_vacuum(zeta: float, cutoff: int) -> np.ndarray:
    """Single-mode squeezed vacuum with q-variance ``e^{-2 zeta}``, renormalised."""
    a = ladder(cutoff + 1)
    phi = scipy.linalg.expm(0.5 * zeta * (a @ a - a.T @ a.T))[:, 0]
    return phi / np.linalg.norm(phi)


def code_state(V_in, cutoff: int) -> FockState:
    """Fock synthesis of a vacuum, thermal or squeezed-vacuum code on mode c."""
    V = check_covariance(V_in)
    if V.shape != (2, 2):
        raise ValueError("code covariance must be 2x2")
    d = cutoff + 1
    if abs(V[0, 1]) < 1e-12 and abs(V[0, 0] - V[1, 1]) < 1e-12:
        n_mean = (V[0, 0] - 1.0) / 2.0
        if n_mean < 1e-12:
            return FockState(cutoff, np.ones(1), [_basis(d, 0, 0, 0)])
        if n_mean > cutoff / 4:
            raise ValueError(f"thermal photon number {n_mean} too large for cutoff {cutoff}")
        w = thermal_weights(n_mean, cutoff)
        return FockState(cutoff, w, [_basis(d, 0, 0, k) for k in range(d)])
    if abs(V[0, 1]) < 1e-12 and abs(V[0, 0] * V[1, 1] - 1.0) < 1e-9:
        zeta = -0.5 * math.log(V[0, 0])
        if abs(zeta) > 0.5:
            raise ValueError(f"squeezing {zeta} exceeds 0.5")
        phi = squeezed_vacuum(zeta, cutoff)
        v = np.zeros(d**3)
        v[:d] = phi  # n_a = n_b = 0 occupies the first d entries
        return FockState(cutoff, np.ones(1), [v])
    raise ValueError("only vacuum, thermal and diagonal squeezed-vacuum codes are supported")


def _sectors_of(state: FockState) -> set:
    d = state.d
    na, nb, nc = (x.ravel() for x in np.indices((d, d, d)))
    charge = na - nb + nc
    out = set()
    for v in state.vectors:
        out.update(np.unique(charge[np.abs(v) > 0]).tolist())
    return out


# ---------------------------------------------------------------- moments


def _expect(rho_t: np.ndarray, factors) -> complex:
    """``tr(rho (F_0 (x) F_1 (x) ...))`` for ``rho`` reshaped to ``(d,)*2m``."""
    m = len(factors)
    letters = "abcdefgh"
    rows, cols = letters[:m], letters[m : 2 * m]
    spec = f"{rows}{cols}," + ",".join(f"{cols[k]}{rows[k]}" for k in range(m)) + "->"
    return np.einsum(spec, rho_t, *factors, optimize=True)


def covariance_from_rho(rho: np.ndarray, d: int) -> np.ndarray:
    """Covariance ``V_ij = <{dx_i, dx_j}>/2`` of an m-mode reduced state.

    ``rho`` is padded with one empty Fock level per mode first, so that
    ``a a^dag`` is exact on the top level of the original truncation.
    """
    m = int(round(math.log(rho.shape[0], d)))
    padded = np.zeros((d + 1,) * (2 * m), dtype=complex)
    padded[(slice(0, d),) * (2 * m)] = rho.reshape((d,) * (2 * m))
    d += 1
    q, p = quadratures(d)
    eye = np.eye(d)
    single = [(k, op) for k in range(m) for op in (q, p)]

    def factors(*pairs):
        f = [eye] * m
        for k, op in pairs:
            f[k] = op if f[k] is eye else f[k] @ op
        return f

    means = np.array([_expect(padded, factors(x)).real for x in single])
    V = np.empty((2 * m, 2 * m))
    for i, xi in enumerate(single):
        for j in range(i, 2 * m):
            xj = single[j]
            sym = _expect(padded, factors(xi, xj)) + _expect(padded, factors(xj, xi))
            V[i, j] = V[j, i] = 0.5 * sym.real - means[i] * means[j]
    return V


def von_neumann_entropy(rho: np.ndarray, base=2) -> float:
    ev = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    ev = ev[ev > 1e-15]
    return float(-np.sum(ev * np.log(ev)) / log_base(base))


def photon_number(rho: np.ndarray) -> float:
    return float(np.dot(np.arange(rho.shape[0]), np.diag(rho).real))


# ---------------------------------------------------------------- reports


@dataclass
class VerificationReport:
    name: str
    passed: bool
    residual: float
    tol: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{status} {self.name} residual={self.residual:.3e} tol={self.tol:.0e} {extra}".rstrip()


def verify_bogoliubov(p, cutoff: int, tol: float = 1e-6) -> VerificationReport:
    """Compare ``e^X a e^{-X}`` with ``alpha a + beta b^dag + gamma c``.

    Matrix elements are taken between Fock states with at most two photons in
    total.  The fitted coefficients are read off ``<000|A|100>``,
    ``<010|A|000>`` and ``<000|A|001>``.
    """
    p = _as_params(p)
    d = cutoff + 1
    low = [(i, j, k) for i in range(3) for j in range(3) for k in range(3) if i + j + k <= 2]
    low = [t for t in low if max(t) <= cutoff]
    idx = {t: (t[0] * d + t[1]) * d + t[2] for t in low}
    charges = {t[0] - t[1] + t[2] for t in low}
    # v_n = e^{-X} |n>, so <m| e^X a e^{-X} |n> = v_m^T a v_n
    Uinv = evolution(p, cutoff, sectors=charges)
    vecs = {t: Uinv.apply(_basis(d, *t)) for t in low}
    a = ladder(d)

    def apply_a(v):
        return np.tensordot(a, v.reshape(d, d, d), axes=(1, 0)).ravel()

    alpha, beta, gamma = bogoliubov_coeffs(p, branch=-1)
    a_vecs = {t: apply_a(v) for t, v in vecs.items()}
    residual = 0.0
    for m in low:
        for n in low:
            got = float(vecs[m] @ a_vecs[n])
            exp = 0.0
            na, nb, nc = n
            if (na - 1, nb, nc) == m:
                exp += alpha * math.sqrt(na)
            if (na, nb + 1, nc) == m:
                exp += beta * math.sqrt(nb + 1)
            if (na, nb, nc - 1) == m:
                exp += gamma * math.sqrt(nc)
            residual = max(residual, abs(got - exp))
    fitted = (
        float(vecs[(0, 0, 0)] @ a_vecs[(1, 0, 0)]),
        float(vecs[(0, 1, 0)] @ a_vecs[(0, 0, 0)]),
        float(vecs[(0, 0, 0)] @ a_vecs[(0, 0, 1)]),
    )
    details = {
        "r": p.r,
        "s": p.s,
        "alpha": fitted[0],
        "beta": fitted[1],
        "gamma": fitted[2],
    }
    return VerificationReport("bogoliubov", residual <= tol, residual, tol, details)


def mode_covariances(p, V_in, cutoff: int):
    """Fock-space input covariance and output blocks ``(V_c_in, {a, b, c, bc})``."""
    state = code_state(V_in, cutoff)
    d = state.d
    V_c_in = covariance_from_rho(state.reduced("c"), d)
    U = evolution(p, cutoff, sectors=_sectors_of(state))
    out = state.evolve(U)
    blocks = {k: covariance_from_rho(out.reduced(k), d) for k in ("a", "b", "c")}
    blocks["bc"] = covariance_from_rho(out.reduced("bc"), d)
    return V_c_in, blocks, state, out


def verify_channel_action(p, V_in, cutoff: int, tol: float = 1e-6) -> VerificationReport:
    """Evolve the code in Fock space and compare every output covariance block.

    Expected values use the covariance of the synthesised (truncated) input,
    so renormalisation of the input does not count as a discrepancy.
    """
    p = _as_params(p)
    V_c_in, blocks, _, _ = mode_covariances(p, V_in, cutoff)
    S = symplectic_matrix(p)
    dev = {}
    for mode, key in ((ModeTag.A, "a"), (ModeTag.B, "b"), (ModeTag.C, "c")):
        ch = extract_mode_channel(S, mode)
        expected = ch.T @ V_c_in @ ch.T.T + ch.N
        dev[key] = float(np.max(np.abs(blocks[key] - expected)))
    dev["bc"] = float(np.max(np.abs(blocks["bc"] - bc_complement_covariance(p, V_c_in))))
    residual = max(dev.values())
    details = {"r": p.r, "s": p.s, **{f"dev_{k}": f"{v:.2e}" for k, v in dev.items()}}
    return VerificationReport("channel", residual <= tol, residual, tol, details)


def fock_coherent_info(p, N: float, cutoff: int, base=2) -> float:
    """``S(rho_a) - S(rho_bc)`` for a thermal code of mean photon number ``N`` on c."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if N > cutoff / 6:
        raise ValueError(f"N={N} exceeds cutoff/6 for cutoff {cutoff}")
    p = _as_params(p)
    state = code_state((2.0 * N + 1.0) * np.eye(2), cutoff)
    out = state.evolve(evolution(p, cutoff, sectors=_sectors_of(state)))
    return von_neumann_entropy(out.reduced("a"), base) - von_neumann_entropy(out.reduced("bc"), base)


# ---------------------------------------------------------------- suites

SUITES = ("bogoliubov", "channel", "entropy")
COV_TOL = 1e-6
ENTROPY_TOL = 1e-4
COH_TOL = 1e-3


def draw_params(rng: np.random.Generator, n: int) -> list:
    """Seeded ``(r, s)`` draws with small generator norm: ``r < 0.3``, ``s - r < 0.3``."""
    out = []
    for _ in range(n):
        r = float(rng.uniform(0.0, 0.3))
        out.append((r, r + float(rng.uniform(0.0, 0.3))))
    return out


def _guarded(name, fn, tol, details) -> VerificationReport:
    try:
        return fn()
    except (ValueError, ArithmeticError) as exc:
        return VerificationReport(name, False, math.inf, tol, {**details, "error": str(exc)})


def _entropy_checks(p, cutoff: int, N: float) -> list:
    from .blackhole import a_params, output_covariance
    from .capacity import coherent_info_at, gaussian_entropy

    p = _as_params(p)
    tag = {"r": p.r, "s": p.s, "N": N}

    def marginal():
        V_c_in, blocks, _, out = mode_covariances(p, (2 * N + 1) * np.eye(2), cutoff)
        expected = gaussian_entropy(output_covariance(p, V_c_in)[:2, :2])
        res = abs(von_neumann_entropy(out.reduced("a")) - expected)
        return VerificationReport("entropy_a", res <= ENTROPY_TOL, res, ENTROPY_TOL, tag)

    def coherent():
        tau, y = a_params(p)
        res = abs(fock_coherent_info(p, N, cutoff) - coherent_info_at(tau, y, N))
        return VerificationReport("coherent_info", res <= COH_TOL, res, COH_TOL, tag)

    return [
        _guarded("entropy_a", marginal, ENTROPY_TOL, tag),
        _guarded("coherent_info", coherent, COH_TOL, tag),
    ]


def run_suite(suite: str, cutoff: int = 20, seed: int = 7, n_draws: int = 8) -> list:
    """Run one oracle suite (or ``"all"``) and return the individual reports."""
    if suite == "all":
        return [rep for name in SUITES for rep in run_suite(name, cutoff, seed, n_draws)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    rng = np.random.default_rng(seed)
    points = [(0.0, 0.0)] + draw_params(rng, n_draws)
    reports = []
    if suite == "bogoliubov":
        for p in points + [(0.1, 0.12)]:
            tag = {"r": p[0], "s": p[1]}
            reports.append(_guarded("bogoliubov", lambda: verify_bogoliubov(p, cutoff, COV_TOL), COV_TOL, tag))
    elif suite == "channel":
        codes = {
            "vacuum": np.eye(2),
            "thermal1": 3.0 * np.eye(2),
            "squeezed0.3": np.diag([math.exp(-0.6), math.exp(0.6)]),
        }
        for p in points:
            for label, V in codes.items():
                tag = {"r": p[0], "s": p[1], "code": label}
                rep = _guarded("channel", lambda: verify_channel_action(p, V, cutoff, COV_TOL), COV_TOL, tag)
                rep.details["code"] = label
                reports.append(rep)
    else:
        for p in points[1:6]:
            for N in (0.5, 1.0):
                reports.extend(_entropy_checks(p, cutoff, N))
        # beam splitter realising (tau, y) = (3/4, 1/4)
        bs = (math.pi / 3, math.pi / 3)
        reports.extend(_entropy_checks(bs, cutoff, 1.0))
    return reports
