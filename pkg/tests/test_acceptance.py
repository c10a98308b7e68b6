"""Acceptance criteria 1-10.

Each test records one PASS/FAIL line, printed in the "acceptance criteria"
section at the end of the pytest run (and inline with ``-s``).
"""

import io
import math
import re
import time

import numpy as np
import pytest

from omgbh.blackhole import a_params, b_channel, c_params_from_a, in_black_hole_region, inverse_map
from omgbh.capacity import (
    capacity_report,
    coherent_info_at,
    coherent_info_limit,
    coherent_info_terms,
    g_entropy,
    pair_coherent_info,
)
from omgbh.channel import CapacityStatus, is_entanglement_breaking, on_degradable_boundary
from omgbh.cli import main, map_record, preset_points
from omgbh.fock import fock_coherent_info
from omgbh.symplectic import bogoliubov_coeffs, symplectic_form, symplectic_matrix

SEED = 12345


def report(acceptance, criterion, ok, detail):
    acceptance(criterion, ok, detail)
    print(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
    assert ok, detail


def test_01_symplectic_invariants(acceptance):
    rng = np.random.default_rng(SEED)
    Om = symplectic_form(3)
    start = time.perf_counter()
    worst_s = worst_n = 0.0
    for _ in range(1000):
        r = float(rng.uniform(0, 2 * math.pi))
        s = r + float(rng.uniform(0, 3))
        S = symplectic_matrix((r, s))
        worst_s = max(worst_s, float(np.max(np.abs(S @ Om @ S.T - Om))))
        a, b, g = bogoliubov_coeffs((r, s))
        worst_n = max(worst_n, abs(a * a - b * b + g * g - 1))
    elapsed = time.perf_counter() - start
    ok = worst_s <= 1e-10 and worst_n <= 1e-10 and elapsed < 5
    report(acceptance, "1 symplectic", ok, f"max|SOS^T-O|={worst_s:.1e} max|norm-1|={worst_n:.1e} t={elapsed:.2f}s")


def test_02_strip_geometry(acceptance):
    worst, inside, eb = 0.0, True, True
    for r in (0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2):
        for s in np.linspace(r, r + 4.0, 81):
            tau, y = a_params((r, float(s)))
            worst = max(worst, abs(y - tau - math.cos(2 * r)))
            inside &= in_black_hole_region(tau, y, tol=1e-12)
            if r == 0.0:
                eb &= is_entanglement_breaking(tau, y)
    ok = worst <= 1e-12 and inside and eb
    report(acceptance, "2 strip geometry", ok, f"max foliation err={worst:.1e} inside={inside} r=0 EB={eb}")


def test_03_limiting_cases(acceptance):
    t1, y1 = a_params((0.0, 1.0))
    rep1 = capacity_report(t1, y1)
    t2, y2 = a_params((math.pi / 2, math.pi))
    rep2 = capacity_report(t2, y2)
    err = abs(rep2.exact_value - math.log2(t2 / (t2 - 1)))
    ok = (
        abs(t1 - 1) <= 1e-12
        and abs(y1 - 2) <= 1e-12
        and is_entanglement_breaking(t1, y1)
        and rep1.status is CapacityStatus.Zero
        and abs(t2 - 4) <= 1e-12
        and abs(y2 - 3) <= 1e-12
        and on_degradable_boundary(t2, y2)
        and rep2.status is CapacityStatus.Exact
        and err <= 1e-12
        and abs(rep2.exact_value - math.log2(4 / 3)) <= 1e-12
    )
    detail = f"(1,2): {rep1.status.value}; (4,3): {rep2.status.value} Q={rep2.exact_value:.6f} err={err:.1e}"
    report(acceptance, "3 limiting cases", ok, detail)


def test_04_coherent_info_limit(acceptance):
    start = time.perf_counter()
    taus = np.linspace(0.55, 3.0, 21)[1:]
    worst = worst_k0 = 0.0
    for tau in taus:
        tau = float(tau)
        for frac in np.linspace(0.0, 1.0, 20):
            y = abs(1 - tau) + 2.0 * float(frac)
            worst = max(worst, abs(coherent_info_at(tau, y, 1e6) - coherent_info_limit(tau, y)))
        k0 = abs(coherent_info_limit(tau, abs(1 - tau)) - math.log2(tau / abs(1 - tau)))
        worst_k0 = max(worst_k0, k0)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-3 and worst_k0 <= 1e-12 and elapsed < 10
    report(acceptance, "4 coherent-info limit", ok, f"max err={worst:.1e} K=0 err={worst_k0:.1e} t={elapsed:.2f}s")


def test_05_tau_one_branch(acceptance):
    worst = 0.0
    for y in (0.25, 0.5, 1.0, 2.0, 4.0):
        lim = coherent_info_limit(1.0, y)
        for eps in (1e-4, -1e-4):
            worst = max(worst, abs(coherent_info_at(1 + eps, y, 1e7) - lim))
    const = coherent_info_limit(1.0, 1.0, "e") - (-1.0 - math.log(0.5))
    ok = worst <= 1e-2 and abs(const) <= 1e-12
    report(acceptance, "5 tau=1 branch", ok, f"max err={worst:.1e} natural-log constant err={abs(const):.1e}")


def test_06_two_to_one_inverse(acceptance):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    n = 0
    while n < 100:
        tau, y = float(rng.uniform(0.01, 3.0)), float(rng.uniform(0.0, 4.0))
        if not (abs(y - tau) < 0.99 and y > abs(tau - 1) + 0.01):
            continue
        for parity in ("even", "odd"):
            worst = max(worst, float(np.max(np.abs(np.subtract(a_params(inverse_map((tau, y), parity)), (tau, y))))))
        n += 1
    tc, yc = c_params_from_a((1.0, 0.0))
    end1 = max(abs(tc), abs(yc - 1))
    tc, yc = c_params_from_a((0.0, 1.0))
    end2 = max(abs(tc - 1), abs(yc))
    # the line y = 1 - tau maps to itself with reversed orientation in both presets
    reversed_ok = True
    for preset in ("fig5", "fig6"):
        for label, (t, y) in enumerate(preset_points(preset)):
            if abs(y - (1 - t)) > 1e-12:
                continue
            rec = map_record(t, y, label)
            reversed_ok &= abs(rec["tau_c_even"] - (1 - t)) <= 1e-9 and abs(rec["y_c_even"] - t) <= 1e-9
    ok = worst <= 1e-9 and end1 <= 1e-9 and end2 <= 1e-9 and reversed_ok
    detail = f"roundtrip err={worst:.1e} (1,0)->(0,1) err={end1:.1e} (0,1)->(1,0) err={end2:.1e} line reversed={reversed_ok}"
    report(acceptance, "6 two-to-one map", ok, detail)


def test_07_b_mode_conjugated(acceptance):
    rng = np.random.default_rng(SEED)
    max_tau_b = -math.inf
    for _ in range(500):
        r = float(rng.uniform(0, 3))
        s = r + float(rng.uniform(1e-3, 3))
        max_tau_b = max(max_tau_b, b_channel((r, s)).tau)
    degenerate = max(abs(b_channel((r, r)).tau) for r in np.linspace(0, 3, 31))
    ok = max_tau_b < 0 and degenerate <= 1e-10
    report(acceptance, "7 b-mode class D", ok, f"max tau_b(s>r)={max_tau_b:.2e} max|tau_b(s=r)|={degenerate:.1e}")


def test_08_complementary_positivity(acceptance):
    rng = np.random.default_rng(SEED)
    pts = []
    while len(pts) < 50:
        tau, y = float(rng.uniform(0.01, 3.0)), float(rng.uniform(0.0, 4.0))
        if tau <= y <= tau + 1 and y >= abs(tau - 1):
            pts.append((tau, y))
    max_a = min_bc = None
    strict, positive = 0, 0
    for tau, y in pts:
        ic_a, ic_bc = pair_coherent_info(inverse_map((tau, y)), 2.0)
        max_a = ic_a if max_a is None else max(max_a, ic_a)
        min_bc = ic_bc if min_bc is None else min(min_bc, ic_bc)
        if tau + 1e-6 < y < tau + 1 - 1e-6 and y > abs(tau - 1) + 1e-6:
            strict += 1
            positive += ic_bc > 0.01
    frac = positive / strict
    ok = max_a <= 1e-9 and min_bc >= -1e-9 and frac >= 0.9
    report(acceptance, "8 complementary positivity", ok, f"max ic_a={max_a:.2e} min ic_bc={min_bc:.2e} ic_bc>0.01 on {positive}/{strict}")


def test_09_fock_oracle(acceptance):
    out = io.StringIO()
    start = time.perf_counter()
    code = main(["verify", "--suite", "all", "--cutoff", "20", "--seed", "7"], out=out)
    elapsed = time.perf_counter() - start
    summary = out.getvalue().strip().splitlines()[-1]
    resid = {k: float(v) for k, v in re.findall(r"max_(\w+)=(\S+)", summary)}
    ok = (
        code == 0
        and max(resid["bogoliubov"], resid["channel"]) < 1e-6
        and resid["coherent_info"] < 1e-3
        and elapsed < 120
    )
    detail = (
        f"exit={code} cov={max(resid['bogoliubov'], resid['channel']):.1e} "
        f"coh={resid['coherent_info']:.1e} t={elapsed:.1f}s"
    )
    report(acceptance, "9 Fock oracle", ok, detail)


def test_10_worked_point(acceptance):
    t = coherent_info_terms(0.75, 0.25, 1.0)
    expected = float(g_entropy(0.75) - g_entropy(0.25))
    closed = coherent_info_at(0.75, 0.25, 1.0)
    # the beam splitter r = s = pi/3 realises (3/4, 1/4)
    fock = fock_coherent_info((math.pi / 3, math.pi / 3), 1.0, 20)
    inter = max(abs(t.N_prime - 0.75), abs(t.D - 1.25), abs(t.x_plus), abs(t.x_minus - 0.25))
    ok = inter <= 1e-12 and abs(closed - expected) <= 1e-12 and abs(fock - expected) <= 1e-3
    report(acceptance, "10 worked point", ok, f"I={closed:.6f} fock={fock:.6f} intermediates err={inter:.1e}")
