"""One test per acceptance criterion; each prints a single PASS/FAIL line.

The lines are collected in ``conftest.ACCEPTANCE_LINES`` and repeated in the
terminal summary, so ``pytest -v`` ends with the full verdict table.
"""
import io
import json
import time
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

from deltahomog.cli import main
from deltahomog.config import OracleBudget
from deltahomog.embedding import embed_b_table
from deltahomog.lie import check_orthogonal
from deltahomog.metric import MetricParams, geodesic_completion, is_geodesic_vector, u_map
from deltahomog.oracle import is_delta_vector_numeric
from deltahomog.so5 import (P1_BASIS, P2_BASIS, analytic_spectrum, build_so5_u2, candidate_W, pinch_constant,
                            sim_inequality, spectral_signature, verify_delta_vector_spectral)
from deltahomog.structure import jacobi_defects
from conftest import ACCEPTANCE_LINES, b2_split, b2_vec, table


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def nonzero_uniform(rng, size, lo=-3.0, hi=3.0):
    out = rng.uniform(lo, hi, size)
    while np.any(out == 0.0):
        out[out == 0.0] = rng.uniform(lo, hi, int(np.sum(out == 0.0)))
    return out


def test_criterion_1_phase_table():
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code = main(["phase", "0.8", "2.4", "17"])
    elapsed = time.perf_counter() - t0
    rows = json.loads(buf.getvalue())
    wrong = [r["ratio"] for r in rows if r["verdict"] is not (1.0 <= r["ratio"] <= 2.0)]
    interior = [r for r in rows if 1.0 < r["ratio"] < 2.0]
    exterior = [r for r in rows if not 1.0 <= r["ratio"] <= 2.0]
    agree = all(r["method"] == "spectral" for r in interior) and \
        all(r["method"] == "param_range+oracle" and r["witness"] is not None for r in exterior)
    ok = code == 0 and len(rows) == 17 and not wrong and agree and elapsed < 60.0
    record(1, "phase 0.8 2.4 17", ok,
           f"{len(rows)} rows, mismatches {wrong}, spectral/oracle agree {agree}, {elapsed:.1f} s")


def test_criterion_2_spectral_formulas():
    rng = np.random.default_rng(2)
    worst = 0.0
    for ratio in (1.2, 1.5, 1.8):
        params = MetricParams(1.0, ratio)
        for b, c in zip(nonzero_uniform(rng, 100), nonzero_uniform(rng, 100)):
            got = np.array(spectral_signature(candidate_W(b, c, params)).eigenvalues)
            worst = max(worst, float(np.max(np.abs(got - np.array(analytic_spectrum(b, c, params))))))
    record(2, "spectrum of -W^2", worst <= 1e-9, f"300 vectors, max abs deviation {worst:.2e}")


def test_criterion_3_sim_inequality_grid():
    bs = [s * k / 4 for k in range(1, 17) for s in (1, -1)]
    cs = [0.0] + bs
    x2s = [k * 0.05 for k in range(1, 40)]
    violations = [(b, c, x2) for b in bs for c in cs for x2 in x2s if not sim_inequality(b, c, 1.0, x2)]
    total = len(bs) * len(cs) * len(x2s)
    record(3, "strict inequality grid", not violations, f"{total} points, {len(violations)} violations")


CASES_4 = {("A", 1): 2, ("A", 2): 6, ("B", 2): 8, ("C", 2): 8, ("D", 3): 12, ("G2", 2): 12, ("B", 3): 18,
           ("F4", 4): 48}


def test_criterion_4_bracket_tables():
    problems = []
    for (family, rank), count in CASES_4.items():
        t = table(family, rank)
        if len(t.root_system) != count:
            problems.append(f"{family}{rank} has {len(t.root_system)} roots")
        if jacobi_defects(t):
            problems.append(f"{family}{rank} Jacobi")
        g = t.gram()
        for a in t.root_system.positive:
            w = Fraction(4) / a.norm2()
            if g[t.u(a)][t.u(a)] != w or g[t.v(a)][t.v(a)] != w:
                problems.append(f"{family}{rank} length of {a}")
    record(4, "exact bracket tables", not problems,
           f"{len(CASES_4)} tables checked" + (f", problems {problems[:3]}" if problems else ""))


def test_criterion_5_b2_embedding():
    rep = embed_b_table(table("B", 2))
    ok = rep.bracket_deviation <= 1e-10 and rep.gram_deviation <= 1e-10
    record(5, "B2 table inside so(5)", ok,
           f"kappa={rep.scale}, bracket dev {rep.bracket_deviation:.1e}, gram dev {rep.gram_deviation:.1e}")


def test_criterion_6_t31_9n_boundary():
    from deltahomog.conditions import t31_9n_check
    t = table("B", 2)
    X, Y = b2_vec(t, (0, -1)), b2_vec(t, (1, 1))
    got = {r: t31_9n_check(b2_split(), MetricParams(1.0, r), X, Y).holds for r in (1.0, 1.5, 2.0, 2.05, 2.5)}
    want = {1.0: True, 1.5: True, 2.0: True, 2.05: False, 2.5: False}
    record(6, "B2 second-order condition", got == want, f"holds {got}")


def test_criterion_7_oracle_soundness():
    rng = np.random.default_rng(7)
    space = build_so5_u2(MetricParams(1.0, 1.5))
    budget = OracleBudget(seed=0)
    worst, slowest, unconfirmed = -np.inf, 0.0, 0
    for b, c in zip(nonzero_uniform(rng, 20), nonzero_uniform(rng, 20)):
        if verify_delta_vector_spectral(space, b, c).verdict != "confirmed":
            unconfirmed += 1
        t0 = time.perf_counter()
        cert = is_delta_vector_numeric(space.split, space.params, candidate_W(b, c, space.params), budget)
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, cert.excess)
    out = build_so5_u2(MetricParams(1.0, 2.5))
    t0 = time.perf_counter()
    ref = is_delta_vector_numeric(out.split, out.params, candidate_W(1.0, 1.0, out.params), budget)
    slowest = max(slowest, time.perf_counter() - t0)
    witness_ok = ref.witness is not None and check_orthogonal(ref.witness) is not None
    ok = unconfirmed == 0 and worst <= 1e-6 and ref.refuted and ref.excess >= 1e-3 and witness_ok and slowest <= 5.0
    record(7, "orbit oracle", ok, f"best excess at 1.5 {worst:.1e}, excess at 2.5 {ref.excess:.4f}, "
                                  f"witness {witness_ok}, slowest {slowest:.2f} s")


def test_criterion_8_geodesic_machinery():
    rng = np.random.default_rng(8)
    worst_geo = worst_u = 0.0
    failures = 0
    for ratio in (1.3, 1.7):
        params = MetricParams(1.0, ratio)
        split = build_so5_u2(params).split
        for _ in range(50):
            V = rng.standard_normal(4) @ P1_BASIS + rng.standard_normal(2) @ P2_BASIS
            fam = geodesic_completion(split, params, V)
            if fam.empty:
                failures += 1
                continue
            Z = fam.point()
            worst_geo = max(worst_geo, is_geodesic_vector(split, params, V + Z).residual)
            dev = u_map(split, params, V, V) - split.algebra.bracket(V, Z)
            worst_u = max(worst_u, float(np.max(np.abs(dev))))
    ok = failures == 0 and worst_geo <= 1e-10 and worst_u <= 1e-10
    record(8, "geodesic completion", ok,
           f"100 vectors, {failures} empty, residual {worst_geo:.1e}, U(X,X)-[X,Z] {worst_u:.1e}")


def test_criterion_9_pinch_constant():
    a, b = pinch_constant(1, 2), pinch_constant(1, 1)
    record(9, "pinch constant", a == 0.25 and b == 0.0625, f"({a}, {b})")
