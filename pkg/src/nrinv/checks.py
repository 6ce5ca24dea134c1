"""Invariant suite behind ``nrinv selftest``.

Each check returns (name, passed, detail). Randomized checks draw from a
generator seeded by the caller, so a fixed seed gives a fixed report.
"""

from __future__ import annotations

import random
from typing import Callable

from .families import (ChainSpec, TorusCableSpec, TorusKnot, chain_eval, chain_expr,
                       knot_P, torus_cable_eval, trefoil5_closed_form)
from .qarith import QParams
from .skein import evaluate, sixj, sixj_zero
from .surgery import lens_sum, nr0_knot_surgery, nr0_symmetric_knot, signature

Check = Callable[[random.Random], tuple[bool, str]]


def _rand_color(rng: random.Random) -> complex:
    return complex(rng.uniform(-2, 2) + 0.01, rng.uniform(-0.3, 0.3))


def check_delta(rng):
    worst = max(abs(QParams(r).delta(s) - QParams(r).gauss_delta(s))
                for r in (2, 3, 5, 6, 7, 9, 10, 11, 13) for s in (1, -1))
    return worst < 1e-9, f"max |closed - sum| = {worst:.2e}"


def check_mdim_inverse(rng):
    worst = 0.0
    for r in range(2, 10):
        p = QParams(r)
        for _ in range(10):
            b = _rand_color(rng)
            worst = max(worst, abs(p.mdim(b) * p.inv_mdim_charsum(b) - 1))
    return worst < 1e-9, f"max |d(b) * charsum(b) - 1| = {worst:.2e}"


def check_sixj_zero(rng):
    worst = max(abs(sixj(QParams(r), 0, 0, 0, 0, 0, 0) - sixj_zero(QParams(r))) / sixj_zero(QParams(r))
                for r in (3, 5, 7, 9))
    return worst < 1e-9, f"max rel err = {worst:.2e}"


def check_chain_two_routes(rng):
    worst = 0.0
    for r in (3, 5, 6):
        p = QParams(r)
        n = rng.randint(1, 5)
        spec = ChainSpec(tuple(rng.randint(-3, 3) for _ in range(n)),
                         tuple(_rand_color(rng) for _ in range(n)),
                         tuple(rng.choice((1, -1)) for _ in range(n - 1)))
        a, b = chain_eval(p, spec), evaluate(p, chain_expr(spec))
        worst = max(worst, abs(a - b) / abs(a))
    return worst < 1e-9, f"max rel err = {worst:.2e}"


def check_chain_mirror(rng):
    p = QParams(3)
    worst = 0.0
    for _ in range(10):
        n = rng.randint(1, 4)
        spec = ChainSpec(tuple(rng.randint(-5, 5) for _ in range(n)),
                         tuple(_rand_color(rng) for _ in range(n)))
        worst = max(worst, abs(chain_eval(p, spec.mirror()) - chain_eval(p, spec).conjugate()))
    return worst < 1e-9, f"max err = {worst:.2e}"


def check_trefoil(rng):
    p = QParams(5)
    worst = 0.0
    for _ in range(10):
        a = _rand_color(rng)
        v = torus_cable_eval(p, TorusCableSpec(-2, 1, a))
        worst = max(worst, abs(v / trefoil5_closed_form(p, a) - 1))
    return worst < 1e-9, f"max rel err = {worst:.2e}"


def check_poincare(rng):
    p = QParams(5)
    K = TorusKnot(p, -2, 1)
    want = -(p.q ** 2 + 1) ** 2
    a, b = nr0_knot_surgery(K), nr0_symmetric_knot(K)
    err = max(abs(a - want), abs(b - want))
    return err < 1e-8, f"max err = {err:.2e}"


def check_doubleslide(rng):
    worst = 0.0
    for r in (3, 5, 7):
        p = QParams(r)
        K = TorusKnot(p, -2, 1)
        P = {k: knot_P(K, k) for k in p.hr}
        plus = sum(p.qpow(k) * P[k] for k in p.hr)
        minus = sum(p.qpow(-k) * P[k] for k in p.hr)
        worst = max(worst, abs(plus - minus) / abs(plus))
    return worst < 1e-8, f"max rel err = {worst:.2e}"


def check_lens(rng):
    p = QParams(3)
    a, b, c = lens_sum(p, [8, -8]), lens_sum(p, [4, 3, 2, -3]), lens_sum(p, [8, -7, 1])
    da, dc = a.by_index(), c.by_index()
    blow = max(abs(da[k] - dc[k]) for k in da)
    ok = abs(a.total - b.total) > 1e-6 and blow < 1e-6
    return ok, f"S(8,-8) = {a.total:.6g}, S(4,3,2,-3) = {b.total:.6g}, blow-down err {blow:.2e}"


def check_signature(rng):
    import numpy as np
    bad = 0
    for _ in range(30):
        n = rng.randint(1, 6)
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = rng.randint(-9, 9)
        ev = np.linalg.eigvalsh(np.array(m, dtype=float))
        if signature(m) != (int((ev > 1e-9).sum()), int((ev < -1e-9).sum())):
            bad += 1
    return bad == 0, f"{bad} mismatches in 30 matrices"


CHECKS: dict[str, Check] = {
    "delta": check_delta,
    "mdim_inverse": check_mdim_inverse,
    "sixj_zero": check_sixj_zero,
    "chain_two_routes": check_chain_two_routes,
    "chain_mirror": check_chain_mirror,
    "trefoil": check_trefoil,
    "poincare": check_poincare,
    "doubleslide": check_doubleslide,
    "lens": check_lens,
    "signature": check_signature,
}


def run_all(seed: int = 0) -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS.items():
        rng = random.Random(f"{seed}:{name}")
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, detail))
    return out
