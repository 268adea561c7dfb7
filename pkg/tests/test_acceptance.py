"""Acceptance criteria 1-10, one summary line each.

Every test records a PASS/FAIL line (shown in the terminal summary under
"acceptance criteria") before asserting, so a failing criterion still reports
what it measured.
"""
import math
import time
from dataclasses import replace

import numpy as np

from gkdv import analysis
from gkdv.adm import eval_partial_sum, initial_term, next_term, solve
from gkdv.analysis import build_dataset, cached_solve, reproduce_table, test_grid
from gkdv.cli import run
from gkdv.exact import exact_eval, fd_residual
from gkdv.hyperalgebra import HyperTerm, canonicalize, diff_x, evaluate
from gkdv.params import GkdvParams
from gkdv.surrogate import (Dataset, TrainConfig, init_model, load_model, loss_and_gradients,
                            model_to_text, mse, predict_grid, save_model, train)

from conftest import ACCEPTANCE_LINES, abs_eval, coeff_map

W_VALUES = (0.0, 0.5, 1.0)


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"{criterion:<4} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def fresh_tables(ids):
    cached_solve.cache_clear()
    t0 = time.perf_counter()
    results = [reproduce_table(i) for i in ids]
    return results, time.perf_counter() - t0


def describe(cells, limit=8):
    out = [f"T{c.table}(n={c.n_terms},x={c.x:g},tau={c.tau:g}) printed {c.printed} got {c.computed:.5g}"
           for c in cells[:limit]]
    return "; ".join(out) + (" ..." if len(cells) > limit else "")


def test_c1_table1():
    (res,), dt = fresh_tables([1])
    cells = [c for c in res.cells if c.quantity == "adm"]
    bad = [c for c in cells if c.abs_diff > 6e-5]
    worst = max(c.abs_diff for c in cells)
    record("C1", len(cells) == 18 and not bad and dt < 1.0,
           f"Table 1: {len(cells) - len(bad)}/{len(cells)} ADM cells within 6e-5 "
           f"(worst {worst:.1e}), {dt:.3f} s")


def test_c2_table2():
    (res,), dt = fresh_tables([2])
    bad = [c for c in res.cells if c.abs_diff > 1e-4]
    worst = max(c.abs_diff for c in res.cells)
    record("C2", len(res.cells) == 126 and not bad and dt < 1.0,
           f"Table 2: {len(res.cells) - len(bad)}/{len(res.cells)} cells within 1e-4 "
           f"(worst {worst:.1e}), {dt:.3f} s")


def test_c3_tables_3_to_6():
    results, dt = fresh_tables([3, 4, 5, 6])
    cells = [c for r in results for c in r.cells]
    gating = [c for c in cells if not c.advisory]
    failed = [c for c in gating if not c.passed]
    advisory = [c for c in cells if c.advisory]
    detail = (f"Tables 3-6: {len(gating) - len(failed)}/{len(gating)} gating cells within 2 units "
              f"of the last printed digit, {len(advisory)} advisory "
              f"({sum(not c.passed for c in advisory)} off), {dt:.3f} s")
    if failed:
        detail += f"; mismatches: {describe(failed)}"
    record("C3", not failed and dt < 5.0, detail)


def test_c4_exact_residual():
    X, T = np.meshgrid(np.linspace(-2, 2, 41), np.linspace(0, 1, 11))
    worst = {w: float(np.abs(fd_residual(GkdvParams(0.5, w), X, T)).max()) for w in W_VALUES}
    record("C4", max(worst.values()) < 1e-5,
           "exact-solution FD residual max " + ", ".join(f"w={w:g}: {v:.1e}" for w, v in worst.items())
           + " (limit 1e-5)")


def observed_orders(params, x):
    """log2 of e(tau)/e(tau/2) for tau in (0.2, 0.1), keyed by N.

    N counts corrections beyond eta_0, so the partial sum holds N + 1 terms and
    its error is O(tau^(N+1)).
    """
    sol = solve(params, 5)
    out = {}
    for N in range(1, 5):
        err = lambda t: abs(eval_partial_sum(sol, N + 1, x, t) - exact_eval(params, x, t))
        out[N] = [math.log2(err(t) / err(t / 2)) for t in (0.2, 0.1)]
    return out


def test_c5_order_property():
    offenders, info = [], []
    for w in W_VALUES:
        for x in (0.5, 1.0, 1.5):
            for N, orders in observed_orders(GkdvParams(0.5, w), x).items():
                for tau, p in zip((0.2, 0.1), orders):
                    if abs(p - (N + 1)) > 0.3:
                        tag = f"w={w:g} x={x:g} N={N} tau={tau:g}: order {p:.2f} vs {N + 1}"
                        (offenders if w == 0.0 else info).append(tag)
    detail = f"tau-ratio order test at default w=0: {len(offenders)} of 24 checks outside +-0.3"
    if offenders:
        detail += " [" + "; ".join(offenders) + "]"
    if info:
        detail += f"; informational w=0.5/1 outliers: {len(info)}"
    record("C5", not offenders, detail)


def random_poly(rng, k, n_terms=4):
    raw = [HyperTerm(float(rng.uniform(-3, 3)), int(rng.integers(0, 7)), int(rng.integers(0, 3)),
                     int(rng.integers(0, 4))) for _ in range(n_terms)]
    return canonicalize(raw, k)


def max_coeff_gap(p, q):
    a, b = coeff_map(p), coeff_map(q)
    scale = max([1.0] + [abs(v) for v in a.values()] + [abs(v) for v in b.values()])
    return max((abs(a.get(key, 0.0) - b.get(key, 0.0)) for key in set(a) | set(b)), default=0.0) / scale


def test_c6_algebra_properties():
    rng = np.random.default_rng(2024)
    cases = 120
    worst = dict.fromkeys(["product", "linearity", "idempotence", "fd", "eta1"], 0.0)
    for _ in range(cases):
        k = float(rng.uniform(0.5, 2.0))
        p, q = random_poly(rng, k), random_poly(rng, k)
        a, b = rng.uniform(-2, 2, 2)
        worst["product"] = max(worst["product"],
                               max_coeff_gap(diff_x(p * q), diff_x(p) * q + p * diff_x(q)))
        worst["linearity"] = max(worst["linearity"],
                                 max_coeff_gap(diff_x(p.scale(a) + q.scale(b)),
                                               diff_x(p).scale(a) + diff_x(q).scale(b)))
        again = canonicalize(p.terms, k)
        worst["idempotence"] = max(worst["idempotence"], 0.0 if again == p else 1.0)
        # fourth-order central difference; error measured against the term-magnitude scale
        x, tau, h = float(rng.uniform(-2, 2)), float(rng.uniform(0, 1)), 1e-3
        f = lambda s: evaluate(p, s, tau)
        fd = (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)
        dp = diff_x(p)
        worst["fd"] = max(worst["fd"], abs(evaluate(dp, x, tau) - fd) / max(abs_eval(dp, x, tau), 1e-300))

        params = GkdvParams(float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.0, 2.0)))
        eta0 = initial_term(params)
        eta1 = next_term([eta0], params)
        shift = canonicalize([HyperTerm(params.u * t.coeff, t.sech_pow, t.tanh_pow, 1)
                              for t in diff_x(eta0).terms], params.k)
        worst["eta1"] = max(worst["eta1"], max((abs(t.coeff) for t in (eta1 + shift).terms), default=0.0))

    limits = {"product": 1e-12, "linearity": 1e-12, "idempotence": 0.0, "fd": 1e-6, "eta1": 1e-12}
    ok = all(worst[key] <= limits[key] for key in limits)
    record("C6", ok, f"algebra properties over {cases} seeded cases each: "
           + ", ".join(f"{key} {worst[key]:.1e} (<= {limits[key]:g})" for key in limits))


def test_c7_gradient_check():
    m = init_model((3, 16, 1), 11)
    m = replace(m, biases=tuple(np.random.default_rng(1).normal(0, 0.1, b.shape) for b in m.biases))
    rng = np.random.default_rng(3)
    inputs = rng.uniform(-1, 1, (10, 3))
    data = Dataset(inputs, np.sin(inputs.sum(axis=1)))
    lam = 1e-3
    _, g = loss_and_gradients(m, data, lam)
    analytic = g.flat()
    flat = m.flat()

    def loss_at(vec):
        Ws, bs, pos = [], [], 0
        for W, b in zip(m.weights, m.biases):
            Ws.append(vec[pos:pos + W.size].reshape(W.shape))
            pos += W.size
            bs.append(vec[pos:pos + b.size])
            pos += b.size
        return loss_and_gradients(replace(m, weights=tuple(Ws), biases=tuple(bs)), data, lam)[0]

    h = 1e-6
    numeric = np.empty_like(analytic)
    for i in range(flat.size):
        e = np.zeros_like(flat)
        e[i] = h
        numeric[i] = (loss_at(flat + e) - loss_at(flat - e)) / (2 * h)
    rel = np.abs(analytic - numeric) / np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-6)
    record("C7", rel.max() < 1e-5,
           f"3-16-1 gradient check over {flat.size} parameters: max relative discrepancy {rel.max():.1e} (limit 1e-5)")


def test_c8_training_outcome():
    data = build_dataset()
    t0 = time.perf_counter()
    model, history = train(TrainConfig(), data)
    dt = time.perf_counter() - t0
    final_mse = mse(model, data)
    xs, taus = test_grid()
    pred = np.concatenate([predict_grid(model, xs, taus, w).ravel() for w in W_VALUES])
    X, T = np.meshgrid(xs, taus, indexing="ij")
    truth = np.concatenate([exact_eval(GkdvParams(0.5, w), X, T).ravel() for w in W_VALUES])
    test_mae = analysis.mae(pred, truth)
    ok = len(data) == 183 and final_mse < 1e-3 and history[1989] < history[9] and test_mae <= 1e-2 and dt < 120
    stretch = "met" if test_mae <= 1e-3 else "not met"
    record("C8", ok,
           f"training: MSE {final_mse:.2e} (< 1e-3), loss@1990 {history[1989]:.2e} < loss@10 {history[9]:.2e}, "
           f"test MAE {test_mae:.2e} (<= 1e-2; stretch 1e-3 {stretch}), {dt:.1f} s")


def test_c9_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [run(["train", "--seed", "42", "--out", str(d)]) for d in (a, b)]
    same = (a / "model.json").read_bytes() == (b / "model.json").read_bytes()
    model = load_model(a / "model.json")
    save_model(model, tmp_path / "again.json")
    back = load_model(tmp_path / "again.json")
    roundtrip = (np.array_equal(model.flat(), back.flat())
                 and model_to_text(back) == (a / "model.json").read_text())
    record("C9", codes == [0, 0] and same and roundtrip,
           f"train --seed 42 twice: byte-identical={same}; save/load round-trip bit-exact={roundtrip}")


def half_max_width(params):
    half = params.amplitude / 2
    lo, hi = 0.0, 1.0
    while exact_eval(params, hi, 0.0) > half:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if exact_eval(params, mid, 0.0) > half:
            lo = mid
        else:
            hi = mid
    return 2 * hi


def test_c10_coriolis_trend():
    p0, p1 = GkdvParams(0.5, 0.0), GkdvParams(0.5, 1.0)
    peaks = (exact_eval(p0, 0.0, 0.0), exact_eval(p1, 0.0, 0.0))
    widths = (half_max_width(p0), half_max_width(p1))
    ok = peaks == (1.0, 3.0) and widths[1] < widths[0]
    record("C10", ok, f"peak amplitude w=0: {peaks[0]:g}, w=1: {peaks[1]:g}; half-max width "
           f"w=0: {widths[0]:.4f}, w=1: {widths[1]:.4f}")
