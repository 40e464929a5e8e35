"""End-to-end acceptance checks, one per criterion, each printing a PASS/FAIL line."""

import math
import time

import mpmath
import numpy as np
import pytest

from tauberiana import contour_lab as cl
from tauberiana import harness as H
from tauberiana import residue_engine as re_
from tauberiana import series_core as sc
from tauberiana import smoothing as sm
from tauberiana import special_fn as sf
from tauberiana.cli import bundled_config


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, msg: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {msg}")
        assert ok, msg

    return emit


def test_c01_ingham_counterexample(verdict):
    t0 = time.perf_counter()
    rep = H.counterexample_suite("ingham", H.ExperimentConfig("counterexample", grid=(1e3, 1e6, None)))
    dt = time.perf_counter() - t0
    d = rep.details
    ok = rep.verdicts["residual_bound"] and rep.verdicts["oscillation"] and dt < 10
    verdict(1, ok, f"ingham residual/log {d['max_residual_over_log']:.3f} <= 5, "
                   f"oscillation {d['oscillation_range']:.3f} >= 1.2, {dt:.2f}s")


def test_c02_karamata_counterexample(verdict):
    t0 = time.perf_counter()
    rep = H.counterexample_suite("karamata", H.ExperimentConfig("counterexample", grid=(1e3, 1e6, None)))
    dt = time.perf_counter() - t0
    d = rep.details
    ok = rep.verdicts["residual_bound"] and max(d["window_envelopes"]) >= 0.3 and dt < 10
    verdict(2, ok, f"karamata normalised residual {d['max_normalised_residual']:.3f} <= 10, "
                   f"window envelope max {max(d['window_envelopes']):.3f} >= 0.3, {dt:.2f}s")


def test_c03_residue_engine_zeta_squared(verdict):
    lr = re_.laurent_coefficients(lambda w: sf.zeta_values(w)[0] ** 2, 1.0, 2, 0.5)
    e2 = abs(lr.c(-2) - 1)
    e1 = abs(lr.c(-1) - 2 * float(mpmath.euler))
    x = 1e4
    mp_x = mpmath.mpf(x)
    ref = float(mp_x * mpmath.log(mp_x) + (2 * mpmath.euler - 1) * mp_x)
    pd = re_.PoleData(alpha=1.0, m=2, laurent=[lr.c(-2), lr.c(-1), lr.c(0)])
    rel = abs(re_.main_term(pd, x) - ref) / ref
    verdict(3, e2 <= 1e-8 and e1 <= 1e-6 and rel <= 1e-8,
            f"c_-2 err {e2:.1e}, c_-1 err {e1:.1e}, main term rel err {rel:.1e} at 1e4")


def test_c04_divisor2_strong_fit(verdict):
    t0 = time.perf_counter()
    code, rep = H.run_config(bundled_config("divisor2"))
    dt = time.perf_counter() - t0
    beta = rep.fit.exponent if rep.fit is not None else math.nan
    verdict(4, code == 0 and beta <= 0.8 and dt < 60, f"divisor2 fitted exponent {beta:.3f} <= 0.8, {dt:.1f}s")


def test_c05_chebyshev_psi(verdict):
    stream = sc.enumerate_terms(sc.bundled_spec("vonmangoldt"), 1e7)
    psi = sc.partial_sum(stream, 1e7)[0]
    dev = abs(psi / 1e7 - 1)
    verdict(5, dev <= 0.01, f"|psi(1e7)/1e7 - 1| = {dev:.2e} <= 0.01")


def test_c06_weight_machinery(verdict):
    import itertools

    fails = 0
    total = 0
    for ell, eps, r, sign in itertools.product(range(3, 7), [1e-3, 1e-2, 1e-1], [math.e, 10.0, 100.0], "+-"):
        wp = sm.WeightParams(2.0 * r, 2.0, eps, ell, sign)
        u = np.linspace(math.log(2.0) - 3 * eps, math.log(2.0 * r) + 3 * eps, 10_000)
        rep = sm.verify_weight_properties(wp, u, np.array([1.0 + 1j]))
        for prop in ("sandwich", "range", "support", "smoothness"):
            total += 1
            fails += not rep.passed[prop]
    rng = np.random.default_rng(2024)
    wp = sm.WeightParams(100.0, 1.0, 0.05, 4, "+")
    s = rng.uniform(0, 3, 25) + 1j * rng.uniform(-50, 50, 25)
    num = sm.numerical_mellin(sm.build_weight(wp), s)
    mellin_err = float(np.max(np.abs(sm.weight_mellin(wp, s) - num) / np.abs(num)))
    s100 = rng.uniform(0, 3, 100) + 1j * rng.uniform(-50, 50, 100)
    rep = sm.verify_weight_properties(wp, np.linspace(-0.5, math.log(100) + 0.5, 10_000), s100)
    margins = min(rep.margins["mellin_growth"], rep.margins["mellin_defect"])
    ok = fails == 0 and mellin_err <= 1e-9 and margins >= 0
    verdict(6, ok, f"sweep {total - fails}/{total} checks pass, Mellin rel err {mellin_err:.1e}, "
                   f"min bound margin {margins:.3g}")


def test_c07_contour_shift(verdict):
    out = []
    ok = True
    for A, hyp, x, budget in ((cl.zeta_evaluator(), cl.HypothesisB(1.0, 0.4, 0.5, 1, 3.0), 100.0, 1e-4),
                              (cl.zeta2_evaluator(), cl.HypothesisB(1.0, 0.4, 1.0, 2, 9.0), 1000.0, 1e-3)):
        rep = cl.contour_shift_check(A, A.pole, hyp, sm.WeightParams(x, 1.0, 0.5, 12, "+"), budget)
        ok &= rep.residual <= budget and rep.passed
        out.append(f"[1,{x:g}] residual {rep.residual:.1e} <= {budget:g}")
    verdict(7, ok, "; ".join(out))


def test_c08_zetaderiv_example(verdict):
    spec = sc.bundled_spec("zetaderiv")
    val, _ = sc.evaluate_series(spec, 2.0)
    ref = float(mpmath.zeta(5))
    err = abs(val - ref)
    stream = sc.enumerate_terms(spec, 1e16)
    jumps = H.jump_statistic(stream, 1.0 - 0.5 / 2.0)
    exact = bool(np.all(jumps == 1.0))
    g = sf.zeta_growth_check(0, (-1.0, -1.0), np.linspace(3, 100, 60))
    verdict(8, err <= 1e-8 and exact and g.verdict == "pass",
            f"series err {err:.1e} at s=2, jumps exactly 1: {exact} ({jumps.size} terms), "
            f"growth verdict {g.verdict} ({g.growth_ratio:.3f})")


def test_c09_spreading(verdict):
    rep = H.counterexample_suite("bounded", H.ExperimentConfig("counterexample", grid=(1.0, 1e6, None)))
    v = rep.verdicts
    ok = v["range"] and v["block_sum"] and v["fluctuation"]
    verdict(9, ok, f"range {v['range']}, block sums {v['block_sum']} (err {rep.details['block_sum_error']:.1e}), "
                   f"fluctuation {v['fluctuation']}, {rep.details['spread_terms']} pieces")


def test_c10_continuation(verdict):
    b, _ = cl.continued_B(2.0)
    n = np.arange(1, 2_000_001, dtype=float)
    direct = math.fsum(((1 + np.cos(np.log(n) ** 2)) / n ** 2).tolist())
    eb = abs(b - direct)
    a, _ = cl.continued_A(1.01)
    ea = abs(0.01 ** 2 * a - 1)
    prof = cl.vertical_growth_profile(0.3, [20.0, 30.0, 40.0])
    worst = float(np.max(np.abs(prof.ratios - 1)))
    verdict(10, eb <= 1e-6 and ea <= 0.05 and worst <= 0.15,
            f"B(2) err {eb:.1e}, (s-1)^2 A at 1.01 off by {ea:.3f}, profile max |ratio-1| {worst:.3f}")


def test_c11_gaussian_integral_bound(verdict):
    rng = np.random.default_rng(20240)
    passed = total = 0
    worst = None
    for _ in range(20):
        sign = rng.choice([-1.0, 1.0])
        beta = complex(sign * rng.uniform(1, 4), rng.uniform(-4, 4))
        for k in (0, 1):
            quad, asym, bound = cl.j_gaussian(k, beta)
            total += 1
            if abs(quad - asym) <= bound:
                passed += 1
            elif worst is None:
                worst = (k, beta, abs(quad - asym), bound)
    msg = f"{passed}/{total} discrepancies within the bound"
    if worst is not None:
        msg += f"; first violation k={worst[0]} beta={worst[1]:.3f} |diff| {worst[2]:.3g} > {worst[3]:.3g}"
    verdict(11, passed == total, msg)


def test_c12_thread_determinism(verdict, tmp_path):
    cases = [("ingham", None), ("karamata", None), ("divisor2", None), ("zeta-weak", (1e3, 1e6, None))]
    same = []
    for name, grid in cases:
        texts = []
        for threads in (1, 8):
            if name == "zeta-weak":
                cfg = H.ExperimentConfig("weak", series=sc.bundled_spec("zeta"), pole=re_.bundled_pole("zeta"),
                                         grid=grid, threads=threads)
                rep = H.run_suite(cfg)
            else:
                rep = H.run_config(bundled_config(name), threads=threads)[1]
            paths = H.write_outputs(rep, tmp_path / f"{name}-{threads}")
            texts.append([p.read_bytes() for p in paths if p.suffix == ".csv"])
        same.append(texts[0] == texts[1] and len(texts[0]) == 1)
    verdict(12, all(same), f"CSV identical for 1 and 8 threads: {dict(zip([c[0] for c in cases], same))}")
