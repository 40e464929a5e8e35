import csv
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tauberiana import smoothing as sm
from tauberiana.errors import InvalidParams


def wp_plus(**kw):
    base = dict(x=100.0, y=1.0, eps=0.05, ell=4, sign="+")
    base.update(kw)
    return sm.WeightParams(**base)


def test_box_convolve_box_is_hat():
    b = sm.PiecewisePoly.box(-1.0, 1.0, 0.5)
    hat = sm.mult_convolve(b, b)
    assert hat.support == (-2.0, 2.0)
    u = np.linspace(-2.5, 2.5, 501)
    expected = np.clip(0.25 * (2 - np.abs(u)), 0, None)
    assert np.allclose(hat(u), expected, atol=1e-15)


def test_convolution_support_is_sum_interval():
    f = sm.PiecewisePoly.box(math.log(2), math.log(3))
    g = sm.PiecewisePoly.box(math.log(5), math.log(7))
    lo, hi = sm.mult_convolve(f, g).support
    assert math.exp(lo) == pytest.approx(10.0)
    assert math.exp(hi) == pytest.approx(21.0)


@given(st.floats(-2, 2), st.floats(0.1, 2), st.floats(-2, 2), st.floats(0.1, 2), st.integers(1, 3))
def test_convolution_commutes(a, w1, c, w2, k):
    f = sm.PiecewisePoly.box(a, a + w1)
    for _ in range(k - 1):
        f = sm.mult_convolve(f, sm.PiecewisePoly.box(-0.1, 0.3))
    g = sm.PiecewisePoly.box(c, c + w2, 2.0)
    u = np.linspace(a + c - 1, a + c + w1 + w2 + 1 + 0.4 * k, 400)
    assert np.allclose(sm.mult_convolve(f, g)(u), sm.mult_convolve(g, f)(u), atol=1e-12, rtol=0)


@pytest.mark.parametrize("ell", range(1, 7))
def test_kernel_unit_mass(ell):
    k = sm.smoothing_kernel(0.1, ell)
    anti = k.antiderivative()
    assert anti(k.support[1] + 1.0) == pytest.approx(1.0, abs=1e-14)
    assert k.degree <= ell - 1


def test_weight_plateau_and_support():
    wp = wp_plus()
    w = sm.build_weight(wp)
    assert w(math.sqrt(wp.x * wp.y)) == pytest.approx(1.0, abs=1e-14)
    assert w(math.exp(-3 * wp.eps) * wp.y) == 0.0
    lo, hi = w.support
    assert lo == pytest.approx(math.exp(-2 * wp.eps) * wp.y)
    assert hi == pytest.approx(math.exp(2 * wp.eps) * wp.x)
    wm = sm.build_weight(wp_plus(sign="-"))
    assert wm.support[0] == pytest.approx(wp.y) and wm.support[1] == pytest.approx(wp.x)
    assert wm.poly.degree <= wp.ell


def test_weight_params_validation():
    with pytest.raises(InvalidParams):
        sm.WeightParams(1.1, 1.0, 0.05, 4)
    with pytest.raises(InvalidParams):
        sm.WeightParams(100.0, 1.0, 1.5, 4)
    with pytest.raises(InvalidParams):
        sm.WeightParams(100.0, 1.0, 0.05, 4, sign="*")


def test_kernel_mellin_removable_point():
    assert sm.kernel_mellin(0.1, 4, 0.0) == pytest.approx(1.0)
    assert sm.kernel_mellin(0.1, 4, 1e-9) == pytest.approx(1.0, abs=1e-15)


def test_box_factor_at_one():
    wp = wp_plus()
    a, b = wp.box_ends
    box = sm._interval_mellin(a, b, 1.0)
    assert box == pytest.approx(math.exp(wp.eps) * wp.x - math.exp(-wp.eps) * wp.y, rel=1e-14)
    assert sm.weight_mellin(wp, 1.0) == pytest.approx(box * sm.kernel_mellin(wp.eps, wp.ell, 1.0), rel=1e-14)


def test_mellin_closed_form_vs_quadrature_fixed_point():
    wp = wp_plus()
    s = 2 + 3j
    num = sm.numerical_mellin(sm.build_weight(wp), s)[0]
    assert abs(sm.weight_mellin(wp, s) - num) <= 1e-9 * abs(num)


def test_mellin_closed_form_vs_quadrature_random():
    rng = np.random.default_rng(7)
    s = rng.uniform(0, 3, 25) + 1j * rng.uniform(-50, 50, 25)
    for wp in (wp_plus(), wp_plus(sign="-", eps=0.02, ell=5)):
        num = sm.numerical_mellin(sm.build_weight(wp), s)
        closed = sm.weight_mellin(wp, s)
        assert np.max(np.abs(closed - num) / np.abs(num)) <= 1e-9


def test_psi_hat_small_eps_ratio():
    r = abs(sm.psi_hat(wp_plus(eps=1e-3), 1.0)) / abs(sm.psi_hat(wp_plus(eps=1e-4), 1.0))
    assert r == pytest.approx(10.0, rel=0.05)


def test_psi_hat_at_zero():
    wp = wp_plus()
    val = sm.psi_hat(wp, 0.0)
    assert math.isfinite(abs(val))
    assert val == pytest.approx(sm.weight_mellin(wp, 0.0) - math.log(wp.x / wp.y), abs=1e-13)
    # for the majorant the defect at 0 is 2 eps
    assert val.real == pytest.approx(2 * wp.eps, rel=1e-12)


def test_psi_hat_near_pole_bound():
    x, eps = 1e4, 1e-2
    wp = sm.WeightParams(x, 1.0, eps, 4)
    r = 1 / math.log(x)
    for th in np.linspace(0, 2 * math.pi, 17):
        s = 1 + r * complex(math.cos(th), math.sin(th))
        assert abs(sm.psi_hat(wp, s)) <= 2 * eps * math.exp(2 * eps) * (x + 1) * math.e


@given(st.floats(0, 3), st.floats(-60, 60), st.sampled_from(["+", "-"]))
def test_psi_hat_consistent_with_mellin(sig, t, sign):
    wp = wp_plus(sign=sign)
    s = complex(sig, t)
    if abs(s) < 1e-3:
        return
    direct = sm.weight_mellin(wp, s) - (wp.x ** s - wp.y ** s) / s
    assert abs(sm.psi_hat(wp, s) - direct) <= 1e-10 * max(1.0, abs(wp.x ** s / s))


def test_verify_default_weight_all_pass():
    wp = wp_plus()
    rng = np.random.default_rng(3)
    s = rng.uniform(0, 3, 100) + 1j * rng.uniform(-50, 50, 100)
    u = np.linspace(-0.5, math.log(100) + 0.5, 10_000)
    rep = sm.verify_weight_properties(wp, u, s)
    assert rep.all_passed, rep.margins
    assert all(v >= 0 for v in rep.margins.values())


def test_verify_bound_at_truncation_height():
    wp = wp_plus()
    T = wp.ell / wp.eps
    s = complex(0.5, T)
    assert abs(sm.weight_mellin(wp, s)) <= (wp.x * math.exp(2 * wp.eps)) ** 0.5 * 2 / abs(s)


SWEEP = list(itertools.product(range(3, 7), [1e-3, 1e-2, 1e-1], [math.e, 10.0, 100.0], "+-"))


@pytest.mark.parametrize("ell,eps,r,sign", SWEEP)
def test_weight_sweep(ell, eps, r, sign):
    y = 2.0
    x = r * y
    wp = sm.WeightParams(x, y, eps, ell, sign)
    u = np.linspace(math.log(y) - 3 * eps, math.log(x) + 3 * eps, 10_000)
    rep = sm.verify_weight_properties(wp, u, np.array([1.0 + 1j]))
    for prop in ("sandwich", "range", "support", "smoothness"):
        assert rep.passed[prop], (prop, rep.margins[prop])


def test_smoothness_by_finite_differences():
    wp = wp_plus(ell=5)
    w = sm.build_weight(wp)
    h = 1e-9
    for r in range(wp.ell - 1):
        d = w.poly.derivative(r) if r else w.poly
        scale = max(float(np.max(np.abs(d(np.linspace(*w.poly.support, 2001))))), 1e-300)
        for b in w.poly.breaks:
            assert abs(d(b + h) - d(b - h)) <= 1e-6 * scale


def test_select_parameters():
    p = sm.select_parameters(1.0, 0.5, 0.5, 1e12)
    assert p.ell == 4
    assert p.eps == pytest.approx(1e12 ** (-0.5 / 1.5))
    assert p.T == pytest.approx(p.ell / p.eps)
    assert sm.select_parameters(1.0, 0.01, 2.0, 2.0).eps == 0.1
    with pytest.raises(InvalidParams):
        sm.select_parameters(1.0, 1.5, 1.0, 10.0)


def test_csv_exports(tmp_path):
    wp = wp_plus()
    sm.build_weight(wp).to_csv(tmp_path / "w.csv", points=50)
    rows = list(csv.reader(open(tmp_path / "w.csv")))
    assert rows[0] == ["u", "t", "phi"] and len(rows) == 51
    sm.mellin_samples_csv(wp, [1.0, 2 + 1j], tmp_path / "m.csv")
    rows = list(csv.reader(open(tmp_path / "m.csv")))
    assert rows[0] == ["re_s", "im_s", "re_phi_hat", "im_phi_hat"] and len(rows) == 3
