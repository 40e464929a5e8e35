import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from tauberiana import series_core as sc
from tauberiana import special_fn as sf
from tauberiana.errors import BudgetError, DomainError, InvalidParams, SpecError


def test_zeta_enumeration():
    stream = sc.enumerate_terms(sc.bundled_spec("zeta"), 5)
    assert stream.lam.tolist() == [1, 2, 3, 4, 5]
    assert stream.a.tolist() == [1, 1, 1, 1, 1]


def test_divisor2_coefficients():
    stream = sc.enumerate_terms(sc.bundled_spec("divisor2"), 12)
    # 2^{omega(n)} mu^2(n)
    assert stream.a.tolist() == [1, 2, 2, 0, 2, 4, 2, 0, 0, 4, 2, 0]


def test_zetaderiv_terms():
    stream = sc.enumerate_terms(sc.bundled_spec("zetaderiv"), 100)
    assert list(zip(stream.lam.tolist(), stream.a.tolist())) == [(1, 1), (16, 8), (81, 27)]


def test_kluners_support():
    stream = sc.enumerate_terms(sc.bundled_spec("kluners"), 400)
    n = np.sqrt(stream.lam).round().astype(int)
    nz = n[stream.a > 0].tolist()
    # squarefree products of 3 and primes = 1 mod 3
    assert nz == [1, 3, 7, 13, 19]
    assert stream.a[n == 7][0] == 2.0


def test_multiplicative_geometric_needs_degree():
    with pytest.raises(SpecError) as e:
        sc.multiplicative_coefficients(10, {"local": "geometric"})
    assert e.value.code == "truncation-required"
    a = sc.multiplicative_coefficients(16, {"local": "geometric", "degree": 10})
    assert np.all(a[1:] == 1.0)


@given(st.integers(2, 3000))
def test_divisor2_is_multiplicative(n):
    a = sc.multiplicative_coefficients(3000, {"local": [1.0, 2.0]})
    f = int(np.prod([2 for p in sf.primes_up_to(n).tolist() if n % p == 0]))
    squarefree = all(n % (p * p) for p in sf.primes_up_to(int(math.isqrt(n))).tolist())
    assert a[n] == (f if squarefree else 0)


def test_spec_json_roundtrip():
    spec = sc.bundled_spec("kluners")
    back = sc.SeriesSpec.from_json(spec.to_json())
    assert back == spec
    assert sc.SeriesSpec.from_json({"name": "zeta"}) == sc.bundled_spec("zeta")
    with pytest.raises(SpecError):
        sc.SeriesSpec.from_json({"kind": "mystery"})


def test_tabulated_merges_duplicates():
    spec = sc.SeriesSpec("tabulated", {"terms": [[2.0, 1.0], [1.0, 0.5], [2.0, 3.0]]}, abscissa=0.0)
    stream = sc.enumerate_terms(spec, 10)
    assert stream.lam.tolist() == [1.0, 2.0]
    assert stream.a.tolist() == [0.5, 4.0]


def test_enumeration_budget():
    with pytest.raises(BudgetError) as e:
        sc.enumerate_terms(sc.bundled_spec("zeta"), 1e12)
    assert e.value.code == "enumeration-budget"


def test_partial_sum_floor_and_cutoff():
    stream = sc.enumerate_terms(sc.bundled_spec("zeta"), 1000)
    assert sc.partial_sum(stream, 10.5)[0] == 10.0
    assert sc.partial_sum(stream, 0.5)[0] == 0.0
    with pytest.raises(DomainError) as e:
        sc.partial_sum(stream, 2000)
    assert e.value.code == "cutoff-exceeded"


@given(st.lists(st.floats(1.0, 1e4), min_size=1, max_size=20))
def test_partial_sum_table_monotone_for_nonneg(xs):
    stream = sc.enumerate_terms(sc.bundled_spec("divisor2"), 1e4)
    grid = np.sort(np.array(xs))
    table = sc.partial_sum_table(stream, grid)
    assert np.all(np.diff(table.sums) >= 0)
    for x, s in zip(grid, table.sums):
        assert s == sc.partial_sum(stream, x)[0]


def test_partial_sum_table_threads_identical():
    stream = sc.enumerate_terms(sc.bundled_spec("vonmangoldt"), 1e6)
    grid = np.geomspace(10, 1e6, 200)
    t1 = sc.partial_sum_table(stream, grid, threads=1)
    t8 = sc.partial_sum_table(stream, grid, threads=8)
    assert t1.sums.tobytes() == t8.sums.tobytes()


def test_chebyshev_psi_oracle():
    stream = sc.enumerate_terms(sc.bundled_spec("vonmangoldt"), 1e4)
    # psi(10^4) frozen from the sieve
    assert sc.partial_sum(stream, 1e4)[0] == pytest.approx(10013.396693263116, rel=1e-13)


def test_evaluate_zeta_two():
    v, err = sc.evaluate_series(sc.bundled_spec("zeta"), 2.0, tail_target=1e-6)
    assert abs(v - math.pi ** 2 / 6) <= err
    assert err <= 1e-6 * 1.01


def test_evaluate_complex_point_matches_zeta():
    s = 3 + 4j
    v, err = sc.evaluate_series(sc.bundled_spec("zeta"), s, tail_target=1e-10)
    assert abs(v - sf.riemann_zeta(s)[0]) <= err + 1e-13


def test_evaluate_divisor2_matches_zeta_ratio():
    s = 3.0
    v, err = sc.evaluate_series(sc.bundled_spec("divisor2"), s, tail_target=1e-9)
    # prod_p (1 + 2 p^-3) = zeta(3)^2 prod_p (1 - 3 p^-6 + 2 p^-9)
    ps = sf.primes_up_to(10_000).astype(float)
    ref = float(mpmath.zeta(3)) ** 2 * math.prod((1 - 3 * ps ** -6 + 2 * ps ** -9).tolist())
    assert abs(v - ref) <= err + 1e-12


def test_evaluate_zetaderiv_second_order():
    spec = sc.bundled_spec("zetaderiv", m=2)
    v, err = sc.evaluate_series(spec, 2.0, tail_target=1e-9)
    assert abs(v + complex(mpmath.zeta(5, 1, 1))) <= err + 1e-12


def test_evaluate_divergent_region():
    with pytest.raises(DomainError) as e:
        sc.evaluate_series(sc.bundled_spec("zeta"), 1.0)
    assert e.value.code == "divergent-region"


def test_tail_majorant_formula():
    spec = sc.bundled_spec("zeta")
    # sum_{n > N} n^{-2} <= N^{-1}
    assert sc.tail_majorant(spec, 2.0, 1000) == pytest.approx(1e-3)
    with pytest.raises(SpecError):
        sc.tail_majorant(sc.SeriesSpec("explicit-rule", {"rule": "one"}), 2.0, 10)


@given(st.floats(1.2, 4.0), st.integers(10, 2000))
def test_tail_majorant_dominates_true_tail(sigma, n_cut):
    spec = sc.bundled_spec("zeta")
    true_tail = float(mpmath.zeta(sigma, n_cut + 1))
    assert sc.tail_majorant(spec, sigma, n_cut) >= true_tail


def test_partial_summation_identity():
    stream = sc.enumerate_terms(sc.bundled_spec("zeta"), 100)
    # sum_{1 < n <= 10} n
    val = sc.partial_summation(stream, lambda u: u, 1.0, 10.0, dphi=lambda u: np.ones_like(u))
    assert val == pytest.approx(54.0, abs=1e-9)
    assert sc.partial_summation(stream, lambda u: u, 1.0, 10.0) == pytest.approx(54.0, abs=1e-9)


def test_kronecker_convergent_and_boundary():
    stream = sc.enumerate_terms(sc.bundled_spec("zeta"), 1e6)
    grid = np.geomspace(1e2, 1e6, 257)
    assert sc.kronecker_check(stream, 1.1, grid).verdict == "pass"
    assert sc.kronecker_check(stream, 1.0, grid).verdict == "fail"
    with pytest.raises(InvalidParams):
        sc.kronecker_check(stream, 1.1, grid[:3])


@pytest.mark.parametrize("name", sc.BUNDLED_CONVERGENT)
def test_kronecker_all_bundled(name):
    spec = sc.bundled_spec(name)
    stream = sc.enumerate_terms(spec, 1e7)
    grid = np.geomspace(1e5, 1e7, 40)
    assert sc.kronecker_check(stream, spec.abscissa + 0.1, grid).verdict == "pass"


@pytest.mark.parametrize("name", ["zeta", "ingham", "zero"])
def test_laplace_identity(name):
    rep = sc.laplace_identity_check(sc.bundled_spec(name), 2.0 + 1j)
    assert rep.passed, (rep.residual, rep.budget)


def test_j_statistic_tends_to_leading_constant():
    stream = sc.enumerate_terms(sc.bundled_spec("zeta"), 2e6)
    assert sc.j_statistic(stream, 1.0, 1, 0.5, 14.0) == pytest.approx(1.0, abs=2e-3)


def test_spread_arrays_example():
    base, off, val, src = sc.spread_arrays(np.array([4.0, 9.0]), np.array([2.5, 0.5]))
    assert base.tolist() == [4.0, 4.0, 4.0, 9.0]
    assert np.all(val[:3] == 2.5 / 3)
    assert np.all(base[:3] + off[:3] < 5.0)
    assert val[3] == 0.5 and off[3] == 0.0
    assert math.fsum(sc.spread_arrays(np.array([1.0]), np.array([7.3]))[2].tolist()) == pytest.approx(7.3, rel=1e-15)
    with pytest.raises(InvalidParams) as e:
        sc.spread_arrays(np.array([1.0]), np.array([-1.0]))
    assert e.value.code == "negative-coefficient"
