import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from tauberiana import special_fn as sf
from tauberiana.errors import ConvergenceError, DomainError, InvalidParams, OverflowGuard


def test_zeta_known_values():
    assert abs(sf.riemann_zeta(2)[0] - math.pi ** 2 / 6) < 1e-14
    assert abs(sf.riemann_zeta(0)[0] + 0.5) < 1e-14
    assert abs(sf.riemann_zeta(-1)[0] + 1 / 12) < 1e-13
    assert abs(sf.riemann_zeta(4)[0] - math.pi ** 4 / 90) < 1e-14


def test_zeta_first_zero():
    rho = complex(0.5, 14.134725141734693)
    assert abs(sf.riemann_zeta(rho)[0]) < 1e-12


@given(st.floats(-1.9, 4.0, allow_subnormal=False), st.floats(-199.0, 199.0, allow_subnormal=False))
def test_zeta_matches_mpmath(sig, t):
    sig, t = round(sig, 9), round(t, 9)  # keep the mpmath oracle away from tiny-argument quirks
    s = complex(sig, t)
    if abs(s - 1) < 1e-3:
        return
    v, err = sf.riemann_zeta(s)
    ref = complex(mpmath.zeta(mpmath.mpc(sig, t)))
    assert abs(v - ref) <= 1e-11 * max(1.0, abs(ref))
    assert abs(v - ref) <= err + 1e-13 * max(1.0, abs(ref))


@given(st.floats(1.1, 6.0), st.floats(-50, 50))
def test_zeta_conjugate_symmetry(sig, t):
    s = complex(sig, t)
    assert abs(sf.riemann_zeta(s.conjugate())[0] - sf.riemann_zeta(s)[0].conjugate()) < 1e-13


def test_zeta_errors():
    with pytest.raises(DomainError) as e:
        sf.riemann_zeta(1.0)
    assert e.value.code == "pole-at-one"
    with pytest.raises(DomainError) as e:
        sf.riemann_zeta(complex(-3, 0))
    assert e.value.code == "outside-supported-strip"
    with pytest.raises(DomainError):
        sf.riemann_zeta(complex(2, 250))


def test_zeta_vectorised_agrees_with_scalar():
    s = np.array([2.0, 0.5 + 10j, -1.5 + 3j])
    vals, _ = sf.zeta_values(s)
    for k, sv in enumerate(s):
        assert vals[k] == pytest.approx(sf.riemann_zeta(sv)[0], abs=1e-14)


def test_cauchy_taylor_exp():
    coeffs, errs, nodes = sf.cauchy_taylor(np.exp, 0.0, 1.0, 6)
    ref = [1 / math.factorial(k) for k in range(7)]
    assert np.allclose(coeffs.real, ref, atol=1e-14)
    assert nodes >= 32


def test_cauchy_taylor_rejects_bad_nodes():
    with pytest.raises(InvalidParams):
        sf.cauchy_taylor(np.exp, 0.0, 1.0, 3, nodes=24)


def test_cauchy_taylor_node_cap():
    # essential singularity on the circle: never settles
    with pytest.raises(ConvergenceError) as e, np.errstate(all="ignore"):
        sf.cauchy_taylor(lambda w: np.exp(1 / (w - 1.0 + 1e-9)), 0.0, 1.0, 2, max_nodes=256)
    assert e.value.code == "node-limit-exceeded"


@pytest.mark.parametrize("s,k", [(2.0, 1), (3 + 4j, 2), (0.5 + 20j, 1), (-0.5 + 7j, 1)])
def test_zeta_derivative_matches_mpmath(s, k):
    v, _ = sf.zeta_derivative(s, k)
    ref = complex(mpmath.zeta(s, 1, k))
    assert abs(v - ref) <= 1e-9 * max(1.0, abs(ref))


def test_zeta_derivative_pole_in_disk():
    with pytest.raises(DomainError) as e:
        sf.zeta_derivative(1.1, 1, rho=0.2)
    assert e.value.code == "pole-in-disk"


def test_zeta_prime_at_zero():
    # zeta'(0) = -log(2 pi)/2
    assert abs(sf.zeta_derivative(0.0, 1)[0] + 0.5 * math.log(2 * math.pi)) < 1e-10


@given(st.floats(-6.5, 8.0), st.floats(-30, 30))
def test_gamma_matches_mpmath(x, y):
    z = complex(x, y)
    if round(x) <= 0 and abs(z - round(x)) < 1e-6:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(x, y)))
    assert abs(sf.gamma(z) - ref) <= 1e-12 * abs(ref) + 1e-300


def test_gamma_poles():
    with pytest.raises(DomainError) as e:
        sf.gamma(-2.0)
    assert e.value.code == "pole-at-nonpositive-integer"
    assert abs(sf.gamma(0.5) - math.sqrt(math.pi)) < 1e-14


def test_euler_maclaurin_split_reproduces_sum():
    phi = lambda u: 1.0 / u ** 2
    dphi = lambda u: -2.0 / u ** 3
    main, rem = sf.euler_maclaurin_sum(phi, dphi, 1, 200)
    direct = math.fsum(1.0 / n ** 2 for n in range(2, 201))
    assert abs(main + rem - direct) < 1e-10


def test_euler_maclaurin_bad_interval():
    with pytest.raises(InvalidParams):
        sf.euler_maclaurin_sum(np.sin, np.cos, 5, 5)


def test_truncated_gamma():
    tg = sf.TruncatedGamma(2, 0.5)
    assert sf.truncated_gamma_v(tg, 0.0) == pytest.approx(0.125)
    t = 40.0
    exact = (1 - math.exp(-0.5 * t) * (1 + 0.5 * t)) / t ** 2
    assert sf.truncated_gamma_v(tg, t) == pytest.approx(exact, rel=1e-13)
    # t^m v(t) -> Gamma(m)
    assert 1e4 ** 2 * sf.truncated_gamma_v(tg, 1e4) == pytest.approx(1.0, rel=1e-12)


def test_fejer_pair():
    assert sf.fejer_pair(0.0, "K") == pytest.approx(1.0)
    assert sf.fejer_pair(math.pi, "K") == pytest.approx(0.0, abs=1e-30)
    assert sf.fejer_pair(0.0, "k") == pytest.approx(0.5)
    assert sf.fejer_pair(3.0, "k") == 0.0
    # k is the transform partner: int k(x) e^{i x xi} dx = K(xi)
    x = np.linspace(-2, 2, 40001)
    xi = 1.3
    val = np.trapezoid(sf.fejer_pair(x, "k") * np.cos(x * xi), x)
    assert val == pytest.approx(sf.fejer_pair(xi, "K"), abs=1e-8)


def test_primes_and_von_mangoldt():
    assert sf.primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    lam = sf.von_mangoldt_sieve(10)
    assert lam[8] == pytest.approx(math.log(2))
    assert lam[6] == 0.0
    assert lam[9] == pytest.approx(math.log(3))
    # psi(100) frozen from a direct enumeration
    assert math.fsum(sf.von_mangoldt_sieve(100)) == pytest.approx(94.0453112293574, rel=1e-14)


def test_von_mangoldt_guards():
    with pytest.raises(InvalidParams):
        sf.von_mangoldt_sieve(1)
    with pytest.raises(OverflowGuard):
        sf.von_mangoldt_sieve(1 << 40)


def test_sieve_cache_roundtrip(tmp_path):
    vals = sf.von_mangoldt_sieve(1000)
    p = tmp_path / "psi.taub"
    sf.save_sieve_cache(p, vals)
    assert np.array_equal(sf.load_sieve_cache(p), vals)
    p.write_bytes(b"XXXX" + p.read_bytes()[4:])
    with pytest.raises(InvalidParams):
        sf.load_sieve_cache(p)


def test_growth_check_passes_for_correct_envelope():
    t = np.linspace(3, 100, 98)
    rep = sf.zeta_growth_check(1, (-1.0, -1.0), t)
    assert rep.verdict == "pass"
    assert rep.sup < 10


def test_growth_check_fails_for_wrong_power():
    t = np.linspace(3, 190, 120)
    ratios = 1.0 + t  # envelope off by a full power of |t|
    assert sf.stabilisation_verdict(t, ratios)[3] == "fail"
    assert sf.stabilisation_verdict(t, np.log(3 + t))[3] == "pass"
    assert sf.stabilisation_verdict(t[:3], ratios[:3])[3] == "indeterminate"


def test_growth_check_single_point_indeterminate():
    rep = sf.zeta_growth_check(0, (-0.5, -0.5), [10.0])
    assert rep.verdict == "indeterminate"
    assert rep.ratios.size == 1


def test_growth_check_k0():
    assert sf.zeta_growth_check(0, (-0.5, -0.5), np.linspace(3, 100, 98)).verdict == "pass"


def test_growth_check_domain():
    with pytest.raises(DomainError):
        sf.zeta_growth_check(0, (-0.5, 0.2), [10.0])


def test_zeta_direct_sum_oracle():
    s = 3 + 5j
    n = np.arange(1, 200001, dtype=float)
    N = 200000.0
    direct = np.sum(n ** -s) - N ** -s / 2 + N ** (1 - s) / (s - 1) + s * N ** (-s - 1) / 12
    assert abs(sf.riemann_zeta(s)[0] - direct) < 1e-9


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("eps0", [0.25, 0.5, 1.0])
def test_truncated_gamma_properties(m, eps0):
    tg = sf.TruncatedGamma(m, eps0)
    t = np.geomspace(0.1, 1e4, 400)
    v = sf.truncated_gamma_v(tg, t)
    assert np.all(v > 0)
    assert np.all(np.diff(v) < 0)
    tt = 1e3 / eps0
    assert tt ** m * sf.truncated_gamma_v(tg, tt) == pytest.approx(math.gamma(m), rel=0.02)


@given(st.floats(-50, 50))
def test_fejer_properties(x):
    assert sf.fejer_pair(x, "K") >= 0
    assert sf.fejer_pair(x, "k") == sf.fejer_pair(-x, "k")
    assert (sf.fejer_pair(x, "k") > 0) == (abs(x) < 2)


@pytest.mark.parametrize("s", [2.0, 3 + 4j, 0.5 + 20j, -0.5 + 7j])
def test_zeta_derivative_node_agreement(s):
    f = lambda w: sf.zeta_values(w)[0]
    rho = min(0.25, abs(s - 1) / 2)
    c64, e64, _ = sf.cauchy_taylor(f, s, rho, 2, nodes=64, max_nodes=64)
    c128, _, _ = sf.cauchy_taylor(f, s, rho, 2, nodes=128, max_nodes=128)
    assert np.all(np.abs(c64 - c128) <= np.maximum(e64, 1e-13))
