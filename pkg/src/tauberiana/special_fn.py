"""Special functions and kernels shared by the other modules.

Contents: the Riemann zeta function by Euler-Maclaurin summation, its
derivatives by Cauchy-circle quadrature, the gamma function (Lanczos with
reflection), first-order Euler-Maclaurin summation of a smooth weight, the
truncated gamma weight v(t), the Fejer kernel pair, and a von Mangoldt sieve
with a small binary cache format.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import special as sp

from .errors import ConvergenceError, DomainError, InvalidParams, OverflowGuard

EPS = 2.0 ** -52

# Supported region for zeta evaluation.
ZETA_MIN_RE = -2.0
ZETA_MAX_IM = 200.0


def _bernoulli_even(kmax: int) -> list[Fraction]:
    """Return [B_2, B_4, ..., B_{2 kmax}] as exact fractions."""
    n = 2 * kmax
    b = [Fraction(0)] * (n + 1)
    b[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b[m] = -acc / (m + 1)
    return [b[2 * k] for k in range(1, kmax + 1)]


# B_{2k}/(2k)! for k = 1..15, i.e. up to B_30.
_BERNOULLI = _bernoulli_even(15)
_EM_COEFFS = np.array([float(bk / math.factorial(2 * k)) for k, bk in enumerate(_BERNOULLI, start=1)])


@dataclass(frozen=True)
class EulerMaclaurinConfig:
    """Parameters of one Euler-Maclaurin zeta evaluation.

    Attributes:
        N: Split point; terms n < N are summed directly.
        order: Number of Bernoulli corrections (at most 15, i.e. B_30).
        target: Requested absolute accuracy.
    """

    N: int
    order: int = 15
    target: float = 1e-13

    @classmethod
    def for_point(cls, s: complex, target: float = 1e-13) -> "EulerMaclaurinConfig":
        """Choose a split point large enough for the corrections to converge at ``s``.

        With N >= (|s| + 30)/2 the ratio of consecutive Bernoulli terms is at
        most about 1/pi, so fifteen corrections are ample.
        """
        n_split = max(12, int(math.ceil(0.5 * (abs(s) + 30.0))))
        return cls(N=n_split, order=15, target=target)


def _check_zeta_domain(s: np.ndarray) -> None:
    if np.any(s == 1.0):
        raise DomainError("pole-at-one", "zeta has a pole at s = 1")
    if np.any(s.real <= ZETA_MIN_RE) or np.any(np.abs(s.imag) > ZETA_MAX_IM):
        raise DomainError(
            "outside-supported-strip",
            f"zeta is supported on Re(s) > {ZETA_MIN_RE}, |Im(s)| <= {ZETA_MAX_IM}",
        )


def _zeta_em_block(s: np.ndarray, cfg: EulerMaclaurinConfig) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised Euler-Maclaurin evaluation for a block of points sharing ``cfg``."""
    n_split = cfg.N
    logn = np.log(np.arange(1, n_split, dtype=float))
    terms = np.exp(-np.outer(s, logn))
    head = terms.sum(axis=1)
    # Rounding: each term carries a phase error of about eps * |s| log n.
    head_abs = (np.abs(terms) * (1.0 + np.abs(s)[:, None] * logn[None, :])).sum(axis=1)
    log_split = math.log(n_split)
    n_pow = np.exp(-s * log_split)  # N^{-s}
    value = head + n_split * n_pow / (s - 1.0) + 0.5 * n_pow
    # Corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    rising = s.copy()
    scale = n_pow / n_split
    last = np.zeros_like(s)
    for k in range(cfg.order):
        if k > 0:
            rising = rising * (s + 2 * k - 1) * (s + 2 * k)
            scale = scale / (n_split * n_split)
        last = _EM_COEFFS[k] * rising * scale
        value = value + last
    err = np.abs(last) + 2.0 * EPS * (head_abs + np.abs(value))
    return value, err


def zeta_values(s, target: float = 1e-13) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate zeta at an array of points.

    Args:
        s: Complex scalar or array inside the supported strip.
        target: Requested absolute accuracy. The split point is fixed by
            |s|, after which rounding rather than truncation dominates; the
            reported error says what was achieved.

    Returns:
        Tuple ``(values, errors)`` of arrays with the shape of ``s``.

    Raises:
        DomainError: ``pole-at-one`` or ``outside-supported-strip``.
    """
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    shape = np.shape(s)
    flat = arr.ravel()
    _check_zeta_domain(flat)
    values = np.empty_like(flat)
    errors = np.empty(flat.shape, dtype=float)
    if flat.size:
        # Group points by split point so large blocks stay vectorised.
        splits = np.maximum(12, np.ceil(0.5 * (np.abs(flat) + 30.0))).astype(int)
        buckets = (splits + 15) // 16 * 16
        for n_split in np.unique(buckets):
            idx = np.nonzero(buckets == n_split)[0]
            for start in range(0, idx.size, 2048):
                sel = idx[start:start + 2048]
                cfg = EulerMaclaurinConfig(N=int(n_split), target=target)
                v, e = _zeta_em_block(flat[sel], cfg)
                values[sel] = v
                errors[sel] = e
    return values.reshape(shape), errors.reshape(shape)


def riemann_zeta(s: complex, target: float = 1e-13) -> tuple[complex, float]:
    """Riemann zeta function on Re(s) > -2, |Im(s)| <= 200.

    Args:
        s: Evaluation point, s != 1.
        target: Requested absolute accuracy.

    Returns:
        ``(value, err)`` with ``err`` the estimated absolute error.

    Raises:
        DomainError: ``pole-at-one`` or ``outside-supported-strip``.
    """
    v, e = zeta_values(complex(s), target)
    return complex(v), float(e)


def cauchy_taylor(
    f: Callable[[np.ndarray], np.ndarray],
    center: complex,
    rho: float,
    kmax: int,
    nodes: int = 32,
    target: float = 1e-12,
    max_nodes: int = 2048,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Taylor coefficients a_0..a_kmax of ``f`` at ``center`` by circle quadrature.

    The trapezoid rule on |w - center| = rho converges geometrically for
    analytic integrands. Nodes are doubled (reusing old samples) until two
    successive estimates agree to ``target``.

    Args:
        f: Vectorised function of complex arrays.
        center: Expansion point.
        rho: Circle radius (f must be analytic on the closed disk).
        kmax: Highest coefficient wanted.
        nodes: Initial node count (power of two).
        target: Absolute tolerance on each coefficient times rho**k.
        max_nodes: Node cap.

    Returns:
        ``(coeffs, errs, nodes_used)``; ``errs`` is the node-doubling
        difference, an upper estimate for the coarser rule's error.

    Raises:
        ConvergenceError: ``node-limit-exceeded`` if the cap is reached.
    """
    if nodes < 4 or nodes & (nodes - 1):
        raise InvalidParams("invalid-nodes", "node count must be a power of two")
    ks = np.arange(kmax + 1)
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    vals = np.asarray(f(center + rho * np.exp(1j * theta)), dtype=complex)
    coeffs = _circle_coeffs(vals, theta, ks) / rho ** ks
    n = nodes
    while True:
        theta_new = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        vals_new = np.asarray(f(center + rho * np.exp(1j * theta_new)), dtype=complex)
        theta_all = np.empty(2 * n)
        theta_all[0::2], theta_all[1::2] = theta, theta_new
        vals_all = np.empty(2 * n, dtype=complex)
        vals_all[0::2], vals_all[1::2] = vals, vals_new
        fine = _circle_coeffs(vals_all, theta_all, ks) / rho ** ks
        errs = np.abs(fine - coeffs)
        scale = rho ** ks
        theta, vals, n = theta_all, vals_all, 2 * n
        if np.all(errs * scale <= target * max(1.0, float(np.max(np.abs(vals))))):
            return fine, errs, n
        coeffs = fine
        if n > max_nodes:
            raise ConvergenceError("node-limit-exceeded", f"circle quadrature did not settle with {n} nodes")


def _circle_coeffs(vals: np.ndarray, theta: np.ndarray, ks: np.ndarray) -> np.ndarray:
    return (vals[None, :] * np.exp(-1j * np.outer(ks, theta))).mean(axis=1)


def zeta_derivative(s: complex, k: int, target: float = 1e-10, rho: float | None = None) -> tuple[complex, float]:
    """k-th derivative of zeta via a Cauchy integral on a circle around ``s``.

    Args:
        s: Centre point.
        k: Derivative order, k >= 0.
        target: Requested absolute accuracy.
        rho: Circle radius; defaults to min(0.25, |s - 1|/2).

    Returns:
        ``(value, err)``.

    Raises:
        DomainError: ``pole-in-disk`` if the disk contains 1,
            ``outside-supported-strip`` if it leaves the zeta strip.
        ConvergenceError: ``node-limit-exceeded``.
    """
    s = complex(s)
    if k < 0:
        raise InvalidParams("invalid-order", "derivative order must be non-negative")
    dist = abs(s - 1.0)
    if rho is None:
        rho = min(0.25, 0.5 * dist)
    if dist <= rho:
        raise DomainError("pole-in-disk", "the Cauchy disk contains the pole at 1")
    if s.real - rho <= ZETA_MIN_RE or abs(s.imag) + rho > ZETA_MAX_IM:
        raise DomainError("outside-supported-strip", "Cauchy disk leaves the supported strip")
    if k == 0:
        return riemann_zeta(s)
    fact = math.factorial(k)
    coeffs, errs, _ = cauchy_taylor(
        lambda w: zeta_values(w)[0], s, rho, k, nodes=32, target=target * rho ** k / fact
    )
    zeta_err = 1e-13 * fact / rho ** k
    return complex(fact * coeffs[k]), float(fact * errs[k] + zeta_err)


# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def _gamma_right(z: np.ndarray) -> np.ndarray:
    z = z - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return np.sqrt(2.0 * np.pi) * np.exp((z + 0.5) * np.log(t) - t) * acc


def gamma(s):
    """Gamma function for complex arguments.

    Lanczos approximation on Re(s) >= 1/2 and the reflection formula
    Gamma(s) Gamma(1 - s) = pi / sin(pi s) elsewhere.

    Args:
        s: Complex scalar or array avoiding the non-positive integers.

    Returns:
        Gamma(s) with the shape of ``s``.

    Raises:
        DomainError: ``pole-at-nonpositive-integer``.
    """
    z = np.asarray(s, dtype=complex)
    flat = np.atleast_1d(z).ravel()
    on_pole = (flat.imag == 0) & (flat.real <= 0) & (flat.real == np.round(flat.real))
    if np.any(on_pole):
        raise DomainError("pole-at-nonpositive-integer", "gamma has poles at 0, -1, -2, ...")
    out = np.empty_like(flat)
    right = flat.real >= 0.5
    out[right] = _gamma_right(flat[right])
    left = ~right
    if np.any(left):
        zl = flat[left]
        # reduce before multiplying by pi so sin(pi z) keeps its relative accuracy near the poles
        n = np.round(zl.real)
        sin_pi = np.where(n % 2 == 0, 1.0, -1.0) * np.sin(np.pi * (zl - n))
        out[left] = np.pi / (sin_pi * _gamma_right(1.0 - zl))
    if z.ndim == 0:
        return complex(out[0])
    return out.reshape(z.shape)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)
_GL_X8, _GL_W8 = np.polynomial.legendre.leggauss(8)


def euler_maclaurin_sum(
    phi: Callable[[np.ndarray], np.ndarray],
    dphi: Callable[[np.ndarray], np.ndarray],
    a: int,
    b: int,
    rel_tol: float = 1e-9,
) -> tuple[float, float]:
    """First-order Euler-Maclaurin split of sum_{a < n <= b} phi(n).

    Args:
        phi: Vectorised C^1 function.
        dphi: Its derivative.
        a: Lower integer endpoint.
        b: Upper integer endpoint, b > a.
        rel_tol: Tolerance for the 8-node vs 12-node Gauss-Legendre check.

    Returns:
        ``(main, remainder)`` with main = int_a^b phi + (phi(b) - phi(a))/2 and
        remainder = int_a^b phi'(u)({u} - 1/2) du, so that their sum equals the
        discrete sum up to quadrature error.

    Raises:
        ConvergenceError: ``quadrature-nonconvergence`` if the two Gauss
            rules disagree beyond ``rel_tol``.
    """
    a, b = int(a), int(b)
    if not a < b:
        raise InvalidParams("bad-interval", "need integers a < b")
    integral_parts, rem_parts, check_parts = [], [], []
    chunk = 200_000
    for start in range(a, b, chunk):
        stop = min(b, start + chunk)
        left = np.arange(start, stop, dtype=float)
        u = left[:, None] + 0.5 * (_GL_X[None, :] + 1.0)
        frac = 0.5 * _GL_X[None, :]  # {u} - 1/2 on a unit panel
        integral_parts.append(math.fsum(0.5 * (phi(u) @ _GL_W)))
        rem_parts.append(math.fsum(0.5 * ((dphi(u) * frac) @ _GL_W)))
        u8 = left[:, None] + 0.5 * (_GL_X8[None, :] + 1.0)
        check_parts.append(math.fsum(0.5 * ((dphi(u8) * (0.5 * _GL_X8[None, :])) @ _GL_W8)))
    integral = math.fsum(integral_parts)
    remainder = math.fsum(rem_parts)
    check = math.fsum(check_parts)
    scale = 1.0 + abs(integral) + abs(remainder)
    if abs(check - remainder) > rel_tol * scale:
        raise ConvergenceError("quadrature-nonconvergence", "Gauss rules disagree on the remainder")
    end_a = float(np.asarray(phi(np.array([float(a)])))[0])
    end_b = float(np.asarray(phi(np.array([float(b)])))[0])
    main = integral + 0.5 * (end_b - end_a)
    return main, remainder


@dataclass(frozen=True)
class TruncatedGamma:
    """Truncated gamma weight v(t) = int_0^eps0 u^{m-1} e^{-t u} du.

    Attributes:
        m: Pole order, m >= 1.
        eps0: Truncation point; its value does not affect limits.
    """

    m: int
    eps0: float = 0.5

    def __post_init__(self):
        if self.m < 1 or self.eps0 <= 0:
            raise InvalidParams("invalid-params", "need m >= 1 and eps0 > 0")


def truncated_gamma_v(tg: TruncatedGamma, t):
    """Evaluate v(t) via the regularised lower incomplete gamma function.

    v(t) = Gamma(m) P(m, eps0 t) / t^m for t > 0 and eps0^m / m at t = 0.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise InvalidParams("invalid-params", "t must be non-negative")
    m, e0 = tg.m, tg.eps0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = math.gamma(m) * sp.gammainc(m, e0 * t_arr) / t_arr ** m
    val = np.where(t_arr == 0, e0 ** m / m, val)
    return float(val) if t_arr.ndim == 0 else val


def fejer_pair(xi_or_x, which: str):
    """Fejer kernel K(xi) = (sin xi / xi)^2 and its transform partner k(x).

    Args:
        xi_or_x: Real scalar or array.
        which: ``"K"`` for the kernel, ``"k"`` for the triangle
            k(x) = (1 - |x|/2)/2 on [-2, 2].
    """
    x = np.asarray(xi_or_x, dtype=float)
    if which == "K":
        out = np.sinc(x / np.pi) ** 2
    elif which == "k":
        out = np.where(np.abs(x) <= 2.0, 0.5 * (1.0 - np.abs(x) / 2.0), 0.0)
    else:
        raise InvalidParams("invalid-params", "which must be 'K' or 'k'")
    return float(out) if x.ndim == 0 else out


SIEVE_BUDGET = 1 << 31


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, int(math.isqrt(n)) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def von_mangoldt_sieve(N: int) -> np.ndarray:
    """Tabulate Lambda(n) for 0 <= n <= N (index 0 and 1 hold 0).

    Raises:
        InvalidParams: if N < 2.
        OverflowGuard: ``overflow`` if N exceeds the index budget.
    """
    N = int(N)
    if N < 2:
        raise InvalidParams("invalid-params", "N must be at least 2")
    if N > SIEVE_BUDGET:
        raise OverflowGuard("overflow", f"N exceeds the sieve budget {SIEVE_BUDGET}")
    lam = np.zeros(N + 1, dtype=float)
    primes = primes_up_to(N)
    lam[primes] = np.log(primes.astype(float))
    for p in primes[primes <= math.isqrt(N)]:
        lp = math.log(p)
        q = int(p) * int(p)
        while q <= N:
            lam[q] = lp
            q *= int(p)
    return lam


_CACHE_MAGIC = b"TAUB"
_CACHE_VERSION = 1


def save_sieve_cache(path: str | Path, values: Sequence[float]) -> None:
    """Write a table as magic ``TAUB``, u32 version, little-endian f64 array."""
    arr = np.asarray(values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<I", _CACHE_VERSION))
        fh.write(arr.tobytes())


def load_sieve_cache(path: str | Path) -> np.ndarray:
    """Read a table written by :func:`save_sieve_cache`."""
    data = Path(path).read_bytes()
    if data[:4] != _CACHE_MAGIC:
        raise InvalidParams("bad-cache", "missing TAUB magic")
    (version,) = struct.unpack("<I", data[4:8])
    if version != _CACHE_VERSION:
        raise InvalidParams("bad-cache", f"unsupported cache version {version}")
    return np.frombuffer(data[8:], dtype="<f8").astype(float)


@dataclass
class GrowthReport:
    """Sampled ratios against a growth envelope and a stabilisation verdict.

    Attributes:
        t: Ordinates of the samples (sorted).
        sigma: Abscissae of the samples.
        ratios: |f| divided by the envelope.
        sup: Overall supremum of the ratios.
        tail_sup: Supremum over the last quartile in |t|.
        head_sup: Supremum over the first three quartiles in |t|.
        growth_ratio: tail_sup / head_sup, a diagnostic for slow drifts.
        verdict: ``"pass"``, ``"fail"`` or ``"indeterminate"``.
    """

    t: np.ndarray
    sigma: np.ndarray
    ratios: np.ndarray
    sup: float
    tail_sup: float
    head_sup: float
    growth_ratio: float
    verdict: str


def stabilisation_verdict(t, ratios, slack: float = 1.25) -> tuple[float, float, float, str]:
    """Running-supremum verdict shared by the growth and convexity checks.

    The ordinates are split at the last quartile of |t|. The verdict passes
    when every ratio is finite and the supremum over the last quartile is at
    most ``slack`` times the supremum over the earlier samples, so slow
    logarithmic drifts pass while a wrong power of |t| fails. Fewer than
    four distinct ordinates give ``"indeterminate"``.

    Returns:
        ``(tail_sup, head_sup, growth_ratio, verdict)``.
    """
    t = np.abs(np.asarray(t, dtype=float))
    ratios = np.asarray(ratios, dtype=float)
    uniq = np.unique(t)
    if uniq.size < 4:
        top = float(np.max(ratios)) if ratios.size else 0.0
        return top, top, 1.0, "indeterminate"
    cut = uniq[int(math.floor(0.75 * uniq.size))]
    tail = ratios[t >= cut]
    head = ratios[t < cut]
    tail_sup, head_sup = float(np.max(tail)), float(np.max(head))
    if head_sup > 0:
        growth = tail_sup / head_sup
    else:
        growth = 1.0 if tail_sup == 0 else math.inf
    ok = bool(np.all(np.isfinite(ratios))) and growth <= slack
    return tail_sup, head_sup, growth, "pass" if ok else "fail"


def zeta_growth_check(k: int, strip: tuple[float, float], t_grid, n_sigma: int = 3) -> GrowthReport:
    """Check |zeta^{(k)}(z)| against (1+|t|)^{1/2 - Re z} log^k(3+|t|) in a left strip.

    Args:
        k: Derivative order.
        strip: ``(b, a)`` with b <= a < 0.
        t_grid: Ordinates in [3, 200].
        n_sigma: Number of abscissae sampled across the strip.

    Returns:
        A :class:`GrowthReport`.
    """
    b, a = float(strip[0]), float(strip[1])
    t_grid = np.sort(np.atleast_1d(np.asarray(t_grid, dtype=float)))
    if not (ZETA_MIN_RE + 0.25 < b <= a < 0.0) or np.any(t_grid < 3.0) or np.any(t_grid > ZETA_MAX_IM - 0.25):
        raise DomainError("outside-supported-strip", "need -1.75 < b <= a < 0 and t in [3, 199.75]")
    sigmas = np.array([a]) if a == b else np.linspace(b, a, n_sigma)
    ts, ss, rs = [], [], []
    for t in t_grid:
        for sg in sigmas:
            z = complex(sg, t)
            val = zeta_derivative(z, k, target=1e-9)[0] if k else riemann_zeta(z)[0]
            env = (1.0 + abs(t)) ** (0.5 - sg) * math.log(3.0 + abs(t)) ** k
            ts.append(t)
            ss.append(sg)
            rs.append(abs(val) / env)
    ts, ss, rs = np.array(ts), np.array(ss), np.array(rs)
    sup = float(np.max(rs))
    tail_sup, head_sup, growth, verdict = stabilisation_verdict(ts, rs)
    return GrowthReport(ts, ss, rs, sup, tail_sup, head_sup, growth, verdict)
