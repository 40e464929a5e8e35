"""Laurent data at real poles and the residue main term x^alpha P(log x).

Near a pole of order m at alpha we write f(s) = g(s) (s - alpha)^{-m} + h(s)
with g analytic and g(alpha) != 0. The residue of f(s) x^s / s at alpha is
x^alpha P(log x) with a polynomial P of degree m - 1 whose coefficients come
from the Taylor expansion of g(s)/s at alpha.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import digamma

from . import special_fn
from .errors import ConvergenceError, DomainError, InvalidParams, SpecError

EULER_GAMMA = 0.57721566490153286061


@dataclass
class LaurentResult:
    """Laurent coefficients c_{-m}..c_K of f at alpha.

    Attributes:
        alpha: Expansion point.
        m: Pole order.
        coeffs: Array with ``coeffs[j]`` = c_{j-m}.
        errs: Node-doubling error estimates per coefficient.
        nodes: Circle nodes used.
        radius: Circle radius.
    """

    alpha: float
    m: int
    coeffs: np.ndarray
    errs: np.ndarray
    nodes: int
    radius: float

    def c(self, j: int) -> complex:
        """Coefficient c_j."""
        return complex(self.coeffs[j + self.m])


def laurent_coefficients(f: Callable, alpha: float, m: int, radius: float, nodes: int = 32,
                         kmax: int = 4, target: float = 1e-12) -> LaurentResult:
    """Laurent coefficients c_{-m}..c_{kmax} by trapezoid quadrature on |s - alpha| = radius.

    The Taylor coefficients of (s - alpha)^{m+1} f(s) are the Laurent
    coefficients shifted by m + 1, so c_{-m-1} comes out as well and must
    vanish if the order is right.

    Args:
        f: Vectorised function of complex arrays, analytic on the punctured disk.
        alpha: Pole location.
        m: Pole order, m >= 1.
        radius: Circle radius.
        nodes: Initial node count, a power of two >= 32.
        kmax: Highest regular coefficient wanted.
        target: Absolute tolerance on radius^j c_j.

    Raises:
        InvalidParams: for bad order, radius or node count.
        ConvergenceError: ``nonconvergent``.
    """
    if m < 1 or radius <= 0:
        raise InvalidParams("invalid-params", "need m >= 1 and radius > 0")
    if nodes < 32 or nodes & (nodes - 1):
        raise InvalidParams("invalid-nodes", "nodes must be a power of two >= 32")

    def shifted(w):
        return (w - alpha) ** (m + 1) * np.asarray(f(w), dtype=complex)

    try:
        taylor, errs, used = special_fn.cauchy_taylor(shifted, alpha, radius, m + 1 + kmax,
                                                     nodes=nodes, target=target)
    except ConvergenceError as exc:
        raise ConvergenceError("nonconvergent", "node doubling did not stabilise") from exc
    scale = float(np.max(np.abs(taylor * radius ** np.arange(taylor.size))))
    if abs(taylor[0]) * radius > max(1e-9 * scale, 10 * errs[0] * radius):
        raise ConvergenceError("nonconvergent", f"c_{{-{m + 1}}} is non-zero: pole order exceeds {m}")
    if abs(taylor[1]) <= 1e-9 * scale + errs[1]:
        raise ConvergenceError("nonconvergent", f"c_{{-{m}}} vanishes: pole order is below {m}")
    return LaurentResult(float(alpha), m, taylor[1:], errs[1:], used, float(radius))


@dataclass
class PoleData:
    """A real pole of order m with its analytic factor.

    Either ``g`` (a vectorised analytic function with f = g/(s-alpha)^m near
    alpha) or ``laurent`` (c_{-m}, c_{-m+1}, ...) must be given.

    Attributes:
        alpha: Pole location, > 0.
        m: Order, >= 1.
        g: Analytic factor or None.
        laurent: Laurent coefficients starting at c_{-m}, or None.
        radius: Disk radius on which g is analytic and evaluable.
        name: Bundled name, if any.
        params: Parameters the bundled pole was built with.
    """

    alpha: float
    m: int
    g: Callable | None = None
    laurent: Sequence[complex] | None = None
    radius: float = 0.25
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.alpha <= 0 or self.m < 1:
            raise InvalidParams("invalid-params", "need alpha > 0 and m >= 1")
        if self.g is None and self.laurent is None:
            raise InvalidParams("invalid-params", "pole data needs g or Laurent coefficients")
        if self.laurent is not None and abs(complex(self.laurent[0])) == 0:
            raise InvalidParams("invalid-params", "leading Laurent coefficient must be non-zero")

    def g_taylor(self, kmax: int, radius: float | None = None) -> np.ndarray:
        """Taylor coefficients of g at alpha up to order kmax."""
        if self.laurent is not None and len(self.laurent) > kmax:
            return np.asarray(self.laurent[:kmax + 1], dtype=complex)
        if self.g is None:
            raise ConvergenceError("extraction-failure",
                                   f"only {len(self.laurent)} Laurent coefficients supplied, need {kmax + 1}")
        rho = min(self.radius, 0.5 * self.alpha) if radius is None else radius
        coeffs, _, _ = special_fn.cauchy_taylor(self.g, self.alpha, rho, kmax, target=1e-13)
        return coeffs

    def leading(self) -> float:
        """g(alpha) (the leading Laurent coefficient c_{-m})."""
        return float(np.real(self.g_taylor(0)[0]))

    def to_json(self) -> dict:
        out = {"alpha": self.alpha, "m": self.m}
        if self.name:
            out["g"] = self.name
            if self.params:
                out["params"] = dict(self.params)
        elif self.laurent is not None:
            out["laurent"] = [complex(c).real for c in self.laurent]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PoleData":
        """Parse ``{"alpha", "m", "laurent"}`` or ``{"alpha", "m", "g": name, "params"}``."""
        if "g" in obj:
            return bundled_pole(obj["g"], **obj.get("params", {}))
        return cls(float(obj["alpha"]), int(obj["m"]), laurent=[float(c) for c in obj["laurent"]])


@dataclass
class ResiduePolynomial:
    """P(u) = sum_j d_j u^j of the residue main term.

    Attributes:
        coeffs: d_0, ..., d_{m-1}.
    """

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __call__(self, u):
        return np.polynomial.polynomial.polyval(u, self.coeffs)


def residue_polynomial(pd: PoleData, radius: float | None = None) -> ResiduePolynomial:
    """Coefficients d_j = e_{m-1-j} / j! with e_k the Taylor coefficients of g(s)/s at alpha.

    This gives d_{m-1} = g(alpha)/(alpha (m-1)!).

    Raises:
        ConvergenceError: ``extraction-failure`` when Laurent data is too short.
    """
    m = pd.m
    gt = pd.g_taylor(m - 1, radius)
    inv = np.array([(-1.0) ** k / pd.alpha ** (k + 1) for k in range(m)])
    e = np.array([np.sum(gt[:k + 1] * inv[k::-1]) for k in range(m)])
    d = np.array([e[m - 1 - j] / math.factorial(j) for j in range(m)])
    return ResiduePolynomial(np.real(d))


def main_term(pd: PoleData, x: float, y: float | None = None,
              poly: ResiduePolynomial | None = None) -> float:
    """x^alpha P(log x), or its difference with the value at y.

    Raises:
        InvalidParams: if x < 2 or y is outside (0, x).
    """
    if x < 2:
        raise InvalidParams("invalid-params", "x must be at least 2")
    poly = residue_polynomial(pd) if poly is None else poly
    value = x ** pd.alpha * float(poly(math.log(x)))
    if y is None:
        return value
    if not 0 < y < x:
        raise InvalidParams("invalid-params", "need 0 < y < x")
    return value - y ** pd.alpha * float(poly(math.log(y)))


# Named analytic factors.

def _zeta(w):
    return special_fn.zeta_values(w)[0]


def _g_zeta(w):
    return (w - 1.0) * _zeta(w)


def _g_zeta2(w):
    return ((w - 1.0) * _zeta(w)) ** 2


def _mobius_upto(n: int) -> list[int]:
    mu = [1] * (n + 1)
    for p in special_fn.primes_up_to(n).tolist():
        for k in range(p, n + 1, p):
            mu[k] = -mu[k]
        for k in range(p * p, n + 1, p * p):
            mu[k] = 0
    return mu


_SMALL_Q = 100


def _prime_zeta_tail(w: np.ndarray, primes: np.ndarray, n_terms: int = 40) -> np.ndarray:
    """sum_{p > Q} p^{-w} via Moebius inversion of log zeta with small primes removed."""
    mu = _mobius_upto(n_terms)
    out = np.zeros_like(w)
    logp = np.log(primes.astype(float))
    for n in range(1, n_terms + 1):
        if mu[n] == 0:
            continue
        nw = n * w
        if np.all(nw.real * math.log(_SMALL_Q + 1) > 40.0):
            break
        zeta_minus = _zeta(nw) * np.prod(1.0 - np.exp(-np.outer(nw, logp)), axis=1)
        out = out + mu[n] / n * np.log(zeta_minus)
    return out


def divisor2_h(w) -> np.ndarray:
    """H(s) = prod_p (1 + 2p^{-s})(1 - p^{-s})^2, analytic for Re(s) > 1/2.

    Primes up to 100 are multiplied out directly. For larger primes
    log[(1+2x)(1-x)^2] = sum_{k>=2} b_k x^k with b_k = (-(-2)^k - 2)/k, and
    each power sum over p > 100 is a prime zeta tail.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if np.any(w.real <= 0.6):
        raise DomainError("outside-supported-strip", "H is evaluated only for Re(s) > 0.6")
    primes = special_fn.primes_up_to(_SMALL_Q)
    x = np.exp(-np.outer(w, np.log(primes.astype(float))))
    head = np.prod((1.0 + 2.0 * x) * (1.0 - x) ** 2, axis=1)
    log_tail = np.zeros_like(w)
    for k in range(2, 80):
        b = (-(-2.0) ** k - 2.0) / k
        term = b * _prime_zeta_tail(k * w, primes)
        log_tail = log_tail + term
        if np.max(np.abs(term)) < 1e-17:
            break
    return head * np.exp(log_tail)


def _g_divisor2(w):
    return _g_zeta2(w) * divisor2_h(w)


def _zeta_regular_taylor(kmax: int) -> np.ndarray:
    """Coefficients c_k of zeta(w) - 1/(w-1) = sum_k c_k (w-1)^k."""
    coeffs, _, _ = special_fn.cauchy_taylor(_g_zeta, 1.0, 0.5, kmax + 1, nodes=64, target=1e-14)
    return np.real(coeffs[1:])


def zetaderiv_laurent(alpha: float, q: float, m: int, kmax: int = 4) -> list[float]:
    """Laurent data of (-1)^{m-1} zeta^{(m-1)}(1 + q(s - alpha)) at s = alpha.

    Returns c_{-m}, ..., c_{kmax - m}.
    """
    c = _zeta_regular_taylor(kmax + m + 1)
    k1 = m - 1
    sign = (-1.0) ** k1
    out = []
    for j in range(kmax + 1):
        # coefficient of (s - alpha)^{j - m}
        if j == 0:
            val = sign * (-1.0) ** k1 * math.factorial(k1) / q ** m
        elif j < m:
            val = 0.0
        else:
            p = j - m  # power of u = w - 1 in the differentiated regular part
            kk = p + k1
            val = sign * c[kk] * math.factorial(kk) / math.factorial(p) * q ** p
        out.append(val)
    return out


def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = [f for f in special_fn.primes_up_to(phi).tolist() if phi % f == 0]
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    return 1


def cyclotomic_residue(ell: int) -> float:
    """prod over non-trivial characters chi mod ell of L(1, chi), ell prime."""
    if ell == 2:
        return 1.0
    g = _primitive_root(ell)
    log_table = {}
    acc = 1
    for k in range(ell - 1):
        log_table[acc] = k
        acc = acc * g % ell
    psi = {a: float(digamma(a / ell)) for a in range(1, ell)}
    prod = 1.0 + 0j
    for j in range(1, ell - 1):
        total = sum(cmath.exp(2j * math.pi * j * log_table[a] / (ell - 1)) * psi[a] for a in range(1, ell))
        prod *= -total / ell
    return float(prod.real)


def kluners_constant(ell: int, d: int, e: int, p_max: int = 1_000_000) -> float:
    """Leading constant c with S(x) ~ c x^{1/d} (log x)^{e-1} for the prime-restricted product.

    The series is prod over p = ell or p = 1 mod ell of (1 + m p^{-ds}) with
    m = e(ell - 1). Comparing with the e-th power of the Dedekind zeta
    function of the ell-th cyclotomic field leaves a convergent product
    H(1) over primes.
    """
    m = e * (ell - 1)
    primes = special_fn.primes_up_to(p_max).astype(float)
    ip = primes.astype(np.int64)
    logs = np.zeros_like(primes)
    one = ip % ell == 1
    logs[one] = np.log1p(m / primes[one]) + m * np.log1p(-1.0 / primes[one])
    ram = ip == ell
    logs[ram] = math.log1p(m / ell) + e * math.log1p(-1.0 / ell)
    other = ~(one | ram)
    orders = np.array([_mult_order(int(p), ell) for p in ip[other]])
    logs[other] = (e * (ell - 1) / orders) * np.log1p(-primes[other] ** (-orders.astype(float)))
    h1 = math.exp(math.fsum(logs.tolist()))
    res = cyclotomic_residue(ell)
    return (res / d) ** e * h1 * d / math.factorial(e - 1)


def _mult_order(p: int, ell: int) -> int:
    k, acc = 1, p % ell
    while acc != 1:
        acc = acc * p % ell
        k += 1
    return k


def bundled_pole(name: str, **params) -> PoleData:
    """Pole data for the bundled series: ``one``, ``zeta``, ``zeta2``, ``divisor2``, ``zetaderiv``, ``kluners``.

    ``one`` is g = 1 with configurable alpha and m.
    """
    pd = _bundled_pole(name, **params)
    pd.params = dict(params)
    return pd


def _bundled_pole(name: str, **params) -> PoleData:
    if name == "one":
        alpha = float(params.get("alpha", 1.0))
        m = int(params.get("m", 1))
        return PoleData(alpha, m, g=lambda w: np.ones_like(np.asarray(w, dtype=complex)), name=name)
    if name in ("zeta", "vonmangoldt"):
        return PoleData(1.0, 1, g=_g_zeta, radius=0.5, name=name)
    if name == "zeta2":
        return PoleData(1.0, 2, g=_g_zeta2, radius=0.5, name=name)
    if name == "divisor2":
        return PoleData(1.0, 2, g=_g_divisor2, radius=0.25, name=name)
    if name == "zetaderiv":
        alpha = float(params.get("alpha", 1.0))
        delta = float(params.get("delta", 0.5))
        r = float(params["r"]) if "r" in params else float(params.get("kappa", 1.5)) + 0.5
        m = int(params.get("m", 1))
        q = r / delta
        return PoleData(alpha, m, laurent=zetaderiv_laurent(alpha, q, m), name=name)
    if name == "kluners":
        ell, d, e = int(params.get("ell", 3)), int(params.get("d", 2)), int(params.get("e", 1))
        alpha = 1.0 / d
        c = kluners_constant(ell, d, e)
        lead = c * alpha * math.factorial(e - 1)
        return PoleData(alpha, e, laurent=[lead], name=name)
    raise SpecError("unsupported-spec", f"unknown pole function {name!r}")
