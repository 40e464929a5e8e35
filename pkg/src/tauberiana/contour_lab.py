"""Contour machinery: smoothed Perron integrals, contour shifts, vertical growth.

Line integrals (1/2 pi i) int_{(sigma)} A(s) phi_hat(s) ds are truncated at a
height T derived in closed form from the decay of phi_hat and a declared
growth bound for A, then integrated with composite Gauss-Legendre rules.

The Gaussian integrals J_k(beta) = int_0^inf u^k e^{2 beta u - u^2} du are
evaluated along the steepest-descent path of e^{-v^2}: with
K(beta) = (1/2) int_0^inf e^{-rho} (beta^2 + rho)^{-1/2} d rho we have
J_0 = K for Re(beta) < 0 and J_0 = sqrt(pi) e^{beta^2} - K for Re(beta) > 0,
while J_1 = 1/2 + beta J_0. Near the imaginary axis a direct quadrature of the
defining integral is used instead.
"""

from __future__ import annotations

import cmath
import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from . import residue_engine, series_core, smoothing, special_fn
from .errors import BudgetError, DomainError, InvalidParams, OverflowGuard

SQRT_PI = math.sqrt(math.pi)
EXP_LIMIT = 600.0
EPS = 2.0 ** -52
_GL = {n: np.polynomial.legendre.leggauss(n) for n in (8, 12, 16, 20, 24, 32)}


@dataclass(frozen=True)
class HypothesisB:
    """Growth hypothesis |A(s)| <= C (1+|Im s|)^kappa log(3+|Im s|)^{m-1} on alpha - delta <= Re s.

    Attributes:
        alpha: Pole location.
        delta: Width of the strip left of alpha, in (0, alpha).
        kappa: Growth exponent.
        m: Pole order.
        C: Growth constant, >= 1.
    """

    alpha: float
    delta: float
    kappa: float
    m: int = 1
    C: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and 0 < self.delta < self.alpha and self.kappa > 0
                and self.m >= 1 and self.C >= 1):
            raise InvalidParams("invalid-params", "need alpha > 0, 0 < delta < alpha, kappa > 0, m >= 1, C >= 1")


@dataclass
class LineIntegralResult:
    """A truncated vertical line integral with its error budget.

    Attributes:
        value: Integral over |Im s| <= T.
        T: Truncation height.
        tail: Bound on the discarded part |Im s| > T.
        quad_err: Quadrature error estimate.
    """

    value: complex
    T: float
    tail: float
    quad_err: float

    @property
    def total_error(self) -> float:
        return self.tail + self.quad_err


@dataclass
class AnalyticEvaluator:
    """A Dirichlet series with analytic continuation and a declared growth bound.

    Attributes:
        name: Identifier.
        func: Vectorised evaluator on complex arrays.
        growth: sigma -> (C, kappa, log_power) with
            |A(sigma+it)| <= C (1+|t|)^kappa log(3+|t|)^log_power.
        max_height: Largest |Im s| the evaluator supports.
        pole: Pole data at the real pole.
        coefficients: x_max -> (lam, a) for direct sums.
    """

    name: str
    func: Callable
    growth: Callable
    max_height: float
    pole: residue_engine.PoleData | None = None
    coefficients: Callable | None = None

    def __call__(self, s):
        return self.func(s)


def _zeta_growth(sigma: float) -> tuple[float, float, float]:
    if sigma > 1.05:
        return float(special_fn.riemann_zeta(sigma)[0].real), 0.0, 0.0
    if 0.5 <= sigma <= 0.95:
        return 3.0, 0.5, 0.0
    raise DomainError("outside-supported-strip", f"no growth bound declared on Re(s) = {sigma}")


def _zeta_coefficients(x_max: float):
    st = series_core.enumerate_terms(series_core.bundled_spec("zeta"), x_max)
    return st.lam, st.a


def _divisor_coefficients(x_max: float):
    deg = max(1, int(math.log2(max(x_max, 2.0))) + 1)
    spec = series_core.SeriesSpec("euler-product", {"local": [float(k + 1) for k in range(deg + 1)]})
    st = series_core.enumerate_terms(spec, x_max)
    return st.lam, st.a


def zeta_evaluator() -> AnalyticEvaluator:
    """zeta(s) with growth C = 3, kappa = 1/2 on 1/2 <= Re s <= 0.95."""
    return AnalyticEvaluator("zeta", lambda s: special_fn.zeta_values(s)[0], _zeta_growth,
                             special_fn.ZETA_MAX_IM, residue_engine.bundled_pole("zeta"), _zeta_coefficients)


def zeta2_evaluator() -> AnalyticEvaluator:
    """zeta(s)^2, the generating series of the divisor function."""

    def growth(sigma):
        c, k, lp = _zeta_growth(sigma)
        return c * c, 2 * k, 2 * lp

    return AnalyticEvaluator("zeta2", lambda s: special_fn.zeta_values(s)[0] ** 2, growth,
                             special_fn.ZETA_MAX_IM, residue_engine.bundled_pole("zeta2"), _divisor_coefficients)


def _tail_height(c_total: float, kappa: float, ell: int, log_power: float, target: float, t_min: float) -> float:
    """Smallest T >= t_min with c_total log(3+T)^lp T^{kappa'-ell}/(ell-kappa') <= target.

    kappa' = kappa + lp/log(3+T) absorbs the logarithm (two passes).
    """
    T = t_min
    for _ in range(3):
        kp = kappa + (log_power / math.log(3.0 + T) if log_power else 0.0)
        if ell <= kp:
            raise BudgetError("budget-unachievable", "weight decay does not beat the growth exponent")
        logf = math.log(3.0 + T) ** log_power if log_power else 1.0
        T_new = (c_total * logf / ((ell - kp) * target)) ** (1.0 / (ell - kp))
        T = max(t_min, T_new)
    return T


def _tail_bound(c_total: float, kappa: float, ell: int, log_power: float, T: float) -> float:
    kp = kappa + (log_power / math.log(3.0 + T) if log_power else 0.0)
    logf = math.log(3.0 + T) ** log_power if log_power else 1.0
    return c_total * logf * T ** (kp - ell) / (ell - kp)


def _line_quadrature(func: Callable, T: float, nodes: tuple[int, int] = (16, 24), width: float = 1.0):
    """int_{-T}^{T} func(t) dt with two Gauss rules on shared panels."""
    n_panels = max(2, int(math.ceil(2 * T / width)))
    edges = np.linspace(-T, T, n_panels + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    out = []
    for n in nodes:
        x, w = _GL[n]
        t = (mids[:, None] + half[:, None] * x[None, :]).ravel()
        vals = np.asarray(func(t), dtype=complex).reshape(n_panels, n)
        per_panel = half * (vals @ w)
        out.append((complex(math.fsum(per_panel.real.tolist()), math.fsum(per_panel.imag.tolist())),
                    float(np.sum(np.abs(vals) @ w * half))))
    (coarse, _), (fine, mag) = out
    return fine, abs(fine - coarse) + 64 * EPS * mag


def perron_smoothed(A: AnalyticEvaluator, weight: smoothing.WeightParams, sigma: float,
                    budget: float, height: float | None = None) -> LineIntegralResult:
    """(1/2 pi i) int_{(sigma)} A(s) phi_hat(s) ds, truncated so the tail is at most budget/2.

    The tail uses |phi_hat(s)| <= X^sigma (ell/(eps|s|))^ell (2/|s|) with
    X = e^{2 eps} x (the Mellin growth bound of the weight) and the declared growth of A.
    Passing ``height`` overrides the selected truncation height.

    Raises:
        BudgetError: ``budget-unachievable`` when ell does not exceed the
            growth exponent or the height exceeds the evaluator's range.
    """
    if budget <= 0:
        raise InvalidParams("invalid-params", "budget must be positive")
    C, kappa, lp = A.growth(sigma)
    ell, eps = weight.ell, weight.eps
    top = weight.x * math.exp(2 * eps) if weight.sign == "+" else weight.x
    # tail <= (1/pi) int_T^inf C (1+t)^kappa L^lp X^sigma (ell/eps)^ell 2 t^{-ell-1} dt
    c_total = abs(weight.scale) * 2.0 * C * top ** sigma * (ell / eps) ** ell / math.pi
    t_min = ell / eps
    if c_total == 0:
        T = t_min if height is None else float(height)
        tail = 0.0
    else:
        c_total *= (1.0 + 1.0 / t_min) ** kappa
        if height is None:
            T = _tail_height(c_total, kappa, ell, lp, 0.5 * budget, t_min)
            # the closed form can land a rounding error above the target
            while _tail_bound(c_total, kappa, ell, lp, T) > 0.5 * budget:
                T *= 1.0 + 1e-9
        else:
            T = float(height)
        tail = _tail_bound(c_total, kappa, ell, lp, T)
    if T > A.max_height:
        raise BudgetError("budget-unachievable", f"height {T:.1f} exceeds the evaluator range {A.max_height}")

    def integrand(t):
        s = sigma + 1j * t
        return A(s) * smoothing.weight_mellin(weight, s) / (2.0 * math.pi)

    value, qerr = _line_quadrature(integrand, T)
    return LineIntegralResult(value, T, tail, qerr)


def smoothed_sum(A: AnalyticEvaluator, weight: smoothing.WeightParams) -> tuple[float, float]:
    """sum_n a_n phi(lambda_n) by direct summation over the weight's support."""
    w = smoothing.build_weight(weight)
    lo, hi = w.support
    if hi < 1:
        return 0.0, 0.0
    lam, a = A.coefficients(hi)
    vals = a * w(lam)
    value = math.fsum(np.real(vals).tolist())
    return value, EPS * (math.fsum(np.abs(vals).tolist()) + abs(value)) * 4


@dataclass
class ContourShiftReport:
    """Pieces of sum a_n phi(lambda_n) = Res + (1/2 pi i) int_{(alpha - delta)}.

    Attributes:
        smoothed_sum: Direct sum.
        residue: Residue of A phi_hat at alpha.
        residue_err: Its node-doubling error.
        line: Shifted line integral.
        residual: |smoothed_sum - residue - line|.
        budget: Declared error budget.
        error_estimate: Sum of the reported errors of the three pieces.
    """

    smoothed_sum: float
    residue: complex
    residue_err: float
    line: LineIntegralResult
    residual: float
    budget: float
    error_estimate: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.budget and self.error_estimate <= self.budget


def pole_residue(A: AnalyticEvaluator, pd: residue_engine.PoleData, weight: smoothing.WeightParams,
                 radius: float) -> tuple[complex, float]:
    """Res_{s=alpha} A(s) phi_hat(s) by trapezoid quadrature on a circle."""

    def h(w):
        return (w - pd.alpha) * A(w) * smoothing.weight_mellin(weight, w)

    coeffs, errs, _ = special_fn.cauchy_taylor(h, pd.alpha, radius, 0, nodes=64, target=1e-13, max_nodes=4096)
    return complex(coeffs[0]), float(errs[0]) + 1e-13 * float(np.max(np.abs(coeffs)))


def contour_shift_check(A: AnalyticEvaluator, pd: residue_engine.PoleData, hyp: HypothesisB,
                        weight: smoothing.WeightParams, budget: float = 1e-4) -> ContourShiftReport:
    """Compare the smoothed sum with the residue plus the line integral on Re s = alpha - delta.

    The residue circle has radius min(delta/2, 1/log x) as in the
    contour argument. Half the budget goes to the line integral tail.
    """
    line = perron_smoothed(A, weight, hyp.alpha - hyp.delta, budget)
    radius = min(hyp.delta / 2, 1.0 / math.log(max(weight.x, math.e)))
    res, res_err = pole_residue(A, pd, weight, radius)
    ssum, s_err = smoothed_sum(A, weight)
    residual = abs(ssum - res - line.value)
    total = line.total_error + res_err + s_err
    return ContourShiftReport(ssum, res, res_err, line, residual, budget, total)


def phragmen_lindelof_bound(a: float, b: float, Ca: float, Aexp: float, Cb: float, Bexp: float,
                            sigma: float, t: float) -> float:
    """C_a^l C_b^{1-l} (1+|t|)^{Aexp l + Bexp (1-l)} with l = (b - sigma)/(b - a).

    Raises:
        DomainError: ``bad-strip`` unless a < b, a <= sigma <= b and Aexp >= Bexp.
    """
    if not (a < b and a <= sigma <= b and Aexp >= Bexp and Ca > 0 and Cb > 0):
        raise DomainError("bad-strip", "need a < b, a <= sigma <= b, Aexp >= Bexp and positive constants")
    lam = (b - sigma) / (b - a)
    return Ca ** lam * Cb ** (1.0 - lam) * (1.0 + abs(t)) ** (Aexp * lam + Bexp * (1.0 - lam))


@dataclass
class ConvexityReport:
    """Ratios of |(s-alpha)^m (s+alpha)^{-m} A(s)| to the interpolated envelope.

    Attributes:
        samples: Points sampled.
        ratios: Ratio per sample.
        sup: Largest ratio.
        growth_ratio: Last-quartile sup over earlier sup in |Im s|.
        verdict: ``"pass"``, ``"fail"`` or ``"indeterminate"``.
    """

    samples: np.ndarray
    ratios: np.ndarray
    sup: float
    growth_ratio: float
    verdict: str


def convexity_ratio_check(A: AnalyticEvaluator, pd: residue_engine.PoleData, eta: float,
                          strip_samples, hyp: HypothesisB) -> ConvexityReport:
    """Check the pole-cancelled function against (1+|t|)^{(kappa+eta)(alpha - sigma + eta)/(delta + eta)}.

    Raises:
        DomainError: if a sample leaves alpha - delta <= Re s <= alpha + eta.
    """
    s = np.atleast_1d(np.asarray(strip_samples, dtype=complex))
    lo, hi = hyp.alpha - hyp.delta, pd.alpha + eta
    if np.any(s.real < lo - 1e-12) or np.any(s.real > hi + 1e-12):
        raise DomainError("outside-supported-strip", "samples must satisfy alpha - delta <= Re s <= alpha + eta")
    m = pd.m
    vals = np.abs(((s - pd.alpha) / (s + pd.alpha)) ** m * A(s))
    expo = (hyp.kappa + eta) * (pd.alpha - s.real + eta) / (hyp.delta + eta)
    ratios = vals / (1.0 + np.abs(s.imag)) ** expo
    _, _, growth, verdict = special_fn.stabilisation_verdict(s.imag, ratios)
    return ConvexityReport(s, ratios, float(np.max(ratios)), growth, verdict)


# Gaussian integrals along rotated rays.

def _check_exponent(beta: complex) -> None:
    if (beta * beta).real > EXP_LIMIT:
        raise OverflowGuard("overflow", f"e^(beta^2) exceeds e^{EXP_LIMIT:.0f}")


def _k_integral(beta: complex, nodes: int) -> complex:
    """(1/2) int_0^inf e^{-rho} (beta^2 + rho)^{-1/2} d rho on panels of width 2 up to 50."""
    x, w = _GL[nodes]
    edges = np.arange(0.0, 52.0, 2.0)
    rho = ((edges[:-1] + edges[1:])[:, None] / 2 + x[None, :]).ravel()
    vals = np.exp(-rho) / np.sqrt(beta * beta + rho)
    return complex(0.5 * np.sum(vals.reshape(-1, nodes) @ w))


def _direct_integral(k: int, beta: complex, nodes: int) -> complex:
    """int_0^U u^k e^{2 beta u - u^2} du on panels resolving the oscillation."""
    a, b = beta.real, beta.imag
    upper = max(a, 0.0) + 9.0
    n_panels = int(math.ceil(upper * (1.0 + abs(b)) / 1.5))
    x, w = _GL[nodes]
    edges = np.linspace(0.0, upper, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    u = ((edges[1:] + edges[:-1])[:, None] / 2 + half[:, None] * x[None, :])
    vals = u ** k * np.exp(2 * beta * u - u * u)
    return complex(np.sum(half * (vals @ w)))


def gaussian_integral(k: int, beta: complex) -> tuple[complex, float]:
    """J_k(beta) = int_0^inf u^k e^{2 beta u - u^2} du for k in {0, 1}, with an error estimate.

    Raises:
        OverflowGuard: when Re(beta^2) > 600 and e^{beta^2} is needed.
    """
    beta = complex(beta)
    if k not in (0, 1):
        raise InvalidParams("invalid-order", "k must be 0 or 1")
    if abs(beta.real) < 2.0:
        if beta.real > 0:
            _check_exponent(beta)
        coarse, fine = _direct_integral(k, beta, 16), _direct_integral(k, beta, 24)
        scale = math.exp(max(beta.real, 0.0) ** 2) * (1.0 + abs(beta)) ** k
        return fine, abs(fine - coarse) + 1e-14 * scale
    coarse, fine = _k_integral(beta, 16), _k_integral(beta, 24)
    err = abs(fine - coarse) + 1e-15 * abs(fine)
    if beta.real > 0:
        _check_exponent(beta)
        big = SQRT_PI * cmath.exp(beta * beta)
        j0 = big - fine
        err += 4 * EPS * abs(big)
    else:
        j0 = fine
    if k == 0:
        return j0, err
    return 0.5 + beta * j0, abs(beta) * err + EPS * abs(beta * j0)


def j_gaussian(k: int, beta: complex, C: float = 4.0) -> tuple[complex, complex, float]:
    """J_k(beta) by stable quadrature, the asymptotic beta^k sqrt(pi) e^{beta^2}, and the lemma bound.

    The bound on |J_k - beta^k sqrt(pi) e^{beta^2}| is |beta|/(2a^2) for k = 0
    and C|beta|^2 (1/a^2 + 1/a^4) for k = 1, with a = Re(beta). It holds for
    a > 0. For a < 0 the reflection J_k(beta) - (-1)^k J_k(-beta) =
    beta^k sqrt(pi) e^{beta^2} makes the discrepancy equal to -(-1)^k J_k(-beta),
    which is of size sqrt(pi) |beta|^k e^{Re beta^2} and exceeds the bound once
    |Re beta| > |Im beta|.

    Raises:
        InvalidParams: ``degenerate-beta`` if Re(beta) Im(beta) = 0.
    """
    beta = complex(beta)
    if beta.real * beta.imag == 0:
        raise InvalidParams("degenerate-beta", "need Re(beta) Im(beta) != 0")
    _check_exponent(beta)
    quad, _ = gaussian_integral(k, beta)
    asym = beta ** k * SQRT_PI * cmath.exp(beta * beta)
    a = beta.real
    if k == 0:
        bound = abs(beta) / (2 * a * a)
    else:
        bound = C * abs(beta) ** 2 * (1 / a ** 2 + 1 / a ** 4)
    return quad, asym, bound


def _ray_beta(sign: str, s: complex) -> tuple[complex, complex]:
    if sign not in ("+", "-"):
        raise InvalidParams("invalid-params", "sign must be '+' or '-'")
    rot = cmath.exp(1j * math.pi / 4) if sign == "+" else cmath.exp(-1j * math.pi / 4)
    return rot, (1.0 - complex(s)) * rot / 2.0


def ray_integral_I(sign: str, s: complex) -> complex:
    """I_{+-}(s) = int_0^inf exp{(1-s)u +- i u^2} du, continued to all s via the rotated ray.

    On u = v e^{+-i pi/4} the integrand becomes exp{(1-s) v e^{+-i pi/4} - v^2},
    so I_{+-}(s) = e^{+-i pi/4} J_0(beta) with beta = (1-s) e^{+-i pi/4}/2.
    """
    rot, beta = _ray_beta(sign, s)
    return rot * gaussian_integral(0, beta)[0]


def ray_integral_I_prime(sign: str, s: complex) -> complex:
    """d/ds I_{+-}(s) = -e^{+-i pi/2} J_1(beta), differentiated under the integral."""
    rot, beta = _ray_beta(sign, s)
    return -rot * rot * gaussian_integral(1, beta)[0]


# The oscillating counterexample series b_n = 1 + cos(log^2 n) and its log-weighted partner.

@lru_cache(maxsize=8)
def _b_prefix(n_max: int) -> tuple[np.ndarray, np.ndarray, float]:
    n = np.arange(1, n_max + 1, dtype=float)
    ln = np.log(n)
    b = 1.0 + np.cos(ln * ln)
    return ln, b, math.fsum(b.tolist())


def _f_integral(s: complex, upper: float, log_power: int) -> complex:
    """int_1^{e^upper} (1 + cos log^2 t) (log t)^p t^{-s} dt in u = log t."""
    if upper <= 0:
        return 0.0
    freq = abs(s.imag) + 2.0 * upper + 1.0
    n_panels = int(math.ceil(upper * freq / 2.0)) + 1
    x, w = _GL[20]
    edges = np.linspace(0.0, upper, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    u = (edges[1:] + edges[:-1])[:, None] / 2 + half[:, None] * x[None, :]
    vals = (1.0 + np.cos(u * u)) * u ** log_power * np.exp((1.0 - s) * u)
    per = half * (vals @ w)
    return complex(math.fsum(per.real.tolist()), math.fsum(per.imag.tolist()))


def _log_moment_tail(X: float, sigma: float, k: int) -> float:
    """int_X^inf (log t)^k t^{-sigma-1} dt."""
    L = math.log(X)
    total = 0.0
    for j in range(k + 1):
        total += math.factorial(k) / math.factorial(k - j) * L ** (k - j) / sigma ** (j + 1)
    return X ** (-sigma) * total


R_CONSTANT = 3.0  # |R(t)| <= 3 log^2 t for t >= 10


def _continued_parts(s: complex, X: float, derivative: bool) -> tuple[complex, float]:
    s = complex(s)
    if s == 1:
        raise DomainError("pole-at-one", "s = 1 is a pole")
    if s.real <= 0:
        raise DomainError("positive-real-part-required", "the continuation needs Re(s) > 0")
    if X < 10:
        raise InvalidParams("invalid-params", "X must be at least 10")
    N = int(math.floor(X))
    ln, b, s_n = _b_prefix(N)
    U = math.log(N)
    # R(N) = S(N) - int_1^N (1 + cos log^2 t) dt
    r_n = s_n - _f_integral(0j, U, 0).real
    ns = np.exp(-s * ln)
    sig = s.real
    if not derivative:
        head = b * ns
        direct = complex(math.fsum(head.real.tolist()), math.fsum(head.imag.tolist()))
        rays = 0.5 * (ray_integral_I("+", s) + ray_integral_I("-", s))
        value = direct + 1.0 / (s - 1.0) + rays - _f_integral(s, U, 0) - r_n * N ** (-s)
        tail = R_CONSTANT * abs(s) * _log_moment_tail(N, sig, 2)
    else:
        head = b * ln * ns
        direct = complex(math.fsum(head.real.tolist()), math.fsum(head.imag.tolist()))
        rays = 0.5 * (ray_integral_I_prime("+", s) + ray_integral_I_prime("-", s))
        value = direct + 1.0 / (s - 1.0) ** 2 - rays - _f_integral(s, U, 1) - r_n * U * N ** (-s)
        tail = R_CONSTANT * (_log_moment_tail(N, sig, 2) + abs(s) * _log_moment_tail(N, sig, 3))
    rounding = 1e-14 * (float(np.sum(np.abs(head))) + abs(value))
    return value, tail + rounding


def continued_B(s: complex, X: float = 1e5) -> tuple[complex, float]:
    """Continuation of B(s) = sum (1 + cos log^2 n) n^{-s} to Re(s) > 0.

    With N = floor(X), B(s) = sum_{n<=N} b_n n^{-s} + 1/(s-1) + (I_+ + I_-)/2
    - int_1^N f t^{-s} dt - R(N) N^{-s} + s int_N^inf R(t) t^{-s-1} dt, where
    f = 1 + cos log^2 t and R is the counting remainder. The last integral is
    bounded by 3|s| int_N^inf log^2 t t^{-Re s - 1} dt and returned as the error.

    Raises:
        DomainError: ``pole-at-one`` or ``positive-real-part-required``.
    """
    return _continued_parts(s, X, derivative=False)


def continued_A(s: complex, X: float = 1e5) -> tuple[complex, float]:
    """Continuation of A(s) = -B'(s) = sum (log n)(1 + cos log^2 n) n^{-s} to Re(s) > 0.

    Raises:
        DomainError: ``pole-at-one`` or ``positive-real-part-required``.
    """
    return _continued_parts(s, X, derivative=True)


@dataclass
class GrowthProfile:
    """|A(1 - delta + it)| against (sqrt(pi)/4)|t| e^{delta|t|/2}.

    Attributes:
        delta: Distance left of the line Re s = 1.
        t: Ordinates.
        values: |A|.
        envelope: The asymptotic envelope.
        ratios: values / envelope.
        c_fit: Least-squares c in ratio - 1 ~ c/|t|.
        verdict: ``"pass"`` if every ratio lies within c_fit/|t| +- 0.1 of 1.
    """

    delta: float
    t: np.ndarray
    values: np.ndarray
    envelope: np.ndarray
    ratios: np.ndarray
    c_fit: float
    verdict: str

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "abs_A", "envelope", "ratio"])
            for row in zip(self.t, self.values, self.envelope, self.ratios):
                w.writerow([repr(float(v)) for v in row])


def vertical_growth_profile(delta: float, t_grid, X: float = 1e6, threads: int = 1) -> GrowthProfile:
    """Growth of the continued A on the line Re s = 1 - delta.

    Raises:
        InvalidParams: if delta is outside (0, 1) or t leaves [10, 80] in modulus.
        OverflowGuard: if delta|t|/2 > 600.
    """
    t = np.asarray(t_grid, dtype=float)
    if not 0 < delta < 1:
        raise InvalidParams("invalid-params", "delta must lie in (0, 1)")
    if np.any(np.abs(t) < 10) or np.any(np.abs(t) > 80):
        raise InvalidParams("invalid-params", "t values must satisfy 10 <= |t| <= 80")
    if np.any(delta * np.abs(t) / 2 > EXP_LIMIT):
        raise OverflowGuard("overflow", "envelope exceeds the floating-point range")

    def one(tv):
        return abs(continued_A(complex(1.0 - delta, tv), X)[0])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = np.array(list(pool.map(one, t.tolist())))
    else:
        vals = np.array([one(tv) for tv in t.tolist()])
    env = SQRT_PI / 4 * np.abs(t) * np.exp(delta * np.abs(t) / 2)
    ratios = vals / env
    inv = 1.0 / np.abs(t)
    c_fit = float(np.dot(ratios - 1.0, inv) / np.dot(inv, inv))
    ok = bool(np.all(np.abs(ratios - 1.0 - c_fit * inv) <= 0.1))
    return GrowthProfile(delta, t, vals, env, ratios, c_fit, "pass" if ok else "fail")
