"""Smooth majorant and minorant weights for the indicator of [y, x].

Everything is built in the logarithmic coordinate u = log t, where
multiplicative convolution f * g (Haar measure dt/t) becomes ordinary
additive convolution. A weight is a box convolved with ell copies of a
normalised box of half-width eps/ell, an exact piecewise polynomial of
degree ell with ell - 1 continuous derivatives.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidParams

SMALL = 1e-4


def _taylor_shift(c: np.ndarray, h: float) -> np.ndarray:
    """Coefficients of p(z + h) given those of p(z) (ascending powers)."""
    c = np.asarray(c, dtype=float)
    n = c.size
    out = np.zeros(n)
    for k in range(n):
        if c[k] == 0.0:
            continue
        for j in range(k + 1):
            out[j] += c[k] * math.comb(k, j) * h ** (k - j)
    return out


def _poly_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(a.size, b.size)
    out = np.zeros(n)
    out[:a.size] += a
    out[:b.size] += b
    return out


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial on [breaks[0], breaks[-1]] in local power bases.

    Piece i is sum_k coefs[i][k] (u - breaks[i])^k on [breaks[i], breaks[i+1]).
    The function is zero left of breaks[0]; right of breaks[-1] it equals the
    polynomial ``tail`` in (u - breaks[-1]) (zero for compact support).
    """

    breaks: np.ndarray
    coefs: tuple
    tail: np.ndarray = field(default_factory=lambda: np.zeros(1))

    @classmethod
    def box(cls, a: float, b: float, height: float = 1.0) -> "PiecewisePoly":
        """height times the indicator of [a, b]."""
        if not b > a:
            raise InvalidParams("invalid-params", "box needs b > a")
        return cls(np.array([a, b], dtype=float), (np.array([float(height)]),))

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breaks[0]), float(self.breaks[-1])

    @property
    def degree(self) -> int:
        return max(max(c.size for c in self.coefs), self.tail.size) - 1

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        flat = np.atleast_1d(u).ravel()
        out = np.zeros(flat.shape)
        idx = np.searchsorted(self.breaks, flat, side="right") - 1
        for i, c in enumerate(self.coefs):
            sel = idx == i
            if np.any(sel):
                out[sel] = np.polynomial.polynomial.polyval(flat[sel] - self.breaks[i], c)
        last = idx >= len(self.coefs)
        if np.any(last) and np.any(self.tail):
            out[last] = np.polynomial.polynomial.polyval(flat[last] - self.breaks[-1], self.tail)
        return out.reshape(u.shape) if u.shape else float(out[0])

    def derivative(self, order: int = 1) -> "PiecewisePoly":
        coefs = tuple(np.polynomial.polynomial.polyder(c, order) if c.size > order else np.zeros(1)
                      for c in self.coefs)
        tail = np.polynomial.polynomial.polyder(self.tail, order) if self.tail.size > order else np.zeros(1)
        return PiecewisePoly(self.breaks, coefs, tail)

    def antiderivative(self) -> "PiecewisePoly":
        """F(u) = int_{-inf}^u f, continued past the support by its polynomial tail."""
        coefs = []
        acc = 0.0
        for i, c in enumerate(self.coefs):
            ci = np.polynomial.polynomial.polyint(c)
            ci[0] = acc
            coefs.append(ci)
            acc = float(np.polynomial.polynomial.polyval(self.breaks[i + 1] - self.breaks[i], ci))
        tail = np.polynomial.polynomial.polyint(self.tail)
        tail[0] = acc
        return PiecewisePoly(self.breaks, tuple(coefs), tail)

    def piece_at(self, u: float) -> tuple[float, np.ndarray]:
        """(origin, coefficients) of the polynomial valid just right of u."""
        i = int(np.searchsorted(self.breaks, u, side="right")) - 1
        if i < 0:
            return u, np.zeros(1)
        if i >= len(self.coefs):
            return float(self.breaks[-1]), self.tail
        return float(self.breaks[i]), self.coefs[i]

    def jumps(self) -> list[tuple[float, np.ndarray]]:
        """Jumps [f^{(r)}](b) for r = 0..degree at every breakpoint."""
        deg = self.degree
        out = []
        for j, b in enumerate(self.breaks):
            left = self.coefs[j - 1] if j > 0 else None
            right = self.coefs[j] if j < len(self.coefs) else self.tail
            jr = np.zeros(deg + 1)
            for r in range(deg + 1):
                rv = right[r] * math.factorial(r) if r < right.size else 0.0
                if left is not None:
                    h = self.breaks[j] - self.breaks[j - 1]
                    lv = float(np.polynomial.polynomial.polyval(h, np.polynomial.polynomial.polyder(left, r))) \
                        if left.size > r else 0.0
                else:
                    lv = 0.0
                jr[r] = rv - lv
            out.append((float(b), jr))
        return out


def mult_convolve(f: PiecewisePoly, g: PiecewisePoly) -> PiecewisePoly:
    """Exact convolution of compactly supported piecewise polynomials in log coordinates.

    Writing g = sum_b sum_r [g^{(r)}]_b (u - b)_+^r / r!, each truncated power
    convolves with f into the (r+1)-fold antiderivative F_{r+1}(u - b). The
    result is assembled piece by piece and set to zero outside the sum of the
    supports, which is where the polynomial tails cancel.
    """
    if np.any(f.tail) or np.any(g.tail):
        raise InvalidParams("invalid-params", "convolution needs compactly supported factors")
    # Expanding the factor of lower degree (wider on ties) keeps the jump
    # terms small and the cancellation mild.
    wf = f.breaks[-1] - f.breaks[0]
    wg = g.breaks[-1] - g.breaks[0]
    if (f.degree, -wf) < (g.degree, -wg):
        f, g = g, f
    deg = g.degree
    antis = [f.antiderivative()]
    for _ in range(deg):
        antis.append(antis[-1].antiderivative())
    lo = f.breaks[0] + g.breaks[0]
    hi = f.breaks[-1] + g.breaks[-1]
    pts = np.unique(np.add.outer(f.breaks, g.breaks).ravel())
    pts = pts[(pts >= lo) & (pts <= hi)]
    jumps = g.jumps()
    coefs = []
    for k in range(pts.size - 1):
        left, right = pts[k], pts[k + 1]
        mid = 0.5 * (left + right)
        acc = np.zeros(1)
        for b, jr in jumps:
            for r in range(deg + 1):
                if jr[r] == 0.0 or mid - b < f.breaks[0]:
                    continue
                origin, c = antis[r].piece_at(mid - b)
                # polynomial in (u - b - origin); re-centre at u = left
                acc = _poly_add(acc, jr[r] * _taylor_shift(c, left - b - origin))
        coefs.append(acc)
    return PiecewisePoly(pts, tuple(coefs))


@dataclass(frozen=True)
class WeightParams:
    """Parameters of a log-spline weight.

    Attributes:
        x: Right end of the target interval.
        y: Left end of the target interval.
        eps: Smoothing scale in (0, 1).
        ell: Number of smoothing convolutions, >= 1.
        sign: ``"+"`` for the majorant, ``"-"`` for the minorant.
        scale: Overall multiplier (0 gives the zero weight).
    """

    x: float
    y: float
    eps: float
    ell: int
    sign: str = "+"
    scale: float = 1.0

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise InvalidParams("invalid-params", "sign must be '+' or '-'")
        if not (0 < self.eps < 1) or self.ell < 1 or int(self.ell) != self.ell:
            raise InvalidParams("invalid-params", "need 0 < eps < 1 and integer ell >= 1")
        if not (self.y > 0 and self.x > math.exp(4 * self.eps) * self.y):
            raise InvalidParams("invalid-params", "need x > e^{4 eps} y > 0")

    @property
    def box_ends(self) -> tuple[float, float]:
        """Log-coordinates (A, B) of the unsmoothed box."""
        s = 1.0 if self.sign == "+" else -1.0
        return math.log(self.y) - s * self.eps, math.log(self.x) + s * self.eps


def smoothing_kernel(eps: float, ell: int) -> PiecewisePoly:
    """omega^{*ell}: ell-fold convolution of the box of half-width eps/ell and unit mass."""
    h = eps / ell
    box = PiecewisePoly.box(-h, h, 1.0 / (2.0 * h))
    out = box
    for _ in range(ell - 1):
        out = mult_convolve(out, box)
    return out


@dataclass(frozen=True)
class LogSplineWeight:
    """The weight phi as an exact piecewise polynomial in u = log t.

    Attributes:
        params: Construction parameters.
        poly: phi as a function of u.
    """

    params: WeightParams
    poly: PiecewisePoly

    @property
    def breakpoints(self) -> np.ndarray:
        return self.poly.breaks

    @property
    def support(self) -> tuple[float, float]:
        """Support in the t variable."""
        a, b = self.poly.support
        return math.exp(a), math.exp(b)

    def at_log(self, u):
        """phi(e^u)."""
        return self.params.scale * self.poly(u)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            u = np.log(np.where(t > 0, t, np.nan))
        out = np.where(np.isfinite(u), self.params.scale * self.poly(np.nan_to_num(u, nan=-np.inf)), 0.0)
        return out if out.shape else float(out)

    def to_csv(self, path: str | Path, points: int = 1000) -> None:
        """Write (u, t, phi) samples across the support."""
        a, b = self.poly.support
        u = np.linspace(a - 0.1 * (b - a), b + 0.1 * (b - a), points)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["u", "t", "phi"])
            for ui, vi in zip(u.tolist(), self.at_log(u).tolist()):
                w.writerow([repr(ui), repr(math.exp(ui)), repr(vi)])


def build_weight(wp: WeightParams) -> LogSplineWeight:
    """Construct phi^{+} or phi^{-} exactly.

    phi = 1_{[A, B]} * omega^{*ell} in log coordinates, with
    (A, B) = (log y - eps, log x + eps) for the majorant and
    (log y + eps, log x - eps) for the minorant.
    """
    a, b = wp.box_ends
    poly = mult_convolve(PiecewisePoly.box(a, b), smoothing_kernel(wp.eps, wp.ell))
    return LogSplineWeight(wp, poly)


def _expm1c(z):
    """exp(z) - 1 for complex z without cancellation."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2 + 1j * np.exp(x) * np.sin(y)


def _series_expm1_ratio(z):
    # (e^z - 1)/z to degree 8
    out = np.zeros_like(z)
    term = np.ones_like(z)
    for k in range(1, 10):
        out = out + term
        term = term * z / (k + 1)
    return out


def _expm1_ratio(z):
    """(e^z - 1)/z, entire."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < SMALL
    safe = np.where(small, 1.0, z)
    return np.where(small, _series_expm1_ratio(z), _expm1c(safe) / safe)


def _sinhc_minus_one(w):
    """sinh(w)/w - 1, entire."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-2
    w2 = w * w
    series = w2 / 6.0 * (1.0 + w2 / 20.0 * (1.0 + w2 / 42.0 * (1.0 + w2 / 72.0 * (1.0 + w2 / 110.0))))
    safe = np.where(small, 1.0, w)
    return np.where(small, series, np.sinh(safe) / safe - 1.0)


def kernel_mellin(eps: float, ell: int, s):
    """[sinh(eps s/ell)/(eps s/ell)]^ell, the Mellin transform of omega^{*ell}."""
    return (1.0 + _sinhc_minus_one(eps * np.asarray(s, dtype=complex) / ell)) ** ell


def _interval_mellin(a: float, b: float, s):
    """int_a^b e^{us} du = ((e^b)^s - (e^a)^s)/s in log coordinates."""
    s = np.asarray(s, dtype=complex)
    return (b - a) * np.exp(a * s) * _expm1_ratio((b - a) * s)


def weight_mellin(wp: WeightParams, s):
    """Closed-form Mellin transform of the weight.

    phi_hat(s) = [((e^{+-eps} x)^s - (e^{-+eps} y)^s)/s] [sinh(eps s/ell)/(eps s/ell)]^ell.
    """
    a, b = wp.box_ends
    val = wp.scale * _interval_mellin(a, b, s) * kernel_mellin(wp.eps, wp.ell, s)
    return complex(val) if np.ndim(val) == 0 else val


def psi_hat(wp: WeightParams, s):
    """phi_hat(s) - (x^s - y^s)/s, formed without cancellation."""
    s = np.asarray(s, dtype=complex)
    a, b = wp.box_ends
    lx, ly = math.log(wp.x), math.log(wp.y)
    # interval(a, b) - interval(ly, lx) = interval(lx, b) + interval(a, ly), signed
    box_defect = _interval_mellin(lx, b, s) if b > lx else -_interval_mellin(b, lx, s)
    box_defect = box_defect + (_interval_mellin(a, ly, s) if ly > a else -_interval_mellin(ly, a, s))
    w = wp.eps * s / wp.ell
    kernel_defect = _expm1c(wp.ell * np.log1p(_sinhc_minus_one(w)))
    exact = _interval_mellin(ly, lx, s)
    val = box_defect * kernel_mellin(wp.eps, wp.ell, s) + exact * kernel_defect
    val = wp.scale * val + (wp.scale - 1.0) * exact
    return complex(val) if np.ndim(val) == 0 else val


def numerical_mellin(weight: LogSplineWeight, s, nodes: int = 24):
    """Gauss-Legendre Mellin transform of the constructed spline, panel by panel."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    br = weight.poly.breaks
    total = np.zeros(s.shape, dtype=complex)
    for a, b in zip(br[:-1], br[1:]):
        n_sub = max(1, int(math.ceil((b - a) * float(np.max(np.abs(s))) / 2.0)))
        edges = np.linspace(a, b, n_sub + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            u = 0.5 * (hi + lo) + 0.5 * (hi - lo) * xg
            vals = weight.at_log(u)
            total += 0.5 * (hi - lo) * (np.exp(np.outer(s, u)) @ (wg * vals))
    return total


@dataclass
class WeightReport:
    """Pass/fail per weight property with worst-case margins (>= 0 means pass).

    Attributes:
        margins: Property name to worst margin.
        passed: Property name to verdict.
    """

    margins: dict
    passed: dict

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


def verify_weight_properties(wp: WeightParams, u_grid, s_samples, smooth_tol: float = 1e-9) -> WeightReport:
    """Check range, sandwich, support, smoothness, Mellin growth and Mellin defect bounds.

    Smoothness compares one-sided values of phi^{(r)}, r < ell, at every
    breakpoint relative to the largest magnitude of phi^{(r)}.
    """
    u = np.asarray(u_grid, dtype=float)
    s = np.asarray(s_samples, dtype=complex)
    if u.size == 0 or s.size == 0:
        raise InvalidParams("invalid-params", "grids must be non-empty")
    w = build_weight(wp)
    phi = w.poly(u)
    lx, ly, e = math.log(wp.x), math.log(wp.y), wp.eps
    tol = 1e-12
    margins, passed = {}, {}
    margins["range"] = float(min(np.min(phi), np.min(1.0 - phi)))
    passed["range"] = margins["range"] >= -tol
    ind = ((u >= ly) & (u <= lx)).astype(float)
    gap = (phi - ind) if wp.sign == "+" else (ind - phi)
    margins["sandwich"] = float(np.min(gap))
    passed["sandwich"] = margins["sandwich"] >= -tol
    if wp.sign == "+":
        lo, hi = ly - 2 * e, lx + 2 * e
        plateau = (u >= ly) & (u <= lx)
    else:
        lo, hi = ly, lx
        plateau = (u >= ly + 2 * e) & (u <= lx - 2 * e)
    outside = (u < lo) | (u > hi)
    sup_lo, sup_hi = w.poly.support
    margins["support"] = float(-max(np.max(np.abs(phi[outside])) if np.any(outside) else 0.0,
                                    np.max(np.abs(phi[plateau] - 1.0)) if np.any(plateau) else 0.0,
                                    abs(sup_lo - lo), abs(sup_hi - hi)))
    passed["support"] = margins["support"] >= -1e-12
    worst = 0.0
    for r in range(wp.ell):
        d = w.poly.derivative(r) if r else w.poly
        mags = max(float(np.max(np.abs(c))) * math.factorial(r) if c.size else 0.0 for c in d.coefs) or 1.0
        for b, jr in d.jumps():
            worst = max(worst, abs(jr[0]) / max(mags, 1e-300))
    margins["smoothness"] = smooth_tol - worst
    passed["smoothness"] = worst <= smooth_tol
    phat = np.abs(weight_mellin(wp, s))
    sig = s.real
    absS = np.abs(s)
    with np.errstate(divide="ignore"):
        two_over = np.where(absS > 0, 2.0 / np.where(absS > 0, absS, 1.0), np.inf)
        decay = np.where(absS > 0, np.minimum(1.0, (wp.ell / (e * np.where(absS > 0, absS, 1.0))) ** wp.ell), 1.0)
    if wp.sign == "+":
        b3 = (wp.x * math.exp(2 * e)) ** sig * np.minimum(two_over, math.log(math.exp(2 * e) * wp.x / wp.y)) * decay
    else:
        b3 = wp.x ** sig * np.minimum(two_over, math.log(math.exp(-2 * e) * wp.x / wp.y)) * decay
    use = sig >= 0
    rel_growth = (b3[use] - phat[use]) / np.maximum(b3[use], 1e-300) if np.any(use) else np.array([0.0])
    margins["mellin_growth"] = float(np.min(rel_growth))
    passed["mellin_growth"] = margins["mellin_growth"] >= -1e-12
    psi = np.abs(psi_hat(wp, s))
    b4 = 2 * e * np.exp(2 * e * np.abs(sig)) * (wp.x ** sig + wp.y ** sig)
    margins["mellin_defect"] = float(np.min((b4 - psi) / b4))
    passed["mellin_defect"] = margins["mellin_defect"] >= -1e-12
    return WeightReport(margins, passed)


@dataclass(frozen=True)
class SelectedParams:
    """Parameter choice of the smoothed contour argument.

    Attributes:
        ell: ceil(kappa) + 3.
        eps: min(1/10, x^{-delta/(kappa+1)}).
        T: ell / eps.
    """

    ell: int
    eps: float
    T: float


def select_parameters(alpha: float, delta: float, kappa: float, x: float) -> SelectedParams:
    """Smoothing order, scale and truncation height for a window ending at x."""
    if not (0 < delta < alpha) or kappa <= 0 or x < 2:
        raise InvalidParams("invalid-params", "need 0 < delta < alpha, kappa > 0, x >= 2")
    ell = int(math.ceil(kappa)) + 3
    eps = min(0.1, x ** (-delta / (kappa + 1.0)))
    return SelectedParams(ell, eps, ell / eps)


def mellin_samples_csv(wp: WeightParams, s_values, path: str | Path) -> None:
    """Write (Re s, Im s, Re phi_hat, Im phi_hat) rows."""
    vals = np.atleast_1d(weight_mellin(wp, np.asarray(s_values, dtype=complex)))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re_s", "im_s", "re_phi_hat", "im_phi_hat"])
        for sv, v in zip(np.atleast_1d(s_values), vals):
            sv = complex(sv)
            w.writerow([repr(sv.real), repr(sv.imag), repr(float(v.real)), repr(float(v.imag))])
