"""General Dirichlet series: specification, enumeration, sums and checks.

A series A(s) = sum_n a_n lambda_n^{-s} is described by a :class:`SeriesSpec`
and materialised up to a cutoff as a :class:`CoefficientStream`. Partial
sums S(x) = sum_{lambda_n <= x} a_n use compensated summation over fixed
chunks of 4096 terms, so results do not depend on how work is split.

Non-tabulated specs are index rules: term n >= 1 has lambda_n >= n^q with
q = ``lambda_exponent``. The tail majorant |a_n| lambda_n^{-sigma} <=
C n^{q(theta - sigma)} (C = ``tail_constant``, theta = ``tail_exponent``)
drives the truncation of :func:`evaluate_series`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

import numpy as np

from . import special_fn
from .errors import BudgetError, DomainError, InvalidParams, SpecError

CHUNK = 4096
MAX_TERMS = 40_000_000
EPS = 2.0 ** -52

KINDS = ("explicit-rule", "euler-product", "tabulated", "derived")


@dataclass(frozen=True)
class SeriesSpec:
    """Declarative description of a general Dirichlet series.

    Attributes:
        kind: One of ``explicit-rule``, ``euler-product``, ``tabulated``,
            ``derived``.
        params: Kind-specific parameters (rule name, local factor, terms,
            transform and base spec).
        nonneg: Whether all coefficients are non-negative.
        abscissa: Declared abscissa of absolute convergence.
        tail_exponent: theta in the tail majorant, or None if unknown.
        tail_constant: C in the tail majorant.
        lambda_exponent: q with lambda_n >= n^q.
        name: Optional bundled name.
    """

    kind: str
    params: dict = field(default_factory=dict)
    nonneg: bool = True
    abscissa: float = 1.0
    tail_exponent: float | None = None
    tail_constant: float = 1.0
    lambda_exponent: float = 1.0
    name: str = ""

    def to_json(self) -> dict:
        """Serialise to the JSON object form."""
        out = {
            "kind": self.kind,
            "params": self.params,
            "nonneg": self.nonneg,
            "abscissa": self.abscissa,
            "tail_exponent": self.tail_exponent,
        }
        if self.tail_constant != 1.0:
            out["tail_constant"] = self.tail_constant
        if self.lambda_exponent != 1.0:
            out["lambda_exponent"] = self.lambda_exponent
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SeriesSpec":
        """Parse the JSON object form; ``{"name": ...}`` alone selects a bundled spec."""
        if "kind" not in obj:
            if "name" in obj:
                return bundled_spec(obj["name"], **obj.get("params", {}))
            raise SpecError("unsupported-spec", "series JSON needs 'kind' or 'name'")
        if obj["kind"] not in KINDS:
            raise SpecError("unsupported-spec", f"unknown kind {obj['kind']!r}")
        return cls(
            kind=obj["kind"],
            params=dict(obj.get("params", {})),
            nonneg=bool(obj.get("nonneg", True)),
            abscissa=float(obj.get("abscissa", 1.0)),
            tail_exponent=None if obj.get("tail_exponent") is None else float(obj["tail_exponent"]),
            tail_constant=float(obj.get("tail_constant", 1.0)),
            lambda_exponent=float(obj.get("lambda_exponent", 1.0)),
            name=str(obj.get("name", "")),
        )


@dataclass
class CoefficientStream:
    """Materialised terms (lambda_n, a_n) with lambda_n <= x_max.

    Terms are ordered by (lam, offset). ``offset`` is non-zero only for
    spread series, whose new abscissae lam + offset sit closer together than
    double precision can resolve at the scale of lam.

    Attributes:
        source: The generating spec.
        x_max: Enumeration cutoff.
        lam: Base abscissae, non-decreasing.
        a: Coefficients (float or complex).
        offset: Exact sub-spacing added to ``lam``.
        index: Generating index n of each term (1-based), where meaningful.
    """

    source: SeriesSpec
    x_max: float
    lam: np.ndarray
    a: np.ndarray
    offset: np.ndarray | None = None
    index: np.ndarray | None = None
    _chunk_sums: list | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return int(self.lam.size)

    def __iter__(self) -> Iterator[tuple[float, complex]]:
        off = self.offset
        for i in range(self.lam.size):
            lam = float(self.lam[i]) + (float(off[i]) if off is not None else 0.0)
            yield lam, self.a[i].item()

    def count_upto(self, x: float) -> int:
        """Number of terms with lam + offset <= x."""
        k = int(np.searchsorted(self.lam, x, side="right"))
        if self.offset is None or k == 0:
            return k
        base = self.lam[k - 1]
        start = int(np.searchsorted(self.lam, base, side="left"))
        inside = int(np.searchsorted(self.offset[start:k], x - base, side="right"))
        return start + inside

    def chunk_sums(self) -> list:
        """Correctly rounded sums of each fixed 4096-term chunk (cached)."""
        if self._chunk_sums is None:
            self._chunk_sums = [_csum(self.a[i:i + CHUNK]) for i in range(0, self.a.size, CHUNK)]
        return self._chunk_sums


def _csum(x: np.ndarray) -> complex | float:
    if np.iscomplexobj(x):
        return complex(math.fsum(x.real.tolist()), math.fsum(x.imag.tolist()))
    return math.fsum(x.tolist())


@dataclass
class PartialSumTable:
    """S(x) on a grid with floating-point error bounds.

    Attributes:
        grid: Sorted x values.
        sums: S(x) per grid point.
        errs: Accumulation error bound per grid point.
    """

    grid: np.ndarray
    sums: np.ndarray
    errs: np.ndarray


# Explicit index rules: n (float array) -> (lambda_n, a_n).
def _rule_one(n, p):
    return n, np.ones_like(n)


def _rule_zero(n, p):
    return n, np.zeros_like(n)


def _rule_power(n, p):
    return n, n ** float(p.get("exponent", 0.0))


def _rule_ingham(n, p):
    return n, 1.0 + np.cos(np.log(n))


def _rule_karamata(n, p):
    ln = np.log(n)
    return n, ln * (1.0 + np.cos(ln * ln))


def _rule_bcounter(n, p):
    ln = np.log(n)
    return n, 1.0 + np.cos(ln * ln)


def _rule_zetaderiv(n, p):
    alpha, q, m = _zetaderiv_shape(p)
    lam = n ** q
    a = n ** (q * alpha - 1.0)
    if m > 1:
        a = a * np.log(n) ** (m - 1)
    return lam, a


def _zetaderiv_shape(p) -> tuple[float, float, int]:
    alpha = float(p.get("alpha", 1.0))
    delta = float(p.get("delta", 0.5))
    if "r" in p:
        r = float(p["r"])
    else:
        r = float(p.get("kappa", 1.5)) + 0.5
    return alpha, r / delta, int(p.get("m", 1))


def _rule_vonmangoldt(n, p):
    hi = int(n[-1]) if n.size else 1
    lo = int(n[0]) if n.size else 1
    table = special_fn.von_mangoldt_sieve(max(hi, 2))
    return n, table[lo:hi + 1].copy()


_RULES: dict[str, Callable] = {
    "one": _rule_one,
    "zero": _rule_zero,
    "power": _rule_power,
    "ingham": _rule_ingham,
    "karamata": _rule_karamata,
    "bcounter": _rule_bcounter,
    "zetaderiv": _rule_zetaderiv,
    "vonmangoldt": _rule_vonmangoldt,
}


def _index_limit(x_max: float, q: float) -> int:
    """Largest n with n^q <= x_max."""
    n = int(math.floor(x_max ** (1.0 / q) + 1e-9))
    while n > 0 and float(n) ** q > x_max:
        n -= 1
    while float(n + 1) ** q <= x_max:
        n += 1
    return n


def _spec_q(spec: SeriesSpec) -> float:
    if spec.kind == "explicit-rule" and spec.params.get("rule") == "zetaderiv":
        return _zetaderiv_shape(spec.params)[1]
    if spec.kind == "euler-product":
        return float(spec.params.get("lambda_power", 1.0))
    return float(spec.lambda_exponent)


def _local_coefficients(params: dict, kmax: int) -> list[float]:
    """Coefficients c_0..c_kmax of a local factor in powers of p^{-s}."""
    local = params.get("local")
    if isinstance(local, (list, tuple)):
        c = [float(v) for v in local]
        if not c or c[0] != 1.0:
            raise SpecError("unsupported-spec", "local factor must start with 1")
        return (c + [0.0] * (kmax + 1))[: kmax + 1]
    if local == "geometric":
        if "degree" not in params:
            raise SpecError("truncation-required", "geometric local factor needs a truncation degree")
        ratio = float(params.get("ratio", 1.0))
        deg = int(params["degree"])
        return [ratio ** k if k <= deg else 0.0 for k in range(kmax + 1)]
    raise SpecError("unsupported-spec", f"unknown local factor {local!r}")


def _prime_filter(params: dict, primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split primes into those carrying the local factor and those excluded from the product."""
    sel = params.get("primes")
    if not sel:
        return primes, primes[:0]
    mod = int(sel["modulus"])
    residues = {int(r) % mod for r in sel["residues"]}
    keep = np.isin(primes % mod, sorted(residues))
    return primes[keep], primes[~keep]


def multiplicative_coefficients(n_max: int, params: dict) -> np.ndarray:
    """Sieve a[0..n_max] for the Euler product described by ``params``.

    Each prime's local expansion multiplies the entries divisible by it,
    with the p-adic valuation selecting the coefficient.
    """
    a = np.ones(n_max + 1, dtype=float)
    a[0] = 0.0
    if n_max < 2:
        return a
    kmax = max(1, int(math.log(n_max, 2)) + 1)
    coeffs = _local_coefficients(params, kmax)
    primes, excluded = _prime_filter(params, special_fn.primes_up_to(n_max))
    for p in excluded.tolist():
        a[p::p] = 0.0
    c1 = coeffs[1]
    for p in primes.tolist():
        vals = np.full(n_max // p, c1)
        pk, k = p, 2
        while pk * p <= n_max:
            vals[pk - 1::pk] = coeffs[k] if k < len(coeffs) else 0.0
            pk *= p
            k += 1
        a[p::p] *= vals
    return a


def _index_terms(spec: SeriesSpec, n_lo: int, n_hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Terms with index n_lo <= n <= n_hi for index-rule specs."""
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    if spec.kind == "explicit-rule":
        rule = spec.params.get("rule")
        if rule not in _RULES:
            raise SpecError("unsupported-spec", f"unknown rule {rule!r}")
        return _RULES[rule](n, spec.params)
    if spec.kind == "euler-product":
        d = float(spec.params.get("lambda_power", 1.0))
        a = multiplicative_coefficients(n_hi, spec.params)[n_lo:]
        return n ** d, a
    raise SpecError("unsupported-spec", f"kind {spec.kind!r} has no index rule")


def enumerate_terms(spec: SeriesSpec, x_max: float) -> CoefficientStream:
    """Materialise all terms with lambda <= x_max in increasing order.

    Raises:
        InvalidParams: if x_max < 1.
        SpecError: ``unsupported-spec`` or ``truncation-required``.
        BudgetError: if the term count exceeds the enumeration budget.
    """
    if x_max < 1:
        raise InvalidParams("invalid-params", "x_max must be at least 1")
    if spec.kind in ("explicit-rule", "euler-product"):
        q = _spec_q(spec)
        n_hi = _index_limit(float(x_max), q)
        if n_hi > MAX_TERMS:
            raise BudgetError("enumeration-budget", f"{n_hi} terms exceed the budget {MAX_TERMS}")
        if n_hi < 1:
            empty = np.zeros(0)
            return CoefficientStream(spec, float(x_max), empty, empty.copy(), index=np.zeros(0, dtype=np.int64))
        lam, a = _index_terms(spec, 1, n_hi)
        keep = lam <= x_max
        idx = np.arange(1, n_hi + 1, dtype=np.int64)
        return CoefficientStream(spec, float(x_max), lam[keep], a[keep], index=idx[keep])
    if spec.kind == "tabulated":
        lam, a = _merge_tabulated(spec.params.get("terms", []))
        keep = lam <= x_max
        return CoefficientStream(spec, float(x_max), lam[keep], a[keep],
                                 index=np.arange(1, int(keep.sum()) + 1, dtype=np.int64))
    if spec.kind == "derived":
        return _enumerate_derived(spec, float(x_max))
    raise SpecError("unsupported-spec", f"unknown kind {spec.kind!r}")


def _merge_tabulated(terms) -> tuple[np.ndarray, np.ndarray]:
    if len(terms) == 0:
        return np.zeros(0), np.zeros(0)
    lam = np.array([float(t[0]) for t in terms])
    raw = [t[1] for t in terms]
    is_complex = any(isinstance(v, complex) or (isinstance(v, (list, tuple))) for v in raw)
    if is_complex:
        a = np.array([complex(*v) if isinstance(v, (list, tuple)) else complex(v) for v in raw])
    else:
        a = np.array([float(v) for v in raw])
    if np.any(lam < 1):
        raise SpecError("unsupported-spec", "tabulated lambda values must be >= 1")
    order = np.argsort(lam, kind="stable")
    lam, a = lam[order], a[order]
    uniq, start = np.unique(lam, return_index=True)
    merged = np.array([_csum(a[i:j]) for i, j in zip(start, list(start[1:]) + [lam.size])], dtype=a.dtype)
    return uniq, merged


def _enumerate_derived(spec: SeriesSpec, x_max: float) -> CoefficientStream:
    transform = spec.params.get("transform")
    if transform != "spread":
        raise SpecError("unsupported-spec", f"unknown transform {transform!r}")
    base_spec = SeriesSpec.from_json(spec.params["base"])
    base_x = float(spec.params.get("x_max", x_max))
    base = enumerate_terms(base_spec, base_x)
    lam, off, a, idx = spread_arrays(base.lam, base.a)
    keep = (x_max - lam) >= off
    return CoefficientStream(spec, x_max, lam[keep], a[keep], offset=off[keep], index=idx[keep])


def spread_arrays(lam: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split each coefficient into floor(a_n)+1 equal pieces placed just after lambda_n.

    Piece j of term n sits at lambda_n + j eps_n with
    eps_n = 2^{-n} min(lambda_{n+1} - lambda_n, 1) / ((1 + a_n^2)(1 + floor(a_n))).

    Returns:
        ``(base, offset, value, source_index)`` arrays in increasing order.

    Raises:
        InvalidParams: ``negative-coefficient``.
    """
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise InvalidParams("negative-coefficient", "spreading needs non-negative coefficients")
    n_terms = lam.size
    gaps = np.empty(n_terms)
    gaps[:-1] = np.diff(lam) if n_terms > 1 else []
    if n_terms:
        gaps[-1] = 1.0
    fl = np.floor(a)
    counts = (fl + 1).astype(np.int64)
    nidx = np.arange(1, n_terms + 1, dtype=float)
    eps = np.exp2(-nidx) * np.minimum(gaps, 1.0) / ((1.0 + a * a) * (1.0 + fl))
    base = np.repeat(lam, counts)
    src = np.repeat(np.arange(1, n_terms + 1, dtype=np.int64), counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    j = np.arange(base.size) - starts
    off = j * np.repeat(eps, counts)
    val = np.repeat(a / (fl + 1.0), counts)
    return base, off, val, src


def partial_sum(stream: CoefficientStream, x: float) -> tuple[complex | float, float]:
    """Sharp-cutoff sum S(x) = sum_{lambda_n <= x} a_n.

    Returns:
        ``(value, err_bound)``; the bound covers floating-point accumulation.

    Raises:
        DomainError: ``cutoff-exceeded`` if x > stream.x_max.
    """
    if x > stream.x_max:
        raise DomainError("cutoff-exceeded", f"x = {x} exceeds the enumeration cutoff {stream.x_max}")
    k = stream.count_upto(float(x))
    chunks = stream.chunk_sums()
    full = k // CHUNK
    head = chunks[:full]
    rest = stream.a[full * CHUNK:k]
    if np.iscomplexobj(stream.a):
        parts = head + [_csum(rest)]
        value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    else:
        parts = head + [_csum(rest)]
        value = math.fsum(parts)
    mag = math.fsum(abs(p) for p in parts)
    return value, EPS * (mag + abs(value))


def partial_sum_table(stream: CoefficientStream, grid, threads: int = 1) -> PartialSumTable:
    """S(x) at every grid point; grid points may be farmed out to threads."""
    grid = np.asarray(grid, dtype=float)
    stream.chunk_sums()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda x: partial_sum(stream, x), grid.tolist()))
    else:
        results = [partial_sum(stream, x) for x in grid.tolist()]
    dtype = complex if np.iscomplexobj(stream.a) else float
    sums = np.array([r[0] for r in results], dtype=dtype)
    errs = np.array([r[1] for r in results])
    return PartialSumTable(grid, sums, errs)


def tail_majorant(spec: SeriesSpec, sigma: float, n_cut: int) -> float:
    """Bound on sum_{n > n_cut} |a_n| lambda_n^{-sigma} from the declared majorant."""
    if spec.tail_exponent is None:
        raise SpecError("tail-bound-unavailable", "no tail exponent declared")
    q = _spec_q(spec)
    expo = q * (sigma - spec.tail_exponent)
    if expo <= 1.0:
        raise SpecError("tail-bound-unavailable", "majorant does not converge at this abscissa")
    return spec.tail_constant * float(n_cut) ** (1.0 - expo) / (expo - 1.0)


def evaluate_series(spec: SeriesSpec, s: complex, tail_target: float = 1e-10,
                    margin: float = 1e-6) -> tuple[complex, float]:
    """Direct summation of A(s) in the half-plane of absolute convergence.

    The truncation index N is the smallest one whose majorant tail is at most
    ``tail_target``; the reported error adds a rounding estimate.

    Raises:
        DomainError: ``divergent-region`` if Re(s) <= abscissa + margin.
        SpecError: ``tail-bound-unavailable``.
        BudgetError: if N exceeds the enumeration budget.
    """
    s = complex(s)
    if tail_target <= 0:
        raise InvalidParams("invalid-params", "tail_target must be positive")
    if s.real <= spec.abscissa + margin:
        raise DomainError("divergent-region", f"Re(s) = {s.real} is not beyond the abscissa {spec.abscissa}")
    if spec.kind in ("tabulated", "derived"):
        stream = enumerate_terms(spec, math.inf if spec.kind == "tabulated" else
                                 float(spec.params.get("x_max", 1.0)) + 1.0)
        return _dirichlet_sum(stream.lam + (stream.offset if stream.offset is not None else 0.0),
                              stream.a, s, 0.0)
    if spec.tail_exponent is None:
        raise SpecError("tail-bound-unavailable", "no tail exponent declared")
    q = _spec_q(spec)
    expo = q * (s.real - spec.tail_exponent)
    if expo <= 1.0:
        raise SpecError("tail-bound-unavailable", "majorant does not converge at this abscissa")
    n_cut = (tail_target * (expo - 1.0) / spec.tail_constant) ** (1.0 / (1.0 - expo))
    n_cut = max(1, int(math.ceil(n_cut)))
    if n_cut > 4 * MAX_TERMS:
        raise BudgetError("enumeration-budget", f"tail target needs {n_cut} terms")
    tail = tail_majorant(spec, s.real, n_cut)
    if spec.kind == "euler-product":
        lam, a = _index_terms(spec, 1, n_cut)
        return _dirichlet_sum(lam, a, s, tail)
    parts, mags = [], []
    step = 1_000_000
    for lo in range(1, n_cut + 1, step):
        lam, a = _index_terms(spec, lo, min(n_cut, lo + step - 1))
        v, m = _dirichlet_chunks(lam, a, s)
        parts.extend(v)
        mags.append(m)
    value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return value, tail + EPS * (math.fsum(mags) + abs(value))


def _dirichlet_chunks(lam: np.ndarray, a: np.ndarray, s: complex) -> tuple[list, float]:
    """Per-chunk pairwise sums of a_n lambda_n^{-s} and the summed magnitude scale."""
    if lam.size == 0:
        return [], 0.0
    loglam = np.log(lam)
    if s.imag == 0.0 and not np.iscomplexobj(a):
        terms = (a * np.exp(-s.real * loglam)).astype(complex)
    else:
        terms = a * np.exp(-s * loglam)
    pad = (-terms.size) % CHUNK
    blocks = np.concatenate([terms, np.zeros(pad, dtype=complex)]).reshape(-1, CHUNK).sum(axis=1)
    # pairwise sums within a chunk cost about log2(CHUNK) roundings per term
    mag = 13.0 * float(np.sum(np.abs(terms) * (1.0 + abs(s) * loglam)))
    return [complex(b) for b in blocks], mag


def _dirichlet_sum(lam, a, s, tail) -> tuple[complex, float]:
    parts, mag = _dirichlet_chunks(np.asarray(lam, dtype=float), np.asarray(a), s)
    value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return value, tail + EPS * (mag + abs(value))


def partial_summation(stream: CoefficientStream, phi: Callable, x1: float, x2: float,
                      dphi: Callable | None = None, tol: float = 1e-11) -> complex:
    """Evaluate C(x1,x2) phi(x2) - int_{x1}^{x2} C(x1,u) phi'(u) du.

    C(x1,u) = sum_{x1 < lambda_n <= u} a_n is piecewise constant, so the
    integral is computed panel by panel between consecutive abscissae with
    Gauss-Legendre quadrature of phi'. If ``dphi`` is omitted the exact
    panel integral phi(b) - phi(a) is used instead.

    Raises:
        InvalidParams: ``bad-interval``.
        ConvergenceError: ``quadrature-nonconvergence``.
    """
    from .errors import ConvergenceError

    if not (0 < x1 <= x2 <= stream.x_max):
        raise InvalidParams("bad-interval", "need 0 < x1 <= x2 <= x_max")
    if x1 == x2:
        return 0.0
    i0, i1 = stream.count_upto(x1), stream.count_upto(x2)
    lam = stream.lam[i0:i1] + (stream.offset[i0:i1] if stream.offset is not None else 0.0)
    a = stream.a[i0:i1]
    if a.size == 0:
        return 0.0
    cum = np.cumsum(a)
    total = _csum(a)
    left = lam
    right = np.append(lam[1:], x2)
    if dphi is None:
        seg = np.asarray(phi(right)) - np.asarray(phi(left))
    else:
        seg = _panel_integral(dphi, left, right, 10)
        seg_hi = _panel_integral(dphi, left, right, 16)
        scale = 1.0 + float(np.max(np.abs(seg_hi)))
        if float(np.max(np.abs(seg_hi - seg))) > tol * scale:
            raise ConvergenceError("quadrature-nonconvergence", "Gauss rules disagree on phi'")
        seg = seg_hi
    integral = _csum(cum * seg)
    return total * complex(np.asarray(phi(np.array([x2])))[0]) - integral if np.iscomplexobj(a) \
        else float(total * float(np.asarray(phi(np.array([x2])))[0]) - integral)


def _panel_integral(f: Callable, left: np.ndarray, right: np.ndarray, nodes: int) -> np.ndarray:
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    u = mid[:, None] + half[:, None] * x[None, :]
    return half * (np.asarray(f(u)) @ w)


@dataclass
class KroneckerReport:
    """Decay of |S(x)|/x^{Re s} on a grid.

    Attributes:
        grid: The x values.
        ratios: |S(x)| / x^{Re s}.
        envelope: sup_{y >= x} of the ratios (upper envelope from the right).
        head_min: Minimum of the envelope over the first quartile.
        tail_max: Maximum of the envelope over the last quartile.
        verdict: ``"pass"`` when tail_max < head_min, else ``"fail"``.
    """

    grid: np.ndarray
    ratios: np.ndarray
    envelope: np.ndarray
    head_min: float
    tail_max: float
    verdict: str


def kronecker_check(stream: CoefficientStream, s: complex, x_grid) -> KroneckerReport:
    """Test the o(x^{Re s}) decay of partial sums of a convergent series.

    The quartile comparison is made on the upper envelope
    E(x) = sup_{y >= x} |S(y)|/y^{Re s}, which tracks the limsup that the
    decay statement is about and is insensitive to oscillation phase.
    """
    grid = np.asarray(x_grid, dtype=float)
    if grid.size < 4 or np.any(np.diff(grid) <= 0):
        raise InvalidParams("insufficient-grid", "need at least four increasing grid points")
    table = partial_sum_table(stream, grid)
    ratios = np.abs(table.sums) / grid ** complex(s).real
    env = np.maximum.accumulate(ratios[::-1])[::-1]
    q = max(1, grid.size // 4)
    head_min = float(np.min(env[:q]))
    tail_max = float(np.max(env[-q:]))
    return KroneckerReport(grid, ratios, env, head_min, tail_max, "pass" if tail_max < head_min else "fail")


@dataclass
class LaplaceReport:
    """Pieces of the Laplace identity A(s)/s = int_0^inf S(e^t) e^{-st} dt.

    Attributes:
        residual: |A(s)/s - integral - tail_estimate|.
        budget: Combined truncation and rounding budget.
        lhs: A(s)/s from direct summation.
        integral: int_0^{T} S(e^t) e^{-st} dt over the enumerated range.
        tail_estimate: S(X) X^{-s}/s, the boundary part of the remaining integral.
        t_used: Upper end T actually integrated (log of the enumeration cutoff).
    """

    residual: float
    budget: float
    lhs: complex
    integral: complex
    tail_estimate: complex
    t_used: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.budget


LAPLACE_X_BUDGET = float(2 ** 22)
LAPLACE_SUM_TERMS = 20_000_000


def laplace_identity_check(spec: SeriesSpec, s: complex, t_max: float = 20.0,
                           x_budget: float = LAPLACE_X_BUDGET) -> LaplaceReport:
    """Compare A(s)/s with the Laplace transform of a(t) = S(e^t).

    The step function a(t) is integrated exactly between consecutive jumps
    log(lambda_n) up to T = min(t_max, log x_budget). Beyond T the integral
    equals (S(X) X^{-s} + sum_{lambda > X} a lambda^{-s})/s with X = e^T; the
    first part is added as the tail estimate and the second is bounded by the
    majorant and charged to the budget.

    Raises:
        DomainError: ``divergent-region``.
    """
    s = complex(s)
    if s.real <= spec.abscissa:
        raise DomainError("divergent-region", "Re(s) must exceed the abscissa")
    t_used = min(float(t_max), math.log(x_budget))
    X = math.exp(t_used)
    stream = enumerate_terms(spec, X)
    if spec.kind == "explicit-rule" and spec.params.get("rule") == "zero":
        lhs_val, lhs_err = 0.0, 0.0
    else:
        target = 1e-10
        if spec.kind in ("explicit-rule", "euler-product") and spec.tail_exponent is not None:
            target = max(target, tail_majorant(spec, s.real, LAPLACE_SUM_TERMS))
        lhs_val, lhs_err = evaluate_series(spec, s, target)
    lhs = lhs_val / s
    t_jump = np.log(stream.lam)
    cums = np.cumsum(stream.a)
    t_next = np.append(t_jump[1:], t_used)
    pieces = cums * (np.exp(-s * t_jump) - np.exp(-s * t_next)) / s
    integral = complex(_csum(pieces.astype(complex)))
    s_x = complex(_csum(stream.a)) if len(stream) else 0.0
    tail_est = s_x * math.exp(-s.real * t_used) * complex(math.cos(-s.imag * t_used), math.sin(-s.imag * t_used)) / s
    if spec.kind in ("explicit-rule", "euler-product") and spec.tail_exponent is not None:
        n_cut = int(stream.index[-1]) if len(stream) else 1
        beyond = tail_majorant(spec, s.real, n_cut) / abs(s)
    else:
        beyond = 0.0
    residual = abs(lhs - integral - tail_est)
    rounding = 64 * EPS * (float(np.sum(np.abs(pieces))) + abs(lhs) + abs(tail_est))
    budget = lhs_err / abs(s) + beyond + rounding
    return LaplaceReport(residual, budget, lhs, integral, tail_est, t_used)


def j_statistic(stream: CoefficientStream, alpha: float, m: int, eps0: float, t: float) -> float:
    """J(t) = t v(t) e^{-alpha t} S(e^t) with the truncated gamma weight v.

    Under a pole of order m at alpha with leading coefficient g(alpha),
    J(t) tends to g(alpha)/alpha.

    Raises:
        DomainError: ``cutoff-exceeded`` if e^t > stream.x_max.
    """
    if t < 0:
        raise InvalidParams("invalid-params", "t must be non-negative")
    if t == 0:
        return 0.0
    x = math.exp(t)
    if x > stream.x_max:
        raise DomainError("cutoff-exceeded", f"e^t = {x} exceeds the enumeration cutoff")
    v = special_fn.truncated_gamma_v(special_fn.TruncatedGamma(m, eps0), t)
    value, _ = partial_sum(stream, x)
    return float(np.real(t * v * math.exp(-alpha * t) * value))


def _majorant_constant(m: float, theta: float) -> float:
    """Smallest C with m^{omega(n)} <= C n^theta for squarefree n (product over primes)."""
    c = 1.0
    for p in special_fn.primes_up_to(10_000).tolist():
        r = m / p ** theta
        if r <= 1.0:
            break
        c *= r
    return c


def bundled_spec(name: str, **params: Any) -> SeriesSpec:
    """Named series used throughout the examples.

    Names: ``zeta``, ``ingham``, ``karamata``, ``divisor2``, ``kluners``,
    ``zetaderiv``, ``vonmangoldt``, ``bcounter``, ``zero``.
    """
    log_bound = 1.0 / (0.05 * math.e)  # log n <= log_bound * n^0.05
    if name == "zeta":
        return SeriesSpec("explicit-rule", {"rule": "one"}, True, 1.0, 0.0, 1.0, name=name)
    if name == "zero":
        return SeriesSpec("explicit-rule", {"rule": "zero"}, True, 0.0, 0.0, 1.0, name=name)
    if name == "ingham":
        return SeriesSpec("explicit-rule", {"rule": "ingham"}, True, 1.0, 0.0, 2.0, name=name)
    if name == "bcounter":
        return SeriesSpec("explicit-rule", {"rule": "bcounter"}, True, 1.0, 0.0, 2.0, name=name)
    if name == "karamata":
        return SeriesSpec("explicit-rule", {"rule": "karamata"}, True, 1.0, 0.05, 2.0 * log_bound, name=name)
    if name == "vonmangoldt":
        return SeriesSpec("explicit-rule", {"rule": "vonmangoldt"}, True, 1.0, 0.05, log_bound, name=name)
    if name == "divisor2":
        return SeriesSpec("euler-product", {"local": [1.0, 2.0]}, True, 1.0, 0.25,
                          _majorant_constant(2.0, 0.25), name=name)
    if name == "kluners":
        ell = int(params.get("ell", 3))
        d = int(params.get("d", 2))
        e = int(params.get("e", 1))
        m = e * (ell - 1)
        p = {"local": [1.0, float(m)], "primes": {"modulus": ell, "residues": [0, 1]},
             "lambda_power": d, "ell": ell, "d": d, "e": e}
        return SeriesSpec("euler-product", p, True, 1.0 / d, 0.25 / d,
                          _majorant_constant(float(m), 0.25), lambda_exponent=d, name=name)
    if name == "zetaderiv":
        p = {"rule": "zetaderiv", "alpha": float(params.get("alpha", 1.0)),
             "delta": float(params.get("delta", 0.5)), "kappa": float(params.get("kappa", 1.5)),
             "m": int(params.get("m", 1))}
        alpha, q, m = _zetaderiv_shape(p)
        if m == 1:
            theta, c = alpha - 1.0 / q, 1.0
        else:
            eta = 0.05
            theta = alpha - 1.0 / q + eta / q
            c = ((m - 1) / (math.e * eta)) ** (m - 1)
        return SeriesSpec("explicit-rule", p, True, alpha, theta, c, lambda_exponent=q, name=name)
    raise SpecError("unsupported-spec", f"unknown bundled series {name!r}")


BUNDLED_CONVERGENT = ("zeta", "ingham", "karamata", "divisor2", "kluners", "zetaderiv", "vonmangoldt")
