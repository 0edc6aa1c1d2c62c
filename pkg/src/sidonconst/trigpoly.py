"""Trigonometric polynomials and their supremum norm on the circle.

A polynomial ``f(t) = sum_j c_j exp(i lambda_j t)`` is stored as an immutable
map from integer frequency to complex coefficient.  The supremum norm is
computed from the exact coefficient expansion of ``|f|^2``: every sign change
of its derivative on a uniform grid is bracketed and refined, and the norm is
the largest value of ``|f|^2`` over the refined critical points and the grid.
"""

from __future__ import annotations

import cmath
import math
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import ConvergenceError, DomainError

__all__ = [
    "TrigPolynomial",
    "RealTrigPolynomial",
    "SupNormResult",
    "evaluate",
    "modulus_squared",
    "sup_norm",
    "l1_norm",
    "parse_poly",
    "format_poly",
]

TWO_PI = 2.0 * math.pi
MIN_GRID = 1024
OVERSAMPLING = 32
_MAX_REFINE_ITER = 200


class TrigPolynomial(Mapping):
    """Immutable map ``frequency -> coefficient`` with zero terms dropped.

    >>> f = TrigPolynomial({0: 1, 1: 2j, 2: 1})
    >>> f(0.0)
    (2+2j)
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            items = []
        elif isinstance(terms, Mapping):
            items = list(terms.items())
        else:
            items = list(terms)
        store = {}
        for freq, coef in items:
            if isinstance(freq, bool) or int(freq) != freq:
                raise DomainError(f"frequency must be an integer, got {freq!r}")
            freq = int(freq)
            if freq in store:
                raise DomainError(f"duplicate frequency {freq}")
            store[freq] = complex(coef)
        self._terms = {k: store[k] for k in sorted(store) if store[k] != 0}
        self._hash = None

    def __getitem__(self, freq):
        return self._terms[freq]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"TrigPolynomial({self._terms!r})"

    def __call__(self, t):
        return evaluate(self, t)

    @property
    def frequencies(self):
        return tuple(self._terms)

    @property
    def coefficients(self):
        return tuple(self._terms.values())

    @property
    def span(self):
        if not self._terms:
            return 0
        freqs = self.frequencies
        return freqs[-1] - freqs[0]

    def translate(self, a):
        """Return ``t -> f(t + a)``."""
        return TrigPolynomial({k: c * cmath.exp(1j * k * a) for k, c in self._terms.items()})

    def dilate(self, m):
        """Return ``t -> f(m t)`` (every frequency multiplied by ``m``)."""
        if m == 0:
            raise DomainError("dilation factor must be nonzero")
        return TrigPolynomial({k * m: c for k, c in self._terms.items()})

    def scale(self, z):
        return TrigPolynomial({k: c * z for k, c in self._terms.items()})


@dataclass(frozen=True, eq=False)
class RealTrigPolynomial:
    """``constant + sum_m (cos_coefs[m-1] cos(m t) + sin_coefs[m-1] sin(m t))``."""

    constant: float
    cos_coefs: np.ndarray
    sin_coefs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.cos_coefs, dtype=float).copy()
        b = np.asarray(self.sin_coefs, dtype=float).copy()
        if a.shape != b.shape or a.ndim != 1:
            raise DomainError("cosine and sine coefficient arrays must match")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "cos_coefs", a)
        object.__setattr__(self, "sin_coefs", b)

    @property
    def degree(self):
        nonzero = np.flatnonzero((self.cos_coefs != 0) | (self.sin_coefs != 0))
        return int(nonzero[-1]) + 1 if nonzero.size else 0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        m = np.arange(1, self.cos_coefs.size + 1)
        mt = np.multiply.outer(t, m)
        return self.constant + np.cos(mt) @ self.cos_coefs + np.sin(mt) @ self.sin_coefs

    def derivative(self):
        m = np.arange(1, self.cos_coefs.size + 1)
        return RealTrigPolynomial(0.0, m * self.sin_coefs, -m * self.cos_coefs)


@dataclass(frozen=True)
class SupNormResult:
    value: float
    maximizers: tuple = field(default_factory=tuple)
    critical_points: tuple = field(default_factory=tuple)
    residual: float = 0.0
    grid_size: int = 0


def evaluate(poly, t):
    """Evaluate ``poly`` at ``t`` (radians), summing in ascending frequency order."""
    re_parts, im_parts = [], []
    for freq, coef in poly.items():
        w = cmath.exp(1j * math.fmod(freq * t, TWO_PI)) * coef
        re_parts.append(w.real)
        im_parts.append(w.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def _autocorrelation(freqs, coefs):
    """Coefficients ``g_m = sum c_{j+m} conj(c_j)`` for ``m = 0..span``."""
    lo = freqs[0]
    dense = np.zeros(freqs[-1] - lo + 1, dtype=complex)
    dense[np.asarray(freqs) - lo] = coefs
    full = np.correlate(dense, dense, mode="full")
    return full[dense.size - 1:]


def modulus_squared(poly):
    """Exact expansion of ``|f(t)|^2`` as a real trigonometric polynomial."""
    if len(poly) == 0:
        raise DomainError("modulus_squared of the empty polynomial")
    g = _autocorrelation(poly.frequencies, poly.coefficients)
    constant = math.fsum(abs(c) ** 2 for c in poly.coefficients)
    return RealTrigPolynomial(constant, 2.0 * g[1:].real, -2.0 * g[1:].imag)


def l1_norm(poly):
    return math.fsum(abs(c) for c in poly.values())


@lru_cache(maxsize=64)
def _grid_tables(n, degree):
    t = TWO_PI * np.arange(n) / n
    mt = np.multiply.outer(t, np.arange(1, degree + 1))
    return t, np.cos(mt), np.sin(mt)


@njit(cache=True)
def _dp_at(x, a, b):
    """P'(x) for P = sum a_m cos(m x) + b_m sin(m x)."""
    c1, s1 = math.cos(x), math.sin(x)
    c, s = c1, s1
    acc = 0.0
    for j in range(a.size):
        m = j + 1.0
        acc += m * (b[j] * c - a[j] * s)
        c, s = c * c1 - s * s1, s * c1 + c * s1
    return acc


@njit(cache=True)
def _p_at(x, constant, a, b):
    c1, s1 = math.cos(x), math.sin(x)
    c, s = c1, s1
    acc = constant
    for j in range(a.size):
        acc += a[j] * c + b[j] * s
        c, s = c * c1 - s * s1, s * c1 + c * s1
    return acc


@njit(cache=True)
def _refine(lo, hi, flo, fhi, a, b, root_tol, max_iter):
    """Illinois regula falsi with a bisection safeguard on one bracket.

    Returns (root, converged).
    """
    side = 0
    width_mark = hi - lo
    for it in range(max_iter):
        if hi - lo <= root_tol:
            return 0.5 * (lo + hi), True
        x = (lo * fhi - hi * flo) / (fhi - flo)
        if (it % 3 == 2 and hi - lo > 0.5 * width_mark) or not (lo < x < hi):
            x = 0.5 * (lo + hi)
        if it % 3 == 2:
            width_mark = hi - lo
        fx = _dp_at(x, a, b)
        if fx == 0.0:
            return x, True
        if (fx > 0.0) == (fhi > 0.0):
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        else:
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
    return 0.5 * (lo + hi), False


@njit(cache=True)
def _scan_kernel(constant, a, b, t, cos_t, sin_t, root_tol, max_iter):
    n = t.size
    deg = a.size
    p_grid = np.empty(n)
    dp_grid = np.empty(n)
    for i in range(n):
        p = constant
        dp = 0.0
        for j in range(deg):
            m = j + 1.0
            p += a[j] * cos_t[i, j] + b[j] * sin_t[i, j]
            dp += m * (b[j] * cos_t[i, j] - a[j] * sin_t[i, j])
        p_grid[i] = p
        dp_grid[i] = dp
    roots = np.empty(2 * n)
    count = 0
    failed = -1
    step = 2.0 * math.pi / n
    for i in range(n):
        f0 = dp_grid[i]
        f1 = dp_grid[(i + 1) % n]
        if f0 == 0.0:
            roots[count] = t[i]
            count += 1
        elif f0 * f1 < 0.0:
            lo = t[i]
            hi = t[i + 1] if i + 1 < n else 2.0 * math.pi
            x, ok = _refine(lo, hi, f0, f1, a, b, root_tol, max_iter)
            if not ok and failed < 0:
                failed = i
            roots[count] = x % (2.0 * math.pi)
            count += 1
    roots = np.sort(roots[:count])
    p_roots = np.empty(count)
    dp_roots = np.empty(count)
    for i in range(count):
        p_roots[i] = _p_at(roots[i], constant, a, b)
        dp_roots[i] = _dp_at(roots[i], a, b)
    g = 0
    for i in range(1, n):
        if p_grid[i] > p_grid[g]:
            g = i
    return roots, p_roots, dp_roots, p_grid[g], t[g], failed


def _scan(constant, a, b, n, root_tol):
    """One bracketing pass on an ``n``-point grid.

    Returns (roots, P at roots, P' at roots, grid max, argmax on grid).
    """
    t, cos_t, sin_t = _grid_tables(n, a.size)
    roots, p_roots, dp_roots, grid_max, grid_arg, failed = _scan_kernel(
        float(constant), a, b, t, cos_t, sin_t, root_tol, _MAX_REFINE_ITER
    )
    if failed >= 0:
        lo = float(t[failed])
        raise ConvergenceError(
            "bracket refinement did not converge",
            bracket=(lo, lo + TWO_PI / n),
        )
    return roots, p_roots, dp_roots, float(grid_max), float(grid_arg)


def _max_squared(constant, a, b, cfg):
    """Core sup-norm routine on ``P``; returns (max P, roots, P(roots), P'(roots), grid size)."""
    degree = a.size
    n = max(MIN_GRID, OVERSAMPLING * degree)
    for attempt in range(cfg.max_refine + 1):
        roots, p_roots, dp_roots, grid_max, grid_arg = _scan(constant, a, b, n, cfg.root_tol)
        root_max = float(p_roots.max()) if roots.size else -math.inf
        gap = math.sqrt(max(grid_max, 0.0)) - math.sqrt(max(root_max, 0.0)) if roots.size else math.inf
        if roots.size >= 2 * degree or gap <= cfg.norm_tol:
            return max(root_max, grid_max), roots, p_roots, dp_roots, n
        n *= 4
    raise ConvergenceError(
        "critical points of |f|^2 missed after grid refinement",
        bracket=(grid_arg - TWO_PI / n, grid_arg + TWO_PI / n),
        diagnostics={"grid_size": n, "roots_found": int(roots.size), "degree": degree},
    )


def _trim(poly_sq):
    d = poly_sq.degree
    return poly_sq.constant, np.asarray(poly_sq.cos_coefs[:d]), np.asarray(poly_sq.sin_coefs[:d])


def sup_norm(poly, cfg: SolverConfig = DEFAULT_CONFIG) -> SupNormResult:
    """Supremum of ``|f(t)|`` over the circle, with its critical-point certificate.

    Parameters
    ----------
    poly : TrigPolynomial
        Nonempty polynomial.
    cfg : SolverConfig
        ``norm_tol`` bounds the absolute error of the value, ``root_tol`` the
        width of refined derivative brackets.

    Returns
    -------
    SupNormResult
        ``value`` is the norm, ``critical_points`` the refined zeros of the
        derivative of ``|f|^2`` in [0, 2 pi), ``maximizers`` those within
        ``norm_tol`` of the max.  ``residual`` is the largest ``|P'|`` at a
        critical point divided by ``max(1, sum m^2 |p_m|)``, a bound on the
        curvature of ``P = |f|^2``.
    """
    constant, a, b = _trim(modulus_squared(poly))
    if a.size == 0:
        return SupNormResult(math.sqrt(constant), (0.0,), (0.0,), 0.0, 0)
    best, roots, p_roots, dp_roots, n = _max_squared(constant, a, b, cfg)
    value = math.sqrt(max(best, 0.0))
    mods = np.sqrt(np.clip(p_roots, 0.0, None))
    maximizers = roots[mods >= value - cfg.norm_tol]
    m = np.arange(1, a.size + 1)
    curvature = max(1.0, float(np.sum(m * m * np.hypot(a, b))))
    residual = float(np.max(np.abs(dp_roots))) / curvature if roots.size else 0.0
    return SupNormResult(
        value=value,
        maximizers=tuple(float(x) for x in maximizers),
        critical_points=tuple(float(x) for x in roots),
        residual=residual,
        grid_size=n,
    )


@njit(cache=True)
def _tables_nb(n, degree):
    t = np.empty(n)
    cos_t = np.empty((n, degree))
    sin_t = np.empty((n, degree))
    for i in range(n):
        t[i] = 2.0 * math.pi * i / n
        for j in range(degree):
            cos_t[i, j] = math.cos((j + 1) * t[i])
            sin_t[i, j] = math.sin((j + 1) * t[i])
    return t, cos_t, sin_t


@njit(cache=True)
def sup_squared_kernel(offsets, coefs, span, t, cos_t, sin_t, root_tol, norm_tol, max_refine):
    """``max |f|^2`` for coefficients on the support ``offsets`` (shifted to start at 0).

    ``t, cos_t, sin_t`` is the precomputed first-pass grid.  Returns NaN when
    bracket refinement fails or critical points stay missing after
    ``max_refine`` grid refinements.
    """
    g_re = np.zeros(span + 1)
    g_im = np.zeros(span + 1)
    constant = 0.0
    for i in range(coefs.size):
        constant += coefs[i].real ** 2 + coefs[i].imag ** 2
        for j in range(coefs.size):
            mshift = offsets[i] - offsets[j]
            if mshift > 0:
                z = coefs[i] * np.conj(coefs[j])
                g_re[mshift] += z.real
                g_im[mshift] += z.imag
    degree = 0
    for m in range(span, 0, -1):
        if g_re[m] != 0.0 or g_im[m] != 0.0:
            degree = m
            break
    if degree == 0:
        return constant
    a = np.empty(degree)
    b = np.empty(degree)
    for m in range(1, degree + 1):
        a[m - 1] = 2.0 * g_re[m]
        b[m - 1] = -2.0 * g_im[m]
    n = t.size
    for attempt in range(max_refine + 1):
        if attempt > 0:
            n *= 4
            t, cos_t, sin_t = _tables_nb(n, degree)
        roots, p_roots, dp_roots, grid_max, grid_arg, failed = _scan_kernel(
            constant, a, b, t, cos_t[:, :degree], sin_t[:, :degree], root_tol, _MAX_REFINE_ITER
        )
        if failed >= 0:
            return np.nan
        if roots.size == 0:
            continue
        root_max = p_roots.max()
        gap = math.sqrt(max(grid_max, 0.0)) - math.sqrt(max(root_max, 0.0))
        if roots.size >= 2 * degree or gap <= norm_tol:
            return max(root_max, grid_max)
    return np.nan


@lru_cache(maxsize=256)
def support_plan(freqs):
    """Shifted offsets, span and first-pass grid tables for a sorted frequency tuple."""
    offsets = np.asarray(freqs, dtype=np.int64) - freqs[0]
    span = int(offsets[-1])
    n = max(MIN_GRID, OVERSAMPLING * span)
    t, cos_t, sin_t = _grid_tables(n, max(span, 1))
    return offsets, span, t, cos_t, sin_t


def sup_squared_dense(freqs, coefs, cfg: SolverConfig = DEFAULT_CONFIG):
    """``max |f|^2`` for a fixed sorted frequency tuple and a coefficient array.

    Same algorithm as :func:`sup_norm`; meant for optimizer inner loops where
    the support is fixed and only the coefficients move.
    """
    offsets, span, t, cos_t, sin_t = support_plan(tuple(freqs))
    coefs = np.asarray(coefs, dtype=complex)
    best = sup_squared_kernel(
        offsets, coefs, span, t, cos_t, sin_t, cfg.root_tol, cfg.norm_tol, cfg.max_refine
    )
    if math.isnan(best):
        # the general path raises a ConvergenceError with diagnostics
        return sup_norm(TrigPolynomial(zip(freqs, coefs)), cfg).value ** 2
    return best


_TERM = re.compile(r"^([+-]?\d+):([^,]+),([^,]+)$")


def parse_poly(text):
    """Parse ``"0:1,0;1:0,2;2:1,0"`` (``freq:re,im`` terms) into a polynomial."""
    cleaned = re.sub(r"\s+", "", text)
    if not cleaned:
        raise DomainError("empty polynomial text")
    terms = []
    seen = set()
    for chunk in cleaned.strip(";").split(";"):
        match = _TERM.match(chunk)
        if match is None:
            raise DomainError(f"malformed term {chunk!r}, expected freq:re,im")
        freq = int(match.group(1))
        if freq in seen:
            raise DomainError(f"duplicate frequency {freq}")
        seen.add(freq)
        try:
            coef = complex(float(match.group(2)), float(match.group(3)))
        except ValueError as exc:
            raise DomainError(f"bad coefficient in {chunk!r}") from exc
        terms.append((freq, coef))
    return TrigPolynomial(terms)


def format_poly(poly, digits=12):
    return ";".join(
        f"{k}:{c.real:.{digits}g},{c.imag:.{digits}g}" for k, c in poly.items()
    )
