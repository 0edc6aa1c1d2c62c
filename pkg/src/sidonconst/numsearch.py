"""Numerical lower bounds for Sidon and real unconditionality constants.

Both constants are suprema of a ratio of sup-norms over coefficient vectors.
The search fixes the gauge ``c_0 = 1`` (smallest frequency) and runs a
deterministic multistart Nelder-Mead descent over the remaining moduli and
phases.  Every objective evaluation uses the certified sup-norm, so the
returned value is a lower bound of the true constant.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.stats import qmc

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import ConvergenceError, DomainError
from .minimax import NormalizedTriple, min_phase
from .sidon import closed_constant, extremal_polynomial, optimal_rs, reduce_triple
from .trigpoly import (
    TrigPolynomial,
    l1_norm,
    sup_norm,
    sup_squared_dense,
    sup_squared_kernel,
    support_plan,
)

__all__ = [
    "SearchConfig",
    "SearchResult",
    "sidon_numeric",
    "real_unconditional_numeric",
    "real_ratio",
    "subset_lower_bound",
    "geometric_bounds",
]

log = logging.getLogger(__name__)

_LATTICE_PHASES = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)
_LATTICE_MODULI = (0.5, 1.0, 2.0)
MAX_REAL_TERMS = 20


@dataclass(frozen=True)
class SearchConfig:
    starts: int = 64
    max_iters: int = 2000
    simplex_tol: float = 1e-10
    value_tol: float = 1e-9
    magnitude_cap: float = 16.0
    restarts: int = 2

    def __post_init__(self):
        for name in ("starts", "max_iters", "simplex_tol", "value_tol", "magnitude_cap"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be nonnegative")

    @classmethod
    def for_size(cls, n, **overrides):
        """Defaults: 64 starts up to three frequencies, 256 beyond."""
        overrides.setdefault("starts", 64 if n <= 3 else 256)
        return cls(**overrides)


@dataclass(frozen=True)
class SearchResult:
    value: float
    witness: TrigPolynomial
    iterations: int
    converged: bool
    best_start: int = 0
    starts_run: int = 0


def _check_set(lambdas, minimum=2):
    vals = []
    for v in lambdas:
        if isinstance(v, bool) or int(v) != v:
            raise DomainError(f"frequencies must be integers, got {v!r}")
        vals.append(int(v))
    if len(set(vals)) != len(vals):
        raise DomainError(f"frequencies must be distinct, got {tuple(vals)}")
    if len(vals) < minimum:
        raise DomainError(f"need at least {minimum} frequencies, got {len(vals)}")
    return tuple(sorted(vals))


def _lattice_starts(m, count):
    """First ``count`` distinct lattice points in Halton order.

    Coordinates: ``m`` moduli from {0.5, 1, 2} then ``m`` phases from
    {0, pi/2, pi, 3pi/2}.
    """
    total = (len(_LATTICE_MODULI) * len(_LATTICE_PHASES)) ** m
    count = min(count, total)
    sampler = qmc.Halton(d=2 * m, scramble=False)
    seen, out = set(), []
    while len(out) < count:
        for u in sampler.random(max(64, 4 * count)):
            idx = tuple(
                int(u[j] * len(_LATTICE_MODULI)) if j < m else int(u[j] * len(_LATTICE_PHASES))
                for j in range(2 * m)
            )
            if idx in seen:
                continue
            seen.add(idx)
            out.append(
                [_LATTICE_MODULI[i] for i in idx[:m]] + [_LATTICE_PHASES[i] for i in idx[m:]]
            )
            if len(out) == count:
                break
    return out


def _coefs_from_params(x, m, cap):
    rho = np.clip(x[:m], 0.0, cap)
    coefs = np.empty(m + 1, dtype=complex)
    coefs[0] = 1.0
    coefs[1:] = rho * np.exp(1j * x[m:])
    return coefs


def _params_from_poly(freqs, poly):
    c = np.array([poly.get(f, 0.0) for f in freqs], dtype=complex) / poly[freqs[0]]
    return list(np.abs(c[1:])) + list(np.angle(c[1:]) % (2 * math.pi))


@njit(cache=True)
def _objective(x, real, m, cap, offsets, span, t, cos_t, sin_t, patterns, tols, max_refine):
    """Negated ratio (Sidon when ``real`` is False) plus the box penalty on moduli."""
    coefs = np.empty(m + 1, dtype=np.complex128)
    coefs[0] = 1.0
    penalty = 0.0
    l1 = 1.0
    for j in range(m):
        rho = min(max(x[j], 0.0), cap)
        penalty += abs(x[j] - rho)
        l1 += rho
        coefs[j + 1] = rho * complex(math.cos(x[m + j]), math.sin(x[m + j]))
    base = sup_squared_kernel(offsets, coefs, span, t, cos_t, sin_t, tols[0], tols[1], max_refine)
    if not real:
        return -l1 / math.sqrt(base) + penalty
    flipped = 0.0
    for p in range(patterns.shape[0]):
        v = sup_squared_kernel(
            offsets, coefs * patterns[p], span, t, cos_t, sin_t, tols[0], tols[1], max_refine
        )
        if not v <= flipped:
            flipped = v
    return -math.sqrt(flipped / base) + penalty


@njit(cache=True)
def _nelder_mead(simplex, real, m, cap, offsets, span, t, cos_t, sin_t, patterns, tols,
                 max_refine, xatol, fatol, maxiter):
    """Standard simplex descent (reflect 1, expand 2, contract 1/2, shrink 1/2).

    Stops when every vertex is within ``xatol`` of the best in each
    coordinate and within ``fatol`` in value.  NaN objective values rank last.
    Returns (best x, best value, iterations, converged).
    """
    npts, dim = simplex.shape
    fs = np.empty(npts)
    for i in range(npts):
        fs[i] = _objective(simplex[i], real, m, cap, offsets, span, t, cos_t, sin_t,
                           patterns, tols, max_refine)
        if math.isnan(fs[i]):
            fs[i] = np.inf
    it = 0
    converged = False
    while it < maxiter:
        order = np.argsort(fs, kind="mergesort")
        simplex = simplex[order]
        fs = fs[order]
        spread_x = 0.0
        spread_f = 0.0
        for i in range(1, npts):
            spread_f = max(spread_f, abs(fs[i] - fs[0]))
            for j in range(dim):
                spread_x = max(spread_x, abs(simplex[i, j] - simplex[0, j]))
        if spread_x <= xatol and spread_f <= fatol:
            converged = True
            break
        it += 1
        centroid = np.zeros(dim)
        for i in range(npts - 1):
            centroid += simplex[i]
        centroid /= npts - 1
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = _objective(xr, real, m, cap, offsets, span, t, cos_t, sin_t, patterns, tols, max_refine)
        if math.isnan(fr):
            fr = np.inf
        if fr < fs[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = _objective(xe, real, m, cap, offsets, span, t, cos_t, sin_t, patterns, tols, max_refine)
            if math.isnan(fe):
                fe = np.inf
            if fe < fr:
                simplex[-1], fs[-1] = xe, fe
            else:
                simplex[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            simplex[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = centroid + 0.5 * (xr - centroid)
        else:
            xc = centroid + 0.5 * (worst - centroid)
        fc = _objective(xc, real, m, cap, offsets, span, t, cos_t, sin_t, patterns, tols, max_refine)
        if math.isnan(fc):
            fc = np.inf
        if fc < min(fr, fs[-1]):
            simplex[-1], fs[-1] = xc, fc
            continue
        for i in range(1, npts):
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            fs[i] = _objective(simplex[i], real, m, cap, offsets, span, t, cos_t, sin_t,
                               patterns, tols, max_refine)
            if math.isnan(fs[i]):
                fs[i] = np.inf
    best = np.argmin(fs)
    return simplex[best].copy(), fs[best], it, converged


def _initial_simplex(x0, m):
    x0 = np.asarray(x0, dtype=float)
    simplex = np.tile(x0, (2 * m + 1, 1))
    for j in range(2 * m):
        simplex[j + 1, j] += 0.3 * x0[j] if x0[j] > 0 and j < m else 0.4
    return simplex


def _multistart(freqs, starts, real, cfg: SearchConfig, solver: SolverConfig):
    """Descend from every start; best by value, ties to the lowest start index."""
    m = len(freqs) - 1
    offsets, span, t, cos_t, sin_t = support_plan(freqs)
    patterns = _sign_patterns(m) if real else np.ones((1, m + 1))
    tols = np.array([solver.root_tol, solver.norm_tol])
    args = (real, m, float(cfg.magnitude_cap), offsets, span, t, cos_t, sin_t, patterns, tols,
            int(solver.max_refine))
    best = None
    for i, x0 in enumerate(starts):
        x = np.asarray(x0, dtype=float)
        fx = _objective(x, *args)
        iters, converged = 0, False
        for _ in range(cfg.restarts + 1):
            budget = cfg.max_iters - iters
            if budget <= 0:
                break
            xn, fn, nit, converged = _nelder_mead(
                _initial_simplex(x, m), *args, cfg.simplex_tol, cfg.value_tol, budget
            )
            iters += nit
            improved = fx - fn if math.isfinite(fx) else np.inf
            if fn < fx or not math.isfinite(fx):
                x, fx = xn, fn
            if not improved > cfg.value_tol:
                break
        if not math.isfinite(fx):
            log.debug("start %d produced no finite objective", i)
            continue
        if best is None or fx < best[1]:
            best = (x, fx, iters, converged, i)
    if best is None:
        raise ConvergenceError(
            "every start of the multistart search failed",
            diagnostics={"starts": len(starts)},
        )
    return best


def _informed_start(lambdas):
    """Coefficients of the extremal ``1 + r e^{i pi/l} e_k + s e_l`` placed on ``lambdas``."""
    tr = reduce_triple(lambdas)
    r, s = optimal_rs(tr.k, tr.l)
    theta = min_phase(NormalizedTriple(r, s, tr.k, tr.l))
    return [r, s, theta, 0.0]


def sidon_numeric(lambdas, cfg: SearchConfig | None = None, solver: SolverConfig = DEFAULT_CONFIG):
    """Lower bound of the Sidon constant of ``lambdas`` by multistart simplex search.

    Maximises ``sum |c_j| / ||sum c_j e_{lambda_j}||_inf`` with ``c_0 = 1``.
    For three frequencies the start built from the closed-form optimum is
    tried first.
    """
    freqs = _check_set(lambdas)
    cfg = cfg or SearchConfig.for_size(len(freqs))
    starts = _lattice_starts(len(freqs) - 1, cfg.starts)
    if len(freqs) == 3:
        starts.insert(0, _informed_start(freqs))
    return _finish(freqs, _multistart(freqs, starts, False, cfg, solver), cfg, len(starts), solver)


def _sign_patterns(m):
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=m)))
    out = np.ones((signs.shape[0], m + 1))
    out[:, 1:] = signs
    return out


def real_ratio(poly, solver: SolverConfig = DEFAULT_CONFIG):
    """``max_eps ||sum eps_j c_j e_j|| / ||f||`` over sign vectors with ``eps_0 = +1``."""
    freqs = poly.frequencies
    coefs = np.array(poly.coefficients)
    base = sup_norm(poly, solver).value
    best = max(
        math.sqrt(sup_squared_dense(freqs, eps * coefs, solver))
        for eps in _sign_patterns(len(freqs) - 1)
    )
    return best / base


def real_unconditional_numeric(
    lambdas, cfg: SearchConfig | None = None, solver: SolverConfig = DEFAULT_CONFIG
):
    """Lower bound of the real unconditionality constant of ``(e_lambda)`` in C(T).

    Maximises ``max_eps ||sum eps_j c_j e_j|| / ||sum c_j e_j||`` over
    coefficients, the inner maximum running over all ``2^(n-1)`` sign
    vectors with ``eps_0 = +1``.
    """
    freqs = _check_set(lambdas)
    if len(freqs) > MAX_REAL_TERMS:
        raise DomainError(f"at most {MAX_REAL_TERMS} frequencies for the sign enumeration")
    cfg = cfg or SearchConfig.for_size(len(freqs))
    starts = _lattice_starts(len(freqs) - 1, cfg.starts)
    if len(freqs) == 3:
        starts.insert(0, _params_from_poly(freqs, extremal_polynomial(freqs)))
    best = _multistart(freqs, starts, True, cfg, solver)
    return _finish(freqs, best, cfg, len(starts), solver, real=True)


def _finish(freqs, best, cfg, n_starts, solver, real=False):
    x, _, iters, converged, idx = best
    coefs = _coefs_from_params(np.asarray(x), len(freqs) - 1, cfg.magnitude_cap)
    witness = TrigPolynomial(zip(freqs, coefs))
    if real:
        value = real_ratio(witness, solver)
    else:
        value = l1_norm(witness) / sup_norm(witness, solver).value
    return SearchResult(value, witness, iters, converged, idx, n_starts)


def subset_lower_bound(lambdas):
    """Largest closed-form constant over three-element subsets.

    Returns ``(value, subset)``; ties go to the lexicographically first subset.
    """
    freqs = _check_set(lambdas, minimum=3)
    best_n, best_sub = None, None
    for sub in itertools.combinations(freqs, 3):
        n = reduce_triple(sub).n
        if best_n is None or n < best_n:
            best_n, best_sub = n, sub
    return closed_constant(best_sub), reduce_triple(best_sub)


def geometric_bounds(q):
    """Bounds ``(lower, upper)`` on the Sidon constant of ``{q^k}``.

    lower = 1 + pi^2 / (8 max(-q, q+1)^2), upper = 1 + pi^2 / (2q^2 - 2 - pi^2).
    """
    if isinstance(q, bool) or int(q) != q:
        raise DomainError(f"q must be an integer, got {q!r}")
    q = int(q)
    if abs(q) <= 2:
        raise DomainError(f"need |q| >= 3, got {q}")
    pi2 = math.pi ** 2
    lower = 1.0 + pi2 / (8.0 * max(-q, q + 1) ** 2)
    upper = 1.0 + pi2 / (2.0 * q * q - 2.0 - pi2)
    return lower, upper
