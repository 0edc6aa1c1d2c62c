"""Optimal phases for three-term exponential sums.

For fixed moduli, ``max_t |rho_0 e^{i(l0 t + th0)} + rho_1 e^{i(l1 t + th1)} +
rho_2 e^{i(l2 t + th2)}|`` depends on the phases only through one combined
angle.  After normalisation the sum reads ``1 + r e^{i theta} e_k + s e_l``
and its squared modulus is the two-parameter surface ``phi(t, theta)``.
Its upper envelope ``phi_star(theta) = max_t phi(t, theta)`` is even,
``2 pi/|l|``-periodic and decreasing on ``[0, pi/|l|]``, so the minimax phase
is ``pi/l``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import DomainError
from .trigpoly import TWO_PI, TrigPolynomial, sup_norm

__all__ = [
    "NormalizedTriple",
    "PhaseProfile",
    "DaggerSolution",
    "CriticalPoint",
    "CriticalPointReport",
    "Lemma32Report",
    "phi",
    "phi_star",
    "min_phase",
    "solve_dagger",
    "check_critical_points",
    "lemma32_report",
]


@dataclass(frozen=True)
class NormalizedTriple:
    """Moduli ``r, s`` and frequencies ``k, l`` of ``1 + r e^{i theta} e_k + s e_l``.

    A common factor of ``k`` and ``l`` is divided out on construction and
    kept in ``d``.
    """

    r: float
    s: float
    k: int
    l: int
    d: int = field(default=1, init=False)

    def __post_init__(self):
        if not (self.r > 0 and self.s > 0):
            raise DomainError(f"r and s must be positive, got r={self.r}, s={self.s}")
        if int(self.k) != self.k or int(self.l) != self.l:
            raise DomainError("k and l must be integers")
        k, l = int(self.k), int(self.l)
        if k == 0 or l == 0 or k == l:
            raise DomainError(f"k and l must be distinct and nonzero, got ({k}, {l})")
        d = math.gcd(k, l)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "k", k // d)
        object.__setattr__(self, "l", l // d)
        object.__setattr__(self, "d", d)

    def polynomial(self, theta):
        return TrigPolynomial({0: 1.0, self.k: self.r * np.exp(1j * theta), self.l: self.s})


@dataclass(frozen=True)
class PhaseProfile:
    """Phases in radians, one per frequency, reduced to [0, 2 pi)."""

    phases: tuple

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(float(p) % TWO_PI for p in self.phases))

    def __iter__(self):
        return iter(self.phases)

    def __len__(self):
        return len(self.phases)

    def __getitem__(self, i):
        return self.phases[i]


@dataclass(frozen=True)
class DaggerSolution:
    phases: PhaseProfile
    min_max_value: float
    witness_t: tuple
    d: int


def phi(nt: NormalizedTriple, t, theta):
    """``|1 + r e^{i theta} e^{ikt} + s e^{ilt}|^2`` through its cosine expansion."""
    r, s, k, l = nt.r, nt.s, nt.k, nt.l
    return (
        1.0 + r * r + s * s
        + 2.0 * r * np.cos(k * t + theta)
        + 2.0 * s * np.cos(l * t)
        + 2.0 * r * s * np.cos((l - k) * t - theta)
    )


def phi_star(nt: NormalizedTriple, theta, cfg: SolverConfig = DEFAULT_CONFIG):
    """``max_t phi(t, theta)``, through the rigorous sup-norm."""
    return sup_norm(nt.polynomial(theta), cfg).value ** 2


def min_phase(nt: NormalizedTriple):
    return (math.pi / nt.l) % TWO_PI


def _dagger_patterns():
    # theta_0 is the fastest-varying coordinate
    for bits in itertools.product((0, 1), repeat=3):
        yield bits[::-1]


def solve_dagger(lambdas, rhos, cfg: SolverConfig = DEFAULT_CONFIG) -> DaggerSolution:
    """Phases in {0, pi} minimising the sup-norm for fixed moduli.

    The minimising phases are exactly those with
    ``th0 (l2 - l1) + th1 (l0 - l2) + th2 (l1 - l0) = d pi  (mod 2 d pi)``,
    ``d = gcd(l1 - l0, l2 - l0)``.  Patterns are tried in the order
    ``(0,0,0), (pi,0,0), (0,pi,0), (pi,pi,0), ...`` and the first match wins.
    """
    lambdas = tuple(lambdas)
    rhos = tuple(float(x) for x in rhos)
    if len(lambdas) != 3 or len(rhos) != 3:
        raise DomainError("solve_dagger needs three frequencies and three moduli")
    if any(int(x) != x for x in lambdas):
        raise DomainError("frequencies must be integers")
    l0, l1, l2 = (int(x) for x in lambdas)
    if len({l0, l1, l2}) != 3:
        raise DomainError(f"frequencies must be distinct, got {lambdas}")
    if not all(x > 0 for x in rhos):
        raise DomainError("moduli must be positive")
    d = math.gcd(l1 - l0, l2 - l0)
    weights = (l2 - l1, l0 - l2, l1 - l0)
    for bits in _dagger_patterns():
        if sum(b * w for b, w in zip(bits, weights)) % (2 * d) == d:
            break
    else:  # pragma: no cover - the congruence always has a {0, pi} solution
        raise AssertionError(f"no phase pattern satisfies the congruence for {lambdas}")
    phases = PhaseProfile(tuple(math.pi * b for b in bits))
    poly = TrigPolynomial({lam: rho * (-1.0 if b else 1.0) for lam, rho, b in zip((l0, l1, l2), rhos, bits)})
    res = sup_norm(poly, cfg)
    return DaggerSolution(phases, res.value, res.maximizers, d)


# Critical points of |f|^2 for f = 1 + sum_{i<K} rho_i e^{i(lam_i t + th_i)} + rho_K e^{i lam_K t}


@dataclass(frozen=True)
class CriticalPoint:
    t: float
    thetas: tuple
    grad_norm: float
    modulus: float
    zero_flag: bool
    congruence_flag: bool

    @property
    def passed(self):
        return self.zero_flag or self.congruence_flag


@dataclass(frozen=True)
class CriticalPointReport:
    freqs: tuple
    rhos: tuple
    points: tuple
    failed_starts: tuple

    @property
    def passed(self):
        return all(p.passed for p in self.points)


def _lemma_family(poly):
    """Split a polynomial of shape ``1 + ... + rho_K e_{lam_K}`` into its pieces.

    The last term (largest frequency) must have a positive real coefficient;
    the arguments of the middle terms are returned as seed phases.
    """
    if poly.get(0) != 1:
        raise DomainError("expected coefficient 1 at frequency 0")
    rest = [(k, c) for k, c in poly.items() if k != 0]
    if not rest:
        raise DomainError("expected at least one nonconstant term")
    last_freq, last_coef = rest[-1]
    if last_coef.imag != 0 or last_coef.real <= 0:
        raise DomainError("last term must have a positive real coefficient")
    freqs = tuple(k for k, _ in rest)
    rhos = tuple(abs(c) for _, c in rest)
    seeds = tuple(float(np.angle(c)) for _, c in rest[:-1])
    return freqs, rhos, seeds


def _grad_hess(x, lam, rho):
    """Gradient and Hessian of |f|^2 in (t, th_1..th_{K-1}).

    ``x[0] = t``; the phase of the last term is pinned to zero.
    """
    K = lam.size
    t = x[0]
    th = np.zeros(K)
    th[:-1] = x[1:]
    ang = lam * t + th
    z = rho * np.exp(1j * ang)
    f = 1.0 + z.sum()
    # df/dx_j for x = (t, th_1..th_{K-1})
    dz = np.empty((K, x.size), dtype=complex)
    dz[:, 0] = 1j * lam * z
    dz[:, 1:] = 0.0
    dz[np.arange(K - 1), 1 + np.arange(K - 1)] = 1j * z[:-1]
    df = dz.sum(axis=0)
    grad = 2.0 * np.real(np.conj(f) * df)
    # second derivatives of f: d2 z_i / dx_a dx_b = (i w_a)(i w_b) z_i with w = d ang_i / dx
    w = np.zeros((K, x.size))
    w[:, 0] = lam
    w[np.arange(K - 1), 1 + np.arange(K - 1)] = 1.0
    d2f = -np.einsum("i,ia,ib->ab", z, w, w)
    hess = 2.0 * np.real(np.outer(np.conj(df), df) + np.conj(f) * d2f)
    return grad, hess, abs(f)


def _weyl_starts(n_starts, dim):
    # Kronecker sequence with square roots of primes: deterministic and well spread
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    alphas = np.sqrt(np.asarray(primes[:dim], dtype=float))
    j = np.arange(1, n_starts + 1)[:, None]
    return TWO_PI * ((j * alphas) % 1.0)


def _dist_to_pi_multiple(x):
    y = x % math.pi
    return min(y, math.pi - y)


def check_critical_points(poly, cfg: SolverConfig = DEFAULT_CONFIG, starts=20):
    """Locate joint critical points of ``|f(t, theta)|^2`` and test their shape.

    At each critical point either ``f = 0`` or every ``lam_i t + th_i`` and
    ``lam_K t`` is a multiple of pi.  Critical points are found from
    ``starts`` deterministic seeds by Powell's hybrid method on the gradient
    system (analytic Hessian), followed by Newton polishing.  Seeds that do
    not reach ``cfg.grad_tol`` are listed in ``failed_starts``.
    """
    freqs, rhos, seeds = _lemma_family(poly)
    lam = np.asarray(freqs, dtype=float)
    rho = np.asarray(rhos, dtype=float)
    dim = len(freqs)
    x0s = _weyl_starts(starts, dim)
    if seeds:
        x0s[0, 1:] = seeds

    points, failed = [], []
    for i, x0 in enumerate(x0s):
        sol = optimize.root(
            lambda x: _grad_hess(x, lam, rho)[0], x0, jac=lambda x: _grad_hess(x, lam, rho)[1],
            method="hybr", options={"xtol": 1e-14},
        )
        x = sol.x
        grad, hess, mod = _grad_hess(x, lam, rho)
        for _ in range(8):
            if np.linalg.norm(grad) < cfg.grad_tol:
                break
            try:
                step = np.linalg.lstsq(hess, -grad, rcond=None)[0]
            except np.linalg.LinAlgError:
                break
            x = x + step
            grad, hess, mod = _grad_hess(x, lam, rho)
        gnorm = float(np.linalg.norm(grad))
        if not gnorm < cfg.grad_tol:
            failed.append((i, tuple(float(v) for v in x0), gnorm))
            continue
        x = x % TWO_PI
        t, th = float(x[0]), tuple(float(v) for v in x[1:])
        angles = [lam[j] * t + (th[j] if j < dim - 1 else 0.0) for j in range(dim)]
        cong = all(_dist_to_pi_multiple(a) <= cfg.cong_tol for a in angles)
        points.append(CriticalPoint(t, th, gnorm, float(mod), bool(mod < cfg.zero_tol), cong))

    return CriticalPointReport(freqs, rhos, tuple(_dedupe(points)), tuple(failed))


def _dedupe(points, tol=1e-7):
    kept = []
    for p in points:
        key = np.array((p.t,) + p.thetas)
        if not any(
            np.all(np.abs((key - np.array((q.t,) + q.thetas) + math.pi) % TWO_PI - math.pi) < tol)
            for q in kept
        ):
            kept.append(p)
    return kept


@dataclass(frozen=True)
class Lemma32Report:
    triple: NormalizedTriple
    samples: int
    evenness: float
    periodicity: float
    monotonicity: float

    def passed(self, tol_sym=1e-9, tol_mono=1e-9):
        return self.evenness <= tol_sym and self.periodicity <= tol_sym and self.monotonicity <= tol_mono


def lemma32_report(nt: NormalizedTriple, samples=64, cfg: SolverConfig = DEFAULT_CONFIG):
    """Measure how far sampled ``phi_star`` is from being even, periodic and monotone.

    Symmetry is probed at ``samples`` equispaced phases in [-2 pi, 2 pi];
    monotonicity at ``samples`` equispaced phases in [0, pi/|l|] (largest
    ascent between consecutive samples).
    """
    if samples < 8:
        raise DomainError("lemma32_report needs at least 8 samples")
    period = TWO_PI / abs(nt.l)
    thetas = np.linspace(-2.0 * math.pi, 2.0 * math.pi, samples)
    even = period_gap = 0.0
    for th in thetas:
        v = phi_star(nt, th, cfg)
        even = max(even, abs(v - phi_star(nt, -th, cfg)))
        period_gap = max(period_gap, abs(v - phi_star(nt, th + period, cfg)))
    mono_grid = np.linspace(0.0, math.pi / abs(nt.l), samples)
    vals = np.array([phi_star(nt, th, cfg) for th in mono_grid])
    ascent = float(max(0.0, np.max(np.diff(vals))))
    return Lemma32Report(nt, samples, even, period_gap, ascent)
