"""Property suites behind ``sidon verify``.

Each check returns a :class:`Check` with a one-line detail.  The quick suite
uses small deterministic corpora; the full suite uses the larger corpora
the acceptance tests run.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG
from .minimax import (
    NormalizedTriple,
    check_critical_points,
    lemma32_report,
    min_phase,
    phi,
    phi_star,
    solve_dagger,
)
from .numsearch import (
    SearchConfig,
    geometric_bounds,
    real_unconditional_numeric,
    sidon_numeric,
    subset_lower_bound,
)
from .sidon import (
    case_formula_012,
    case_formula_013,
    closed_constant,
    combined_phase,
    extremal_polynomial,
    reduce_triple,
)
from .trigpoly import TrigPolynomial, l1_norm, sup_norm

SUITES = ("quick", "full")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def random_polys(count, seed=0, max_terms=5, max_freq=8):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_terms + 1))
        freqs = rng.choice(np.arange(-max_freq, max_freq + 1), size=k, replace=False)
        coefs = rng.normal(size=k) + 1j * rng.normal(size=k)
        out.append(TrigPolynomial(zip(freqs.tolist(), coefs)))
    return out


def _worst(name, values, tol, fmt="max deviation {:.3e} (tol {:.0e})"):
    worst = max(values) if values else 0.0
    return Check(name, bool(worst <= tol), fmt.format(worst, tol))


def check_parseval(polys, cfg=DEFAULT_CONFIG):
    bad = 0.0
    for p in polys:
        v = sup_norm(p, cfg).value
        l2 = math.sqrt(sum(abs(c) ** 2 for c in p.values()))
        bad = max(bad, l2 - v, v - l1_norm(p))
    return _worst("parseval sandwich", [bad], 2 * cfg.norm_tol)


def check_translation(polys, cfg=DEFAULT_CONFIG, seed=1):
    rng = np.random.default_rng(seed)
    devs = []
    for p in polys:
        a = float(rng.uniform(0, 2 * math.pi))
        devs.append(abs(sup_norm(p.translate(a), cfg).value - sup_norm(p, cfg).value))
    return _worst("translation invariance", devs, 2 * cfg.norm_tol)


def check_modulation(polys, cfg=DEFAULT_CONFIG):
    devs = []
    for p, m in zip(polys, itertools.cycle((2, -1, 3, -2))):
        devs.append(abs(sup_norm(p.dilate(m), cfg).value - sup_norm(p, cfg).value))
    return _worst("modulation invariance", devs, 2 * cfg.norm_tol)


def check_global_phase(polys, cfg=DEFAULT_CONFIG):
    devs = []
    for p, a in zip(polys, itertools.cycle((0.3, 1.7, 2.9))):
        v = sup_norm(p, cfg).value
        devs.append(abs(sup_norm(p.scale(cmath.exp(1j * a)), cfg).value - v) / max(1.0, v))
    return _worst("global phase invariance", devs, 1e-12)


def check_dense_oracle(polys, points, cfg=DEFAULT_CONFIG):
    t = np.linspace(0.0, 2 * math.pi, points, endpoint=False)
    devs = []
    for p in polys:
        freqs = np.array(p.frequencies)
        coefs = np.array(p.coefficients)
        dense = 0.0
        for chunk in np.array_split(t, max(1, points // 100_000)):
            dense = max(dense, float(np.abs(np.exp(1j * np.outer(chunk, freqs)) @ coefs).max()))
        devs.append(abs(sup_norm(p, cfg).value - dense))
    return _worst(f"dense-grid oracle ({points} pts)", devs, 1e-7)


def check_phi_polynomial(cases):
    devs = []
    for nt, t, th in cases:
        direct = abs(nt.polynomial(th)(t)) ** 2
        devs.append(abs(phi(nt, t, th) - direct))
    return _worst("phi equals |polynomial|^2", devs, 1e-12)


def check_reindexing(cases):
    devs = [abs(phi(nt, t, -th) - phi(nt, -t, th)) for nt, t, th in cases]
    return _worst("phi(t,-theta) = phi(-t,theta)", devs, 1e-12)


def check_min_phase(triples, cfg=DEFAULT_CONFIG):
    misses = []
    for nt in triples:
        step = math.pi / (64 * abs(nt.l))
        grid = np.arange(0.0, 2 * math.pi, step)
        vals = np.array([phi_star(nt, th, cfg) for th in grid])
        at_min = phi_star(nt, min_phase(nt), cfg)
        misses.append(max(0.0, at_min - vals.min()))
    return _worst("phi_star minimised at pi/l", misses, 1e-9)


def check_dagger_minimality(cases, cfg=DEFAULT_CONFIG, profiles=32, seed=2):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for lambdas, rhos in cases:
        sol = solve_dagger(lambdas, rhos, cfg)
        for _ in range(profiles):
            th = rng.uniform(0, 2 * math.pi, size=3)
            poly = TrigPolynomial({lam: r * cmath.exp(1j * a) for lam, r, a in zip(lambdas, rhos, th)})
            worst = max(worst, sol.min_max_value - sup_norm(poly, cfg).value)
    return _worst("dagger phases are minimax", [worst], cfg.norm_tol)


def check_lemma32(triples, samples, cfg=DEFAULT_CONFIG, sym_tol=1e-8, mono_tol=1e-7):
    sym, mono = [], []
    for nt in triples:
        rep = lemma32_report(nt, samples, cfg)
        sym.append(max(rep.evenness, rep.periodicity))
        mono.append(rep.monotonicity)
    s = _worst("phi_star even and periodic", sym, sym_tol)
    m = _worst("phi_star decreasing on [0, pi/|l|]", mono, mono_tol)
    return [s, m]


def check_critical(polys, cfg=DEFAULT_CONFIG, starts=20):
    located = failed = 0
    ok = True
    for p in polys:
        rep = check_critical_points(p, cfg, starts=starts)
        located += len(rep.points)
        failed += sum(not pt.passed for pt in rep.points)
        ok = ok and rep.passed and len(rep.points) > 0
    return Check(
        "critical points: f = 0 or congruent mod pi",
        ok,
        f"{located} critical points located, {failed} violations",
    )


def check_constant_invariance(triples):
    devs = []
    for tr in triples:
        c = closed_constant(tr)
        for image in (
            [x + 7 for x in tr],
            [3 * x for x in tr],
            [-x for x in tr],
        ):
            devs.append(abs(closed_constant(image) - c))
    return _worst("closed constant: translation/dilation/reflection", devs, 0.0)


def check_constant_range(triples):
    ok = True
    for tr in triples:
        c = closed_constant(tr)
        n = reduce_triple(tr).n
        ok &= 1.0 < c <= math.sqrt(2) + 1e-15
        ok &= (abs(c - math.sqrt(2)) < 1e-15) == (n == 2)
    return Check("1 < closed constant <= sqrt 2, equality iff n = 2", bool(ok), f"{len(triples)} triples")


def _rs_grid(step):
    vals = np.round(np.arange(0.1, 4.0 + 1e-9, step), 10)
    return [(float(r), float(s)) for r in vals for s in vals]


def check_case_formulas(step, cfg=DEFAULT_CONFIG):
    grid = _rs_grid(step)
    d12 = [abs(case_formula_012(r, s) - sup_norm(TrigPolynomial({0: 1, 1: 1j * r, 2: s}), cfg).value)
           for r, s in grid]
    w = cmath.exp(1j * math.pi / 3)
    d13 = [abs(case_formula_013(r, s) - sup_norm(TrigPolynomial({0: 1, 1: r * w, 3: s}), cfg).value)
           for r, s in grid]
    return [
        _worst("case formula {0,1,2}", d12, 1e-8),
        _worst("case formula {0,1,3}", d13, 1e-8),
    ]


def check_extremal(triples, cfg=DEFAULT_CONFIG):
    devs, cong_ok = [], True
    for tr in triples:
        f = extremal_polynomial(tr)
        devs.append(abs(l1_norm(f) / sup_norm(f, cfg).value - closed_constant(tr)))
        t3 = reduce_triple(tr)
        l0, l1, l2 = t3.lambdas
        bits = [1 if f[x].real < 0 else 0 for x in t3.lambdas]
        d = t3.d
        cong_ok &= (bits[0] * (l2 - l1) + bits[1] * (l0 - l2) + bits[2] * (l1 - l0)) % (2 * d) == d
    return [
        _worst("extremal polynomial attains sec(pi/2n)", devs, 1e-8),
        Check("extremal signs satisfy phase congruence", bool(cong_ok), f"{len(triples)} triples"),
    ]


def check_combined_phase(cases, cfg=DEFAULT_CONFIG):
    devs = []
    for lambdas, rhos, phases in cases:
        f = TrigPolynomial({lam: r * cmath.exp(1j * a) for lam, r, a in zip(lambdas, rhos, phases)})
        theta = combined_phase(lambdas, phases)
        rho = [r for _, r in sorted(zip(lambdas, rhos))]
        l0, l1, l2 = reduce_triple(lambdas).lambdas
        g = TrigPolynomial({0: rho[0], l1 - l0: rho[1] * cmath.exp(1j * theta), l2 - l0: rho[2]})
        devs.append(abs(sup_norm(f, cfg).value - sup_norm(g, cfg).value))
    return _worst("combined phase preserves sup-norm", devs, 2 * cfg.norm_tol)


def check_numeric_agreement(triples, search):
    devs, below = [], True
    for tr in triples:
        res = sidon_numeric(tr, search)
        c = closed_constant(tr)
        devs.append(abs(res.value - c))
        below &= 1.0 <= res.value <= c + 1e-9
    return [
        _worst("numeric Sidon constant = sec(pi/2n)", devs, 1e-5),
        Check("numeric values are sound lower bounds", bool(below), f"{len(triples)} triples"),
    ]


def check_real_vs_complex(triples, quads, search):
    devs = []
    for tr in triples:
        devs.append(abs(real_unconditional_numeric(tr, search).value - sidon_numeric(tr, search).value))
    ratio = []
    for q in quads:
        c = sidon_numeric(q, search).value
        r = real_unconditional_numeric(q, search).value
        ratio.append(c - (math.pi / 2) * r)
    return [
        _worst("real = complex constant on triples", devs, 1e-4),
        Check(
            "complex <= (pi/2) real",
            bool(max(ratio) <= 1e-5),
            f"max complex - (pi/2) real = {max(ratio):.3e}",
        ),
    ]


def check_subset_monotonicity(quads, search):
    gaps = []
    for q in quads:
        lb, _ = subset_lower_bound(q)
        gaps.append(lb - sidon_numeric(q, search).value)
    return _worst("numeric >= best three-element subset", gaps, 1e-6)


def check_geometric():
    lo, hi = geometric_bounds(3)
    val, _ = subset_lower_bound((1, 3, 9, 27))
    return Check("geometric bounds bracket {1,3,9,27}", lo < val < hi, f"{lo:.7f} < {val:.7f} < {hi:.7f}")


def _small_triples(bound):
    return list(itertools.combinations(range(-bound, bound + 1), 3))


def run_suite(name="quick", cfg=DEFAULT_CONFIG):
    """Run a property suite; returns a list of :class:`Check`."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}, expected one of {SUITES}")
    full = name == "full"
    rng = np.random.default_rng(3)
    polys = random_polys(60 if full else 12, seed=0)
    nts = [
        NormalizedTriple(float(r), float(s), k, l)
        for (k, l), r, s in zip(
            itertools.cycle([(1, 2), (1, 3), (2, 3), (1, 4), (3, 5), (2, 5)]),
            rng.uniform(0.2, 4, 50 if full else 6),
            rng.uniform(0.2, 4, 50 if full else 6),
        )
    ]
    phi_cases = [(nt, float(t), float(th)) for nt, t, th in
                 zip(nts, rng.uniform(-7, 7, len(nts)), rng.uniform(-7, 7, len(nts)))]
    crit_polys = [
        TrigPolynomial({0: 1, k: float(a) * cmath.exp(0.7j), l: float(b)})
        for (k, l), a, b in zip(
            itertools.cycle([(1, 2), (1, 3), (2, 3), (-1, 2), (1, -3)]),
            rng.uniform(0.1, 2, 20 if full else 4),
            rng.uniform(0.1, 2, 20 if full else 4),
        )
    ]
    triples = _small_triples(8 if full else 3)
    search = SearchConfig(starts=8 if full else 4, max_iters=2000)
    search_triples = [(0, k, l) for l in range(2, 9 if full else 5) for k in range(1, l)]
    quads = [(0, 1, 2, 3), (0, 1, 3, 7)] if full else [(0, 1, 2, 4)]
    checks = [
        check_parseval(polys, cfg),
        check_translation(polys, cfg),
        check_modulation(polys, cfg),
        check_global_phase(polys, cfg),
        check_dense_oracle(polys if full else polys[:4], 10 ** 6 if full else 2 * 10 ** 5, cfg),
        check_phi_polynomial(phi_cases),
        check_reindexing(phi_cases),
        check_min_phase(nts[:6] if full else nts[:2], cfg),
        check_dagger_minimality([((0, 1, 2), (1, 2, 1)), ((0, 1, 3), (1, 1, 1)), ((2, 5, 11), (0.5, 2, 1.5))], cfg),
        *check_lemma32(nts, 64 if full else 16, cfg),
        check_critical(crit_polys, cfg),
        check_constant_invariance(triples),
        check_constant_range(triples),
        *check_case_formulas(0.1 if full else 0.5, cfg),
        *check_extremal(triples, cfg),
        check_combined_phase(
            [((0, 1, 2), (1, 2, 1), (0.3, 1.1, 2.0)), ((5, -2, 9), (1.5, 0.5, 2.0), (1.0, 4.0, 0.2))], cfg
        ),
        *check_numeric_agreement(search_triples, search),
        *check_real_vs_complex(_small_triples(5)[:: 1 if full else 40], quads, search),
        check_subset_monotonicity(quads, search),
        check_geometric(),
    ]
    return checks
