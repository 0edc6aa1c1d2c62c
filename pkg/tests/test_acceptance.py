"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line, printed in the terminal summary under
"acceptance criteria".
"""

import io
import itertools
import json
import math
import time

import numpy as np
import pytest

from sidonconst import (
    NormalizedTriple,
    SearchConfig,
    TrigPolynomial,
    case_formula_012,
    case_formula_013,
    check_critical_points,
    closed_constant,
    extremal_polynomial,
    geometric_bounds,
    l1_norm,
    lemma32_report,
    real_unconditional_numeric,
    sidon_numeric,
    subset_lower_bound,
    sup_norm,
)
from sidonconst.cli import run

pytestmark = pytest.mark.usefixtures("warm_jit")

SQ2 = math.sqrt(2.0)
GRID = [round(0.1 * i, 1) for i in range(1, 41)]


def test_c01_constant_012(acceptance):
    t0 = time.perf_counter()
    out = io.StringIO()
    code = run(["constant", "0,1,2", "--numeric", "--json"], stdout=out)
    elapsed = time.perf_counter() - t0
    res = json.loads(out.getvalue())["result"]
    closed_err = abs(closed_constant((0, 1, 2)) - SQ2)
    numeric_err = abs(sidon_numeric((0, 1, 2)).value - SQ2)
    ok = code == 0 and closed_err <= 1e-9 and numeric_err <= 1e-6 and elapsed < 5.0
    ok = ok and abs(res["value"] - SQ2) <= 1e-9 and res["formula"] == "sec(pi/4)"
    acceptance(1, ok, f"C(0,1,2)=sqrt2: closed err {closed_err:.1e}, numeric err {numeric_err:.1e}, {elapsed:.2f}s")
    assert ok


def test_c02_constant_013(acceptance):
    target = 2 / math.sqrt(3)
    closed_err = abs(closed_constant((0, 1, 3)) - target)
    numeric_err = abs(sidon_numeric((0, 1, 3)).value - target)
    ok = closed_err <= 1e-9 and numeric_err <= 1e-6
    acceptance(2, ok, f"C(0,1,3)=2/sqrt3: closed err {closed_err:.1e}, numeric err {numeric_err:.1e}")
    assert ok


def test_c03_triple_sweep(acceptance):
    t0 = time.perf_counter()
    worst, where = 0.0, None
    for k, l in itertools.combinations(range(1, 9), 2):
        err = abs(sidon_numeric((0, k, l)).value - closed_constant((0, k, l)))
        if err > worst:
            worst, where = err, (0, k, l)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and elapsed < 600
    acceptance(3, ok, f"28 triples {{0,k,l}}, l<=8: max |numeric-sec| {worst:.1e} at {where}, {elapsed:.0f}s")
    assert ok


def test_c04_equality_polynomial(acceptance):
    poly = TrigPolynomial({0: 1, 1: 2j, 2: 1})
    sup = sup_norm(poly).value
    sup_err = abs(sup - 2 * SQ2)
    ratio_err = abs(l1_norm(poly) / sup - SQ2)
    ok = sup_err <= 1e-10 and ratio_err <= 1e-9
    acceptance(4, ok, f"||1+2i e1+e2|| = 2sqrt2: err {sup_err:.1e}, ratio err {ratio_err:.1e}")
    assert ok


def test_c05_extremal_attainment(acceptance):
    worst, count = 0.0, 0
    for lam in itertools.combinations(range(-8, 9), 3):
        f = extremal_polynomial(lam)
        worst = max(worst, abs(l1_norm(f) / sup_norm(f).value - closed_constant(lam)))
        count += 1
    ok = worst <= 1e-8
    acceptance(5, ok, f"extremal polynomial attains sec(pi/2n) on {count} triples: max err {worst:.1e}")
    assert ok


@pytest.mark.parametrize("which", ["012", "013"])
def test_c06_case_formulas(acceptance, which):
    formula = case_formula_012 if which == "012" else case_formula_013
    t0 = time.perf_counter()
    worst = 0.0
    for r, s in itertools.product(GRID, GRID):
        if which == "012":
            poly = TrigPolynomial({0: 1, 1: 1j * r, 2: s})
        else:
            poly = TrigPolynomial({0: 1, 1: r * np.exp(1j * math.pi / 3), 3: s})
        worst = max(worst, abs(formula(r, s) - sup_norm(poly).value))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 120
    acceptance(6, ok, f"case formula {which} on 40x40 grid: max err {worst:.1e}, {elapsed:.1f}s")
    assert ok


def lemma32_cases():
    pairs = [(k, l) for k, l in itertools.combinations(range(1, 6), 2) if math.gcd(k, l) == 1]
    rng = np.random.default_rng(20240601)
    rs = rng.uniform(0.2, 4.0, size=(50, 2))
    return [(float(r), float(s), *pairs[i % len(pairs)]) for i, (r, s) in enumerate(rs)]


def test_c07_lemma32(acceptance):
    sym = mono = 0.0
    for r, s, k, l in lemma32_cases():
        rep = lemma32_report(NormalizedTriple(r, s, k, l))
        sym = max(sym, rep.evenness, rep.periodicity)
        mono = max(mono, rep.monotonicity)
    ok = sym <= 1e-8 and mono <= 1e-7
    acceptance(7, ok, f"phi* even/periodic/decreasing on 50 cases: symmetry {sym:.1e}, ascent {mono:.1e}")
    assert ok


def test_c08_critical_points(acceptance):
    rng = np.random.default_rng(8)
    pairs = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (1, 5), (3, 5), (4, 5), (2, 4)]
    bad, located = [], 0
    for i in range(20):
        k, l = pairs[i % len(pairs)]
        r, s = rng.uniform(0.2, 3.0, 2)
        theta = rng.uniform(0, 2 * math.pi)
        poly = TrigPolynomial({0: 1, k: r * np.exp(1j * theta), l: s})
        rep = check_critical_points(poly)
        located += len(rep.points)
        if not rep.points or not rep.passed:
            bad.append((k, l))
    ok = not bad
    acceptance(8, ok, f"critical points on 20 instances: {located} located, failures {bad}")
    assert ok


def test_c09_five_term_progression(acceptance):
    t0 = time.perf_counter()
    res = sidon_numeric((0, 1, 2, 3, 4), SearchConfig(starts=256))
    elapsed = time.perf_counter() - t0
    ok = res.value >= 1.95 and elapsed < 900
    acceptance(9, ok, f"C(0,1,2,3,4) >= {res.value:.10f} (threshold 1.95, expected 2), {elapsed:.0f}s")
    assert ok


def test_c10_four_term_progression(acceptance):
    res = sidon_numeric((0, 1, 2, 3))
    ok = 1.60 <= res.value <= 1.75
    acceptance(10, ok, f"C(0,1,2,3) >= {res.value:.10f}; conjectured 5/3, diff {res.value - 5 / 3:+.1e}")
    assert ok


def test_c11_real_vs_complex(acceptance):
    triple_cfg = SearchConfig(starts=8)
    worst, where = 0.0, None
    for lam in itertools.combinations(range(-5, 6), 3):
        c = sidon_numeric(lam, triple_cfg).value
        r = real_unconditional_numeric(lam, triple_cfg).value
        if abs(c - r) >= worst:
            worst, where = abs(c - r), lam
    corpus_cfg = SearchConfig(starts=16)
    slack = math.inf
    for lam in [(0, 1, 2, 3), (0, 1, 3, 7), (0, 1, 4, 6)]:
        c = sidon_numeric(lam, corpus_cfg).value
        r = real_unconditional_numeric(lam, corpus_cfg).value
        slack = min(slack, math.pi / 2 * r + 1e-5 - c)
    ok = worst <= 1e-4 and slack >= 0
    acceptance(11, ok, f"165 triples |real-complex| max {worst:.1e} at {where}; pi/2 margin on 4-sets {slack:.3f}")
    assert ok


def test_c12_geometric_bracket(acceptance):
    lo, hi = geometric_bounds(3)
    value, witness = subset_lower_bound((1, 3, 9, 27))
    ok = 1.0771 < lo < value < hi < 2.6100 and abs(value - 1 / math.cos(math.pi / 8)) < 1e-12
    acceptance(12, ok, f"{{1,3,9,27}}: {lo:.7f} < sec(pi/8) = {value:.7f} (via {witness.lambdas}) < {hi:.7f}")
    assert ok
