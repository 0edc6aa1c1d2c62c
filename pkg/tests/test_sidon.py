import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sidonconst import (
    DomainError,
    TrigPolynomial,
    case_formula_012,
    case_formula_013,
    closed_constant,
    combined_phase,
    extremal_polynomial,
    l1_norm,
    optimal_rs,
    reduce_triple,
    sup_norm,
)
from sidonconst.sidon import constant_formula, sign_pattern, two_adic_valuation

from conftest import dense_sup

triples = st.lists(st.integers(-40, 40), min_size=3, max_size=3, unique=True)


def test_reduce_triple():
    tr = reduce_triple((6, 0, 2))
    assert tr.lambdas == (0, 2, 6)
    assert (tr.d, tr.k, tr.l, tr.n) == (2, 1, 3, 3)
    assert tr.original == (6, 0, 2)


@pytest.mark.parametrize("bad", [(0, 1), (0, 1, 1), (0, 1.5, 2), (0, 1, 2, 3)])
def test_reduce_triple_rejects(bad):
    with pytest.raises(DomainError):
        reduce_triple(bad)


def test_gap_guard():
    with pytest.raises(DomainError):
        reduce_triple((0, 1, 2 ** 62))


@pytest.mark.parametrize(
    "lam,value,formula",
    [((0, 1, 2), math.sqrt(2), "sec(pi/4)"), ((0, 1, 3), 2 / math.sqrt(3), "sec(pi/6)"), ((0, 2, 4), math.sqrt(2), "sec(pi/4)")],
)
def test_closed_constant(lam, value, formula):
    assert closed_constant(lam) == pytest.approx(value, abs=1e-15)
    assert constant_formula(lam) == formula


@settings(max_examples=80, deadline=None)
@given(triples, st.integers(-50, 50), st.integers(1, 6).map(lambda m: m if m % 2 else -m))
def test_constant_invariant_under_affine_maps(lam, shift, scale):
    moved = [scale * x + shift for x in lam]
    assert closed_constant(moved) == closed_constant(lam)


@settings(max_examples=80, deadline=None)
@given(triples)
def test_constant_range(lam):
    c = closed_constant(lam)
    assert 1.0 < c <= math.sqrt(2) + 1e-15
    assert (abs(c - math.sqrt(2)) < 1e-15) == (reduce_triple(lam).n == 2)


@pytest.mark.parametrize("k,l,rs", [(1, 2, (2.0, 1.0)), (1, 3, (1.5, 0.5)), (2, 3, (3.0, 2.0))])
def test_optimal_rs(k, l, rs):
    assert optimal_rs(k, l) == pytest.approx(rs)


def test_optimal_rs_attains():
    for k, l in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 7)]:
        r, s = optimal_rs(k, l)
        poly = TrigPolynomial({0: 1, k: r * np.exp(1j * math.pi / l), l: s})
        assert (1 + r + s) / sup_norm(poly).value == pytest.approx(1 / math.cos(math.pi / (2 * l)), abs=1e-10)


@pytest.mark.parametrize("k,l", [(2, 1), (0, 3), (2, 4)])
def test_optimal_rs_rejects(k, l):
    with pytest.raises(DomainError):
        optimal_rs(k, l)


def test_two_adic_valuation():
    assert [two_adic_valuation(m) for m in (1, 2, 12, -8, 96)] == [0, 1, 2, 3, 5]
    with pytest.raises(DomainError):
        two_adic_valuation(0)


@pytest.mark.parametrize(
    "lam,coefs",
    [((0, 1, 2), {0: 1, 1: 2, 2: -1}), ((0, 1, 3), {0: 2, 1: 3, 3: -1}), ((0, 2, 3), {0: 1, 2: -3, 3: 2})],
)
def test_extremal_examples(lam, coefs):
    assert dict(extremal_polynomial(lam)) == coefs


def test_extremal_013_against_oracle():
    assert sup_norm(extremal_polynomial((0, 1, 3))).value == pytest.approx(dense_sup([0, 1, 3], [2, 3, -1]), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(triples)
def test_extremal_attains_constant(lam):
    poly = extremal_polynomial(lam)
    assert l1_norm(poly) / sup_norm(poly).value == pytest.approx(closed_constant(lam), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(triples)
def test_sign_congruence(lam):
    tr = reduce_triple(lam)
    l0, l1, l2 = tr.lambdas
    e = [0 if s > 0 else 1 for s in sign_pattern(tr)]
    assert (e[0] * (l2 - l1) + e[1] * (l0 - l2) + e[2] * (l1 - l0)) % (2 * tr.d) == tr.d


def test_combined_phase_reduces_norm():
    rng = np.random.default_rng(5)
    for lam in [(0, 1, 3), (2, -1, 5), (0, 4, 6)]:
        rhos = rng.uniform(0.5, 2, 3)
        phases = rng.uniform(0, 2 * math.pi, 3)
        f = TrigPolynomial({m: r * np.exp(1j * p) for m, r, p in zip(lam, rhos, phases)})
        l0, l1, l2 = sorted(lam)
        order = np.argsort(lam)
        r0, r1, r2 = rhos[order]
        theta = combined_phase(lam, phases)
        g = TrigPolynomial({0: r0, l1 - l0: r1 * np.exp(1j * theta), l2 - l0: r2})
        assert sup_norm(g).value == pytest.approx(sup_norm(f).value, abs=1e-10)


def test_case_formula_pins():
    assert case_formula_012(1, 1) == pytest.approx(math.sqrt(5), abs=1e-14)
    assert case_formula_012(8, 0.1) == pytest.approx(8.9, abs=1e-14)
    assert case_formula_013(1, 1) == pytest.approx(2.6579324543577636, abs=1e-13)
    assert case_formula_013(9, 0.2) == pytest.approx(9.8, abs=1e-14)


def test_case_formulas_against_oracle():
    for r, s in itertools.product((0.3, 1.0, 2.7), (0.2, 1.0, 3.1)):
        assert case_formula_012(r, s) == pytest.approx(dense_sup([0, 1, 2], [1, 1j * r, s], 100_000), abs=1e-9)
        assert case_formula_013(r, s) == pytest.approx(
            dense_sup([0, 1, 3], [1, r * np.exp(1j * math.pi / 3), s], 100_000), abs=1e-9
        )


@pytest.mark.parametrize("r,s", [(0, 1), (1, -1)])
def test_case_formulas_reject(r, s):
    with pytest.raises(DomainError):
        case_formula_012(r, s)
    with pytest.raises(DomainError):
        case_formula_013(r, s)
