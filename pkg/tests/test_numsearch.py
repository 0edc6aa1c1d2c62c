import math

import pytest

from sidonconst import (
    DomainError,
    SearchConfig,
    closed_constant,
    geometric_bounds,
    l1_norm,
    real_unconditional_numeric,
    sidon_numeric,
    subset_lower_bound,
    sup_norm,
)
from sidonconst.numsearch import _lattice_starts, real_ratio

FAST = SearchConfig(starts=8)


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(starts=0)
    assert SearchConfig.for_size(3).starts == 64
    assert SearchConfig.for_size(5).starts == 256
    assert SearchConfig.for_size(5, starts=7).starts == 7


def test_lattice_is_deterministic_and_distinct():
    a = _lattice_starts(3, 40)
    assert len(a) == 40
    assert [tuple(x) for x in a] == [tuple(x) for x in _lattice_starts(3, 40)]
    assert len({tuple(x) for x in a}) == 40


def test_two_terms():
    assert sidon_numeric((0, 1), FAST).value == pytest.approx(1.0, abs=1e-9)
    assert real_unconditional_numeric((0, 1), FAST).value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("lam", [(0, 1, 2), (0, 1, 3), (0, 2, 3), (-2, 1, 7)])
def test_triples_reach_closed_form(lam):
    res = sidon_numeric(lam, FAST)
    assert res.value == pytest.approx(closed_constant(lam), abs=1e-6)
    assert res.value <= closed_constant(lam) + 1e-9


def test_result_is_certified_ratio():
    res = sidon_numeric((0, 1, 4), FAST)
    assert res.value == pytest.approx(l1_norm(res.witness) / sup_norm(res.witness).value, abs=1e-9)
    assert res.value >= 1.0
    assert res.witness.frequencies == (0, 1, 4)


@pytest.mark.parametrize("lam,value", [((0, 1, 2), math.sqrt(2)), ((0, 1, 3), 2 / math.sqrt(3))])
def test_real_triples(lam, value):
    res = real_unconditional_numeric(lam, FAST)
    assert res.value == pytest.approx(value, abs=1e-5)
    assert res.value == pytest.approx(real_ratio(res.witness), abs=1e-9)


def test_deterministic():
    cfg = SearchConfig(starts=6)
    a = sidon_numeric((0, 1, 2, 5), cfg)
    b = sidon_numeric((0, 1, 2, 5), cfg)
    assert a == b


def test_monotone_over_subsets():
    for lam in [(0, 1, 2, 3), (0, 1, 3, 7), (0, 1, 4, 6)]:
        lb, _ = subset_lower_bound(lam)
        assert sidon_numeric(lam, SearchConfig(starts=16)).value >= lb - 1e-6


@pytest.mark.parametrize("bad", [(0,), (0, 0), (0, 1.5)])
def test_search_rejects(bad):
    with pytest.raises(DomainError):
        sidon_numeric(bad, FAST)


def test_real_rejects_large_sets():
    with pytest.raises(DomainError):
        real_unconditional_numeric(tuple(range(21)), FAST)


@pytest.mark.parametrize(
    "lam,value,witness",
    [
        ((0, 1, 2, 3), math.sqrt(2), (0, 1, 2)),
        ((1, 3, 9, 27), 1 / math.cos(math.pi / 8), (1, 3, 9)),
        ((0, 5, 10, 15), math.sqrt(2), (0, 5, 10)),
    ],
)
def test_subset_lower_bound(lam, value, witness):
    lb, tr = subset_lower_bound(lam)
    assert lb == pytest.approx(value, abs=1e-12)
    assert tr.lambdas == witness


def test_subset_lower_bound_rejects():
    with pytest.raises(DomainError):
        subset_lower_bound((0, 1))


@pytest.mark.parametrize(
    "q,lower,upper",
    [
        # recomputed from 1 + pi^2/(8 max(-q, q+1)^2) and 1 + pi^2/(2q^2 - 2 - pi^2)
        (3, 1.0771062843835106, 2.6099457599185225),
        (-3, 1.1370778389040188, 2.6099457599185225),
        (4, 1.0493480220054467, 1.4902836783606703),
    ],
)
def test_geometric_bounds(q, lower, upper):
    lo, hi = geometric_bounds(q)
    assert lo == pytest.approx(lower, abs=1e-12)
    assert hi == pytest.approx(upper, abs=1e-12)


@pytest.mark.parametrize("q", [2, -2, 0, 1])
def test_geometric_bounds_reject(q):
    with pytest.raises(DomainError):
        geometric_bounds(q)
