"""Sidon constants of three-element frequency sets.

For distinct integers ``l0 < l1 < l2`` with ``d = gcd(l1 - l0, l2 - l0)`` and
``n = (l2 - l0)/d`` the Sidon constant is ``sec(pi/(2n))``.  It is attained by
a real polynomial whose coefficients are the opposite gaps, with signs fixed
by comparing the 2-adic valuations of ``l1 - l0`` and ``l2 - l0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .trigpoly import TWO_PI, TrigPolynomial

__all__ = [
    "FrequencyTriple",
    "SignPattern",
    "reduce_triple",
    "combined_phase",
    "closed_constant",
    "constant_formula",
    "optimal_rs",
    "sign_pattern",
    "extremal_polynomial",
    "case_formula_012",
    "case_formula_013",
    "two_adic_valuation",
]

_GAP_LIMIT = 2 ** 62


@dataclass(frozen=True)
class FrequencyTriple:
    """Sorted triple ``lambda0 < lambda1 < lambda2`` with its reduced shape.

    ``original`` keeps the caller's ordering for display.
    """

    lambda0: int
    lambda1: int
    lambda2: int
    original: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not (self.lambda0 < self.lambda1 < self.lambda2):
            raise DomainError("FrequencyTriple must be strictly increasing; use reduce_triple")
        if self.lambda2 - self.lambda0 >= _GAP_LIMIT:
            raise DomainError("frequency gap too large")

    @property
    def lambdas(self):
        return (self.lambda0, self.lambda1, self.lambda2)

    @property
    def d(self):
        return math.gcd(self.lambda1 - self.lambda0, self.lambda2 - self.lambda0)

    @property
    def k(self):
        return (self.lambda1 - self.lambda0) // self.d

    @property
    def l(self):
        return (self.lambda2 - self.lambda0) // self.d

    @property
    def n(self):
        return self.l


@dataclass(frozen=True)
class SignPattern:
    eps0: int
    eps1: int
    eps2: int

    def __iter__(self):
        return iter((self.eps0, self.eps1, self.eps2))


def _as_ints(values):
    out = []
    for v in values:
        if isinstance(v, bool) or int(v) != v:
            raise DomainError(f"frequencies must be integers, got {v!r}")
        out.append(int(v))
    return out


def reduce_triple(lambdas) -> FrequencyTriple:
    if isinstance(lambdas, FrequencyTriple):
        return lambdas
    vals = _as_ints(lambdas)
    if len(vals) != 3:
        raise DomainError(f"expected three frequencies, got {len(vals)}")
    if len(set(vals)) != 3:
        raise DomainError(f"frequencies must be distinct, got {tuple(vals)}")
    a, b, c = sorted(vals)
    return FrequencyTriple(a, b, c, original=tuple(vals))


def combined_phase(lambdas, phases):
    """Single phase ``theta`` such that ``||f||_inf = ||rho0 + rho1 e^{i theta} e_k + rho2 e_l||_inf``.

    Here ``k = l1 - l0`` and ``l = l2 - l0`` (not reduced), and ``phases``
    are the arguments of the coefficients, aligned with ``lambdas`` as given
    (sorted together with them).
    """
    tr = reduce_triple(lambdas)
    phases = [float(p) for p in phases]
    if len(phases) != 3:
        raise DomainError("expected three phases")
    if not isinstance(lambdas, FrequencyTriple):
        phases = [ph for _, ph in sorted(zip(tr.original, phases))]
    l0, l1, l2 = tr.lambdas
    th0, th1, th2 = phases
    gap = l2 - l0
    theta = (l1 - l2) / gap * th0 + th1 + (l0 - l1) / gap * th2
    return theta % TWO_PI


def closed_constant(lambdas):
    """``sec(pi/(2n))``, the Sidon constant of a three-element set."""
    n = reduce_triple(lambdas).n
    return 1.0 / math.cos(math.pi / (2 * n))


def constant_formula(lambdas):
    return f"sec(pi/{2 * reduce_triple(lambdas).n})"


def optimal_rs(k, l):
    """Moduli ``(r, s)`` with ``(1+r+s)/||1 + r e^{i pi/l} e_k + s e_l|| = sec(pi/2l)``."""
    if int(k) != k or int(l) != l:
        raise DomainError("k and l must be integers")
    k, l = int(k), int(l)
    if not 0 < k < l:
        raise DomainError(f"need 0 < k < l, got ({k}, {l})")
    if math.gcd(k, l) != 1:
        raise DomainError(f"k and l must be coprime, got ({k}, {l})")
    s = k / (l - k)
    return 1.0 + s, s


def two_adic_valuation(m):
    if m == 0:
        raise DomainError("2-adic valuation of 0")
    m = abs(int(m))
    return (m & -m).bit_length() - 1


def sign_pattern(lambdas) -> SignPattern:
    """Signs of the extremal coefficients at ``l0, l1, l2`` (sorted).

    Exactly one pairwise product is forced to -1; the later member of that
    pair carries the minus sign and the remaining sign is +1.
    """
    tr = reduce_triple(lambdas)
    v1 = two_adic_valuation(tr.lambda1 - tr.lambda0)
    v2 = two_adic_valuation(tr.lambda2 - tr.lambda0)
    if v1 > v2:
        return SignPattern(1, -1, 1)
    # v2 > v1 forces eps0*eps2 = -1, a tie forces eps1*eps2 = -1: same canonical signs
    return SignPattern(1, 1, -1)


def extremal_polynomial(lambdas) -> TrigPolynomial:
    tr = reduce_triple(lambdas)
    l0, l1, l2 = tr.lambdas
    e0, e1, e2 = sign_pattern(tr)
    return TrigPolynomial({l0: e0 * (l2 - l1), l1: e1 * (l2 - l0), l2: e2 * (l1 - l0)})


def _check_positive(r, s):
    if not (r > 0 and s > 0):
        raise DomainError(f"r and s must be positive, got r={r}, s={s}")


def case_formula_012(r, s):
    """Closed form of ``||1 + i r e_1 + s e_2||_inf``."""
    _check_positive(r, s)
    if r * abs(s - 1.0) >= 4.0 * s:
        return r + abs(s - 1.0)
    return (1.0 + s) * math.sqrt(1.0 + r * r / (4.0 * s))


def case_formula_013(r, s):
    """Closed form of ``||1 + r e^{i pi/3} e_1 + s e_3||_inf``."""
    _check_positive(r, s)
    if s <= r / (4.0 * r + 9.0):
        return 1.0 + r - s
    inner = (
        2.0 / 27.0 * s * (r * r + 9.0 + 3.0 * r / s) ** 1.5
        - 2.0 / 27.0 * r ** 3 * s
        + 2.0 / 3.0 * r * r
        + r * s
        + s * s
        + 1.0
    )
    return math.sqrt(inner)
