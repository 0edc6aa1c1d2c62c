"""Sidon constants, phase minimax and sup-norms of trigonometric polynomials."""

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import ConvergenceError, DomainError
from .minimax import (
    DaggerSolution,
    NormalizedTriple,
    PhaseProfile,
    check_critical_points,
    lemma32_report,
    min_phase,
    phi,
    phi_star,
    solve_dagger,
)
from .numsearch import (
    SearchConfig,
    SearchResult,
    geometric_bounds,
    real_unconditional_numeric,
    sidon_numeric,
    subset_lower_bound,
)
from .sidon import (
    FrequencyTriple,
    SignPattern,
    case_formula_012,
    case_formula_013,
    closed_constant,
    combined_phase,
    extremal_polynomial,
    optimal_rs,
    reduce_triple,
)
from .trigpoly import (
    RealTrigPolynomial,
    SupNormResult,
    TrigPolynomial,
    evaluate,
    l1_norm,
    modulus_squared,
    parse_poly,
    sup_norm,
)

__version__ = "0.1.0"
