"""Numerical tolerances shared by the solvers."""

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances for sup-norm evaluation and the critical-point checkers.

    norm_tol : absolute error allowed on a supremum norm.
    root_tol : bracket width at which derivative roots count as refined.
    grad_tol : gradient norm below which a point counts as critical.
    cong_tol : slack on congruences ``x = 0 mod pi``.
    zero_tol : modulus below which ``f`` counts as vanishing.
    mono_tol : admissible ascent in monotonicity checks.
    max_refine : number of 4x grid refinements before giving up.
    """

    norm_tol: float = 1e-10
    root_tol: float = 1e-13
    grad_tol: float = 1e-10
    cong_tol: float = 1e-7
    zero_tol: float = 1e-8
    mono_tol: float = 1e-9
    max_refine: int = 3

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value!r}")

    def with_(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)


DEFAULT_CONFIG = SolverConfig()
