import math

import numpy as np
import pytest
from scipy import optimize

from sidonconst import SearchConfig, sidon_numeric

ACCEPTANCE_LINES = []


def dense_sup(freqs, coefs, points=10 ** 6):
    """Independent oracle: dense sampling of |f|, then a bounded scalar polish of the best sample."""
    freqs = np.asarray(freqs, dtype=float)
    coefs = np.asarray(coefs, dtype=complex)
    t = np.linspace(0.0, 2 * math.pi, points, endpoint=False)
    best_v, best_t = -1.0, 0.0
    for chunk in np.array_split(t, max(1, points // 100_000)):
        vals = np.abs(np.exp(1j * np.outer(chunk, freqs)) @ coefs)
        i = int(np.argmax(vals))
        if vals[i] > best_v:
            best_v, best_t = float(vals[i]), float(chunk[i])
    h = 2 * math.pi / points
    res = optimize.minimize_scalar(
        lambda x: -abs(np.exp(1j * freqs * x) @ coefs),
        bounds=(best_t - 2 * h, best_t + 2 * h), method="bounded", options={"xatol": 1e-14},
    )
    return max(best_v, -float(res.fun))


@pytest.fixture(scope="session")
def warm_jit():
    # compile (or load cached) numba kernels so timing criteria measure the solver, not the JIT
    sidon_numeric((0, 1, 2), SearchConfig(starts=1, max_iters=5))


@pytest.fixture
def acceptance():
    def record(number, passed, text):
        ACCEPTANCE_LINES.append(f"[criterion {number:>2}] {'PASS' if passed else 'FAIL'}  {text}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
