import math
import time

import numpy as np
import pytest

from diracbounds.bounds import BoundInputs

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture
def record_criterion(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    store = request.config.stash[_CRITERIA]

    def record(number, ok, detail):
        store[number] = (bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_CRITERIA, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        ok, detail = store[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def random_inputs(rng: np.random.Generator, kappa_sign=None, tau_zero=False, eps_positive=True) -> BoundInputs:
    """Admissible bound inputs: kappa <= R_max/n and tau <= 0 (T is traceless for n > 3)."""
    n = int(rng.integers(2, 13))
    r_min = float(rng.uniform(-3.0, 3.0))
    r_max = r_min + float(rng.uniform(0.0, 3.0))
    hi = r_max / n
    if kappa_sign is None:
        kappa = hi - float(rng.uniform(0.0, 3.0))
    elif kappa_sign > 0:
        if hi <= 0:
            r_max = r_min = abs(r_max) + 0.1
            hi = r_max / n
        kappa = float(rng.uniform(0.05, 1.0)) * hi
    else:
        kappa = min(hi, 0.0) - float(rng.uniform(0.0, 2.0))
    eps = float(rng.uniform(0.01, 2.0)) if eps_positive else 0.0
    return BoundInputs(
        n=n,
        r_min=r_min,
        r_max=r_max,
        kappa=kappa,
        ric_sq_min=float(rng.uniform(0.0, 5.0)),
        traceless_sq_max=float(rng.uniform(0.0, 5.0)),
        epsilon=eps,
        tau=0.0 if tau_zero else -float(rng.uniform(0.0, 2.0)),
        theta_vanishes=tau_zero,
    )


def direct_abg(inp: BoundInputs, t):
    """alpha, beta, gamma typed in from their displayed definitions."""
    n = inp.n
    r_star = inp.r_min if inp.kappa <= 0 else inp.r_max
    d = inp.r_max - inp.r_min
    alpha = 1 + 2 * t * n / (n - 1) * (inp.r_max / n - inp.kappa + d / 4) + n / (n - 1) * t**2 * inp.traceless_sq_max
    beta = n / (4 * (n - 1)) * (
        inp.r_min + 2 * t * (inp.ric_sq_min - r_star * inp.kappa + inp.r_min * d / 4) - 4 * t**2 * inp.epsilon
    )
    gamma = n * inp.tau / (2 * (n - 1)) * t**2
    return alpha, beta, gamma


def ratio_grid_max(inp: BoundInputs, points: int = 10**6, t_max=None):
    """Brute-force max of beta/alpha over t >= 0 via t = s / (1 - s)."""
    if t_max is None:
        s = np.linspace(0.0, 1.0 - 1.0 / points, points)
        t = s / (1.0 - s)
    else:
        t = np.linspace(0.0, t_max, points)
    a, b, _ = direct_abg(inp, t)
    r = b / a
    i = int(np.argmax(r))
    return float(r[i]), float(t[i])


def thm41_grid_max(inp: BoundInputs, points: int = 10**6):
    """Brute-force max of (sqrt(alpha beta + gamma^2) + gamma)/alpha on {beta >= 0}."""
    n = inp.n
    c = n / (4 * (n - 1))
    r_star = inp.r_min if inp.kappa <= 0 else inp.r_max
    d = inp.r_max - inp.r_min
    b0 = c * inp.r_min
    b1 = 2 * c * (inp.ric_sq_min - r_star * inp.kappa + inp.r_min * d / 4)
    b2 = -4 * c * inp.epsilon
    roots = np.roots([b2, b1, b0])
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12)
    if len(real) < 2 or real[1] < 0:
        return None
    lo, hi = max(real[0], 0.0), real[1]
    t = np.linspace(lo, hi, points)
    a, b, g = direct_abg(inp, t)
    f = (np.sqrt(np.maximum(a * b + g * g, 0.0)) + g) / a
    i = int(np.argmax(f))
    return float(f[i]), float(t[i])


# max of (dK/ds)^2 / 4 on the rho = 1 torus of revolution
TORUS_EPS = (3 + 2 * math.sqrt(3)) / 36
