"""Lower bounds for the squared Dirac eigenvalues from global curvature numbers.

Everything here is closed-form arithmetic on a :class:`BoundInputs` record:
the classical scalar-curvature bounds, the one-parameter family
``alpha(t) lambda^2 - 2 gamma(t) lambda >= beta(t)`` and its optimization in
``t``, and the vanishing / improvement criteria.  Inputs must share one length
unit; bounds scale as inverse length squared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curvature import GeomInvariants
from .golden import golden_lockstep

FRIEDRICH = "Friedrich"
KAEHLER = "Kaehler"
THM41 = "Thm41"
THM42 = "Thm42"
COR43 = "Cor43"

# Preference on ties: bounds valid for every eigenvalue first, weaker hypotheses first.
_PRIORITY = (FRIEDRICH, KAEHLER, THM42, COR43, THM41)

# Relative tolerance for exact-zero gates (R_min = 0, constant R) and strict inequalities.
ZERO_RTOL = 1e-12
# Cancellation in a coefficient below this relative size is rounding noise.
_SNAP_RTOL = 1e-12
_SCAN_POINTS = 4097


@dataclass(frozen=True)
class BoundInputs:
    n: int
    r_min: float
    r_max: float
    kappa: float
    ric_sq_min: float
    traceless_sq_max: float
    epsilon: float
    tau: float = 0.0
    theta_vanishes: bool = True
    kahler: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        vals = (self.r_min, self.r_max, self.kappa, self.ric_sq_min,
                self.traceless_sq_max, self.epsilon, self.tau)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("bound inputs must be finite")
        if self.r_min > self.r_max:
            raise ValueError("r_min exceeds r_max")
        if self.ric_sq_min < 0 or self.traceless_sq_max < 0 or self.epsilon < 0:
            raise ValueError("ric_sq_min, traceless_sq_max and epsilon must be nonnegative")
        if self.kahler and self.n % 2:
            raise ValueError("a Kaehler manifold has even real dimension")

    @classmethod
    def from_invariants(cls, inv: GeomInvariants, kahler: bool = False) -> "BoundInputs":
        return cls(
            n=inv.n,
            r_min=inv.r_min,
            r_max=inv.r_max,
            kappa=inv.kappa,
            ric_sq_min=inv.ric_sq_min,
            traceless_sq_max=inv.traceless_sq_max,
            epsilon=inv.epsilon,
            tau=inv.tau,
            theta_vanishes=inv.theta_vanishes,
            kahler=kahler,
        )

    @property
    def m(self) -> Optional[int]:
        """Complex dimension, when Kaehler."""
        return self.n // 2 if self.kahler else None

    @property
    def r_star(self) -> float:
        return self.r_min if self.kappa <= 0 else self.r_max

    @property
    def spread(self) -> float:
        return self.r_max - self.r_min

    def r_min_is_zero(self) -> bool:
        return abs(self.r_min) <= ZERO_RTOL * max(1.0, abs(self.r_max))

    def scalar_is_constant(self) -> bool:
        return self.spread <= ZERO_RTOL * max(1.0, abs(self.r_max), abs(self.r_min))


@dataclass(frozen=True)
class BoundResult:
    theorem: str
    value: Optional[float]
    t_opt: Optional[float] = None
    applicable: bool = True
    reason: str = ""

    def __post_init__(self):
        if self.applicable and (self.value is None or not self.value >= 0):
            raise ValueError(f"{self.theorem}: applicable bound must be a nonnegative number")


def _na(theorem: str, reason: str) -> BoundResult:
    return BoundResult(theorem, None, None, False, reason)


def _snap(total: float, *terms: float) -> float:
    scale = max(abs(t) for t in terms) if terms else 0.0
    return 0.0 if abs(total) <= _SNAP_RTOL * scale else total


def _strictly_greater(lhs: float, rhs: float) -> bool:
    return lhs - rhs > ZERO_RTOL * max(1.0, abs(lhs), abs(rhs))


def friedrich(n: int, r_min: float) -> BoundResult:
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if not r_min > 0:
        return _na(FRIEDRICH, "needs positive scalar curvature (R_min > 0)")
    return BoundResult(FRIEDRICH, n * r_min / (4.0 * (n - 1)))


def kaehler_bound(m: int, r_min: float) -> BoundResult:
    """Kaehler refinement; the coefficient depends on the parity of ``m``."""
    if m < 1:
        raise ValueError(f"complex dimension must be >= 1, got {m}")
    if not r_min > 0:
        return _na(KAEHLER, "needs positive scalar curvature (R_min > 0)")
    coef = (m + 1) / (4.0 * m) if m % 2 else m / (4.0 * (m - 1))
    return BoundResult(KAEHLER, coef * r_min)


def coefficients(inp: BoundInputs):
    """Polynomial coefficients ``(alpha, beta, gamma)`` in ``t``, lowest degree first."""
    n = inp.n
    q = n / (n - 1.0)
    a_lin = _snap(inp.r_max / n - inp.kappa + inp.spread / 4.0,
                  inp.r_max / n, inp.kappa, inp.spread / 4.0)
    alpha = (1.0, 2.0 * q * a_lin, q * inp.traceless_sq_max)
    b_lin = _snap(inp.ric_sq_min - inp.r_star * inp.kappa + inp.r_min * inp.spread / 4.0,
                  inp.ric_sq_min, inp.r_star * inp.kappa, inp.r_min * inp.spread / 4.0)
    p = n / (4.0 * (n - 1.0))
    beta = (p * inp.r_min, 2.0 * p * b_lin, -4.0 * p * inp.epsilon)
    gamma = (0.0, 0.0, n * inp.tau / (2.0 * (n - 1.0)))
    return alpha, beta, gamma


def _poly(c, t):
    return c[0] + t * (c[1] + t * c[2])


def alpha_beta_gamma(inp: BoundInputs, t):
    """Evaluate ``alpha(t), beta(t), gamma(t)``; ``t`` may be an array."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("the parameter t must be nonnegative")
    a, b, g = coefficients(inp)
    if t_arr.ndim == 0:
        t_f = float(t_arr)
        return _poly(a, t_f), _poly(b, t_f), _poly(g, t_f)
    return _poly(a, t_arr), _poly(b, t_arr), _poly(g, t_arr)


def unified_lhs(inp: BoundInputs, t, lam):
    """``alpha(t) lambda^2 - 2 gamma(t) lambda - beta(t)``; nonnegative for admissible eigenvalues."""
    a, b, g = alpha_beta_gamma(inp, t)
    return a * lam**2 - 2.0 * g * lam - b


def _limit_ratio(a, b) -> float:
    """``lim_{t -> inf} beta / alpha`` (``alpha`` has positive leading behaviour)."""
    if a[2] > 0:
        return b[2] / a[2]
    if b[2] != 0:
        return math.copysign(math.inf, b[2])
    if a[1] > 0:
        return b[1] / a[1]
    if b[1] != 0:
        return math.copysign(math.inf, b[1])
    return b[0]


def max_ratio(inp: BoundInputs) -> tuple[float, float]:
    """``sup_{t >= 0} beta(t) / alpha(t)`` and the maximizing ``t``.

    The critical points solve ``beta' alpha - beta alpha' = 0``, which is
    quadratic because the cubic terms cancel.  Candidates are ``t = 0``, the
    nonnegative real roots, and the limit ``t -> inf`` (reported with
    ``t = inf`` when it strictly dominates).  Ties go to the smallest ``t``.
    """
    a, b, _ = coefficients(inp)
    crit = [b[2] * a[1] - b[1] * a[2], 2.0 * (b[2] * a[0] - b[0] * a[2]), b[1] * a[0] - b[0] * a[1]]
    cands = [0.0]
    if any(crit):
        for r in np.roots(crit):
            if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)) and r.real > 0:
                cands.append(float(r.real))
    cands.sort()
    vals = [_poly(b, t) / _poly(a, t) for t in cands]
    best = 0
    for i, v in enumerate(vals):
        if v > vals[best] + 1e-15 * abs(vals[best]):
            best = i
    t_best, v_best = cands[best], vals[best]
    lim = _limit_ratio(a, b)
    if lim > v_best and not math.isclose(lim, v_best, rel_tol=1e-12, abs_tol=0.0):
        return lim, math.inf
    return v_best, t_best


def bound42(inp: BoundInputs) -> BoundResult:
    """``lambda^2 >= max_t beta(t)/alpha(t)``, valid when the 3-form Theta vanishes."""
    if not inp.theta_vanishes:
        return _na(THM42, "needs Theta = 0")
    value, t = max_ratio(inp)
    if math.isinf(value):
        return _na(THM42, "degenerate inputs: beta/alpha is unbounded")
    if not value > 0:
        return _na(THM42, "beta/alpha never becomes positive")
    reason = "supremum approached as t -> infinity" if math.isinf(t) else ""
    return BoundResult(THM42, value, t, True, reason)


def feasible_interval(inp: BoundInputs) -> Optional[tuple[float, float]]:
    """``{t >= 0 : beta(t) >= 0}`` as ``(lo, hi)``; ``hi`` may be ``inf``; None if empty."""
    _, b, _ = coefficients(inp)
    c0, c1, c2 = b
    if c2 < 0:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0:
            return None
        sq = math.sqrt(disc)
        # roots of c2 t^2 + c1 t + c0 with c2 < 0, written to avoid cancellation
        qq = -0.5 * (c1 + math.copysign(sq, c1)) if c1 != 0 else -0.5 * sq
        r1 = qq / c2 if qq != 0 else 0.0
        r2 = c0 / qq if qq != 0 else 0.0
        lo, hi = min(r1, r2), max(r1, r2)
        if hi < 0:
            return None
        return max(lo, 0.0), hi
    if c1 > 0:
        return max(0.0, -c0 / c1), math.inf
    if c1 < 0:
        return (0.0, -c0 / c1) if c0 >= 0 else None
    return (0.0, math.inf) if c0 >= 0 else None


def thm41_objective(inp: BoundInputs, t):
    """``(sqrt(alpha beta + gamma^2) + gamma) / alpha``: the lower bound on ``lambda >= 0``."""
    a, b, g = alpha_beta_gamma(inp, t)
    return (np.sqrt(np.maximum(a * b + g * g, 0.0)) + g) / a


def bound41(inp: BoundInputs) -> BoundResult:
    """Best ``lambda^2`` bound for nonnegative eigenvalues from the unified inequality.

    With ``tau = 0`` the objective is ``sqrt(beta/alpha)`` and the result is
    the same maximization as :func:`bound42`.  Otherwise the objective is
    scanned on the feasible interval (mapped to a finite one if it is a ray)
    and the best sample is polished by golden-section search.
    """
    if inp.tau == 0.0:
        value, t = max_ratio(inp)
        if math.isinf(value):
            return _na(THM41, "degenerate inputs: beta/alpha is unbounded")
        if not value > 0:
            return _na(THM41, "beta(t) never becomes positive")
        reason = "supremum approached as t -> infinity" if math.isinf(t) else ""
        return BoundResult(THM41, value, t, True, reason)

    interval = feasible_interval(inp)
    if interval is None:
        return _na(THM41, "beta(t) < 0 for every t >= 0")
    lo, hi = interval
    ray = math.isinf(hi)
    if ray:
        # t = lo + s / (1 - s), s in [0, 1)
        to_t = lambda s: lo + s / (1.0 - s)  # noqa: E731
        s_hi = 1.0 - 1e-9
    else:
        to_t = lambda s: lo + s * (hi - lo)  # noqa: E731
        s_hi = 1.0

    def objective(s):
        t = np.clip(to_t(np.asarray(s, dtype=float)), lo, hi)
        return thm41_objective(inp, t)

    s_grid = np.linspace(0.0, s_hi, _SCAN_POINTS)
    vals = objective(s_grid)
    i = int(np.argmax(vals))
    s_lo, s_up = s_grid[max(i - 1, 0)], s_grid[min(i + 1, _SCAN_POINTS - 1)]
    # shift by 1 so the relative tolerance is not swamped near s = 0
    xs, fs = golden_lockstep(lambda x: -objective(x - 1.0), [s_lo + 1.0], [s_up + 1.0], 1e-13)
    s_best, v_best = float(xs[0] - 1.0), float(-fs[0])
    if vals[i] > v_best:
        s_best, v_best = float(s_grid[i]), float(vals[i])
    t_best = float(np.clip(to_t(s_best), lo, hi))
    if ray:
        a, b, g = coefficients(inp)
        if a[2] > 0:
            lim = (math.sqrt(max(a[2] * b[2] + g[2] ** 2, 0.0)) + g[2]) / a[2]
        else:
            lim = math.inf if g[2] > 0 else 0.0
        if math.isinf(lim):
            return _na(THM41, "degenerate inputs: objective is unbounded")
        if lim > v_best:
            v_best, t_best = lim, math.inf
    if not v_best > 0:
        return _na(THM41, "objective never becomes positive")
    reason = "bounds nonnegative eigenvalues only"
    if math.isinf(t_best):
        reason += "; supremum approached as t -> infinity"
    return BoundResult(THM41, v_best * v_best, t_best, True, reason)


def cor43_constants(inp: BoundInputs) -> tuple[float, float, float]:
    n = inp.n
    a = inp.epsilon / inp.ric_sq_min
    b = n / (2.0 * (n - 1)) * ((n + 4) / (4.0 * n) * inp.r_max - inp.kappa)
    c = n / (4.0 * (n - 1)) * inp.traceless_sq_max
    return a, b, c


def bound43(inp: BoundInputs) -> BoundResult:
    """Closed-form maximum of ``beta/alpha`` when ``R_min = 0``.

    Setting the derivative of ``(t - 2a t^2) / (1 + 4b t + 4c t^2)`` to zero
    gives ``(4c + 8ab) t^2 + 4a t - 1 = 0``, hence the bound
    ``n |Ric|^2_min / (8(n-1)) / (a + b + sqrt(a^2 + 2ab + c))``.
    """
    if not inp.r_min_is_zero():
        return _na(COR43, "needs R_min = 0")
    if not inp.ric_sq_min > 0:
        return _na(COR43, "needs |Ric|_min > 0")
    if not inp.theta_vanishes:
        return _na(COR43, "needs [nabla Ric, Ric] = 0")
    n = inp.n
    a, b, c = cor43_constants(inp)
    m = max(a, b, math.sqrt(c))
    if m == 0.0:
        return _na(COR43, "degenerate inputs: beta/alpha is unbounded")
    # scaled so that a^2 cannot underflow next to a
    root = m * math.sqrt((a / m) ** 2 + 2.0 * (a / m) * (b / m) + c / m / m)
    value = n / (8.0 * (n - 1)) * inp.ric_sq_min / (a + b + root)
    q = c + 2.0 * a * b
    if q > 0:
        t_opt = 1.0 / (2.0 * (a + root))  # positive root, cancellation-free form
    elif a > 0:
        t_opt = 1.0 / (4.0 * a)
    else:
        t_opt = math.inf
    return BoundResult(COR43, value, t_opt)


def cor43_printed(inp: BoundInputs) -> float:
    """The corollary's closed form with ``sqrt(a^2 + ab + c)`` in the denominator.

    Kept for comparison only: it exceeds ``max_t beta/alpha`` whenever
    ``ab > 0``, so it is not reported as a bound.
    """
    n = inp.n
    a, b, c = cor43_constants(inp)
    return n / (8.0 * (n - 1)) * inp.ric_sq_min / (a + b + math.sqrt(a * a + a * b + c))


@dataclass(frozen=True)
class Verdict:
    name: str
    status: str  # "holds" | "fails" | "hypothesis-not-met"
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _compare(name, lhs, rhs, note=""):
    return Verdict(name, "holds" if _strictly_greater(lhs, rhs) else "fails", lhs, rhs, note)


def vanishing_check(inp: BoundInputs) -> dict[str, Verdict]:
    """Criteria certifying that the Dirac operator has trivial kernel."""
    out = {}
    if inp.r_min > 0 and not inp.r_min_is_zero():
        out["positive_scalar"] = Verdict("positive_scalar", "holds", inp.r_min, 0.0, "R_min > 0")
    else:
        out["positive_scalar"] = Verdict("positive_scalar", "hypothesis-not-met", note="needs R_min > 0")

    if inp.r_min <= 0 or inp.r_min_is_zero():
        rhs = (inp.r_min * (inp.kappa - inp.spread / 4.0)
               + 2.0 * math.sqrt(abs(inp.r_min) * inp.epsilon))
        out["curvature_kernel"] = _compare("curvature_kernel", inp.ric_sq_min, rhs)
    else:
        out["curvature_kernel"] = Verdict("curvature_kernel", "hypothesis-not-met", note="needs R_min <= 0")

    if inp.scalar_is_constant() and (inp.r_max <= 0 or inp.r_min_is_zero()):
        r = inp.r_min
        out["constant_scalar_kernel"] = _compare("constant_scalar_kernel", inp.ric_sq_min, r * inp.kappa + 2.0 * math.sqrt(abs(r) * inp.epsilon))
    else:
        out["constant_scalar_kernel"] = Verdict("constant_scalar_kernel", "hypothesis-not-met", note="needs constant R <= 0")

    if inp.r_min_is_zero():
        out["scalar_flat_kernel"] = _compare("scalar_flat_kernel", inp.ric_sq_min, 0.0)
    else:
        out["scalar_flat_kernel"] = Verdict("scalar_flat_kernel", "hypothesis-not-met", note="needs R_min = 0")
    return out


def no_harmonic_spinors(verdicts: dict[str, Verdict]) -> bool:
    return any(v.holds for v in verdicts.values())


def improvement_check(inp: BoundInputs) -> dict[str, Verdict]:
    """Whether the parametrized inequality strictly beats the Friedrich bound."""
    if not (inp.r_min > 0 and not inp.r_min_is_zero()):
        return {"improvement": Verdict("improvement", "hypothesis-not-met", note="needs R_min > 0")}
    n = inp.n
    base = inp.r_min / (n - 1) * (inp.r_max - inp.kappa + inp.spread / 4.0)
    out = {}
    if inp.kappa <= 0:
        out["nonpositive_kappa"] = _compare("nonpositive_kappa", inp.ric_sq_min, base, "kappa <= 0")
        out["improvement"] = out["nonpositive_kappa"]
    else:
        out["positive_kappa"] = _compare("positive_kappa", inp.ric_sq_min, base + inp.kappa * inp.spread, "kappa > 0")
        out["improvement"] = out["positive_kappa"]
    if inp.scalar_is_constant():
        r = inp.r_min
        out["constant_scalar"] = _compare("constant_scalar", inp.ric_sq_min, r / (n - 1) * (r - inp.kappa), "constant R")
    return out


@dataclass(frozen=True)
class BoundReport:
    results: dict
    best: Optional[BoundResult]
    vanishing: dict
    improvement: dict
    notes: list = field(default_factory=list)


def best_bound(inp: BoundInputs) -> BoundReport:
    results = {
        FRIEDRICH: friedrich(inp.n, inp.r_min),
        KAEHLER: kaehler_bound(inp.m, inp.r_min) if inp.kahler else _na(KAEHLER, "not Kaehler"),
        THM41: bound41(inp),
        THM42: bound42(inp),
        COR43: bound43(inp),
    }
    best = None
    for tag in _PRIORITY:
        r = results[tag]
        if not r.applicable:
            continue
        if best is None or r.value > best.value * (1.0 + 1e-12):
            best = r
    notes = []
    if inp.tau != 0.0:
        notes.append("Thm41 bounds nonnegative eigenvalues only (tau != 0)")
    if inp.kahler:
        notes.append("Kaehler bound applied on the user's assertion that the metric is Kaehler")
    return BoundReport(results, best, vanishing_check(inp), improvement_check(inp), notes)
