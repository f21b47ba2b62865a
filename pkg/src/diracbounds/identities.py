"""Numerical identity suite for the Clifford and endomorphism layers.

Each check returns the largest residual it saw, measured in operator norm and
divided by the size of the quantities involved, so one tolerance fits every
jet.  The ``verify`` command and the tests both run these.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .clifford import CliffordRep, sym_trace_contract, vector_mult
from .endomorphism import (
    PointJet,
    build_a,
    build_e,
    build_e_formula,
    build_t,
    build_t_commutator,
    random_jet,
    theta_action,
    trace_a,
)

TOLERANCE = 1e-10


def _op(m) -> float:
    return float(np.linalg.norm(m, 2)) if np.ndim(m) == 2 else float(np.linalg.norm(m))


def _rel(diff, *refs) -> float:
    return _op(diff) / max(1.0, *(_op(r) for r in refs))


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(self.residual <= TOLERANCE)


def clifford_checks(rep: CliffordRep, rng: np.random.Generator, count: int = 20) -> list[CheckResult]:
    g = rep.generators
    eye = rep.identity
    rel = max(
        _op(g[j] @ g[k] + g[k] @ g[j] + 2.0 * (j == k) * eye)
        for j in range(rep.n)
        for k in range(rep.n)
    )
    skew = max(_op(gk + gk.conj().T) for gk in g)
    sq, tr = 0.0, 0.0
    for _ in range(count):
        v = rng.uniform(-1.0, 1.0, rep.n)
        c = vector_mult(rep, v)
        sq = max(sq, _rel(c @ c + (v @ v) * eye, c @ c))
        s = rng.uniform(-1.0, 1.0, (rep.n, rep.n))
        s = s + s.T
        tr = max(tr, _rel(sym_trace_contract(rep, s) + np.trace(s) * eye, s))
    return [
        CheckResult("clifford_relation", rel, rep.n * rep.n),
        CheckResult("generators_skew_hermitian", skew, rep.n),
        CheckResult("vector_square", sq, count),
        CheckResult("symmetric_trace_contraction", tr, count),
    ]


def _jet_checks(rep: CliffordRep, jet: PointJet) -> dict[str, float]:
    out = {}
    a_skew = 0.0
    for i in range(rep.n):
        a = build_a(rep, jet, np.eye(rep.n)[i])
        a_skew = max(a_skew, _rel(a + a.conj().T, a))
    out["a_skew_hermitian"] = a_skew
    ta = trace_a(rep, jet)
    ref = -0.25 * vector_mult(rep, jet.dR)
    out["trace_a"] = _rel(ta - ref, ref)
    e = build_e(rep, jet)
    ef = build_e_formula(rep, jet)
    out["e_formula"] = _rel(e - ef, e)
    out["e_hermitian"] = _rel(e - e.conj().T, e)
    ev = np.linalg.eigvalsh(0.5 * (e + e.conj().T))
    out["e_positive"] = max(0.0, -float(ev.min())) / max(1.0, float(np.abs(ev).max()))
    t = build_t(rep, jet)
    out["t_commutator"] = _rel(t - build_t_commutator(rep, jet), t)
    out["t_theta"] = _rel(t - theta_action(rep, jet), t)
    out["t_hermitian"] = _rel(t - t.conj().T, t)
    return out


def _product_checks(rep: CliffordRep, jet: PointJet) -> dict[str, float]:
    """Extra identities that hold on the block-diagonal product jets."""
    g, r = jet.grad_ric, jet.ric
    scale = max(1.0, float(np.abs(g).max()) * max(1.0, float(np.abs(r).max())), float(np.abs(g).max()) ** 2)
    comm_r = max((_op(g[k] @ r - r @ g[k]) for k in range(rep.n)), default=0.0)
    comm_g = max(
        (_op(g[j] @ g[k] - g[k] @ g[j]) for j in range(rep.n) for k in range(rep.n)), default=0.0
    )
    e = build_e(rep, jet)
    return {
        "ricci_commutes_with_gradient": comm_r / scale,
        "gradients_commute": comm_g / scale,
        "e_is_scalar": _rel(e - jet.e_scalar * rep.identity, e),
        "t_vanishes": _op(build_t(rep, jet)) / scale,
    }


def jet_checks(rep: CliffordRep, jets: Sequence[PointJet], product: bool = False) -> list[CheckResult]:
    """Run every pointwise identity on ``jets``; report the worst residual per identity."""
    worst: dict[str, float] = {}
    for jet in jets:
        res = _jet_checks(rep, jet)
        if product:
            res.update(_product_checks(rep, jet))
        for k, v in res.items():
            worst[k] = max(worst.get(k, 0.0), v)
    return [CheckResult(k, v, len(jets)) for k, v in worst.items()]


def random_jets(n: int, count: int, rng: np.random.Generator) -> list[PointJet]:
    return [random_jet(n, rng) for _ in range(count)]


def run_suite(
    rep: CliffordRep,
    manifold_jets: Sequence[PointJet],
    rng: np.random.Generator,
    random_count: int = 100,
    extra: Sequence[Callable[[], CheckResult]] = (),
) -> list[tuple[str, CheckResult]]:
    """Clifford checks, manifold jet checks and random jet checks, labelled by group."""
    out = [("clifford", c) for c in clifford_checks(rep, rng)]
    out += [("manifold", c) for c in jet_checks(rep, manifold_jets, product=True)]
    out += [("random", c) for c in jet_checks(rep, random_jets(rep.n, random_count, rng))]
    out += [("manifold", f()) for f in extra]
    return out
