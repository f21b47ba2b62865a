"""Spinor endomorphisms built from the first jet of the Ricci tensor.

All quantities are pointwise: a :class:`PointJet` holds ``Ric`` and its
covariant derivatives in an orthonormal frame, and the functions here turn it
into the skew endomorphisms ``A_X``, the selfadjoint ``E`` and ``T``, and the
3-form ``Theta`` whose Clifford action reproduces ``T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .clifford import CliffordRep, form_mult3, vector_mult

# Jets are validated against these absolute tolerances (scaled by magnitude).
SYM_TOL = 1e-12
BIANCHI_TOL = 1e-9
PSD_TOL = 1e-10

_BATCH_BYTES = 64 * 2**20


@dataclass(frozen=True, eq=False)
class PointJet:
    """Ricci tensor and its covariant derivatives at one point.

    ``grad_ric[k]`` is ``nabla_{e_k} Ric`` as a symmetric matrix.  Besides the
    symmetry of every slice, the contracted Bianchi identity
    ``sum_k (nabla_k Ric) e_k = dR / 2`` is enforced, since the Clifford
    identities below rely on it.
    """

    ric: np.ndarray
    grad_ric: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        ric = np.array(self.ric, dtype=float)
        grad = np.array(self.grad_ric, dtype=float)
        if ric.ndim != 2 or ric.shape[0] != ric.shape[1]:
            raise ValueError(f"ric must be square, got shape {ric.shape}")
        n = ric.shape[0]
        if grad.shape != (n, n, n):
            raise ValueError(f"grad_ric must have shape {(n, n, n)}, got {grad.shape}")
        if not (np.all(np.isfinite(ric)) and np.all(np.isfinite(grad))):
            raise ValueError("jet has non-finite entries")
        scale = max(1.0, np.abs(ric).max(initial=0.0), np.abs(grad).max(initial=0.0))
        if np.abs(ric - ric.T).max() > SYM_TOL * scale:
            raise ValueError("ric is not symmetric")
        if np.abs(grad - grad.transpose(0, 2, 1)).max(initial=0.0) > SYM_TOL * scale:
            raise ValueError("grad_ric slices are not symmetric")
        div = np.einsum("kik->i", grad)
        dr = np.einsum("kii->k", grad)
        if np.abs(div - 0.5 * dr).max() > BIANCHI_TOL * scale:
            raise ValueError("grad_ric violates the contracted Bianchi identity div Ric = dR/2")
        ric.setflags(write=False)
        grad.setflags(write=False)
        object.__setattr__(self, "ric", ric)
        object.__setattr__(self, "grad_ric", grad)
        object.__setattr__(self, "n", n)

    @property
    def scalar(self) -> float:
        return float(np.trace(self.ric))

    @property
    def dR(self) -> np.ndarray:
        return np.einsum("kii->k", self.grad_ric)

    @property
    def grad_ric_norm_sq(self) -> float:
        return float(np.sum(self.grad_ric**2))

    @property
    def dR_norm_sq(self) -> float:
        return float(np.sum(self.dR**2))

    @property
    def e_scalar(self) -> float:
        """``|nabla Ric|^2 / 4 - |dR|^2 / 16``."""
        return 0.25 * self.grad_ric_norm_sq - self.dR_norm_sq / 16.0


def einstein_jet(n: int, scalar: float) -> PointJet:
    return PointJet(np.eye(n) * scalar / n, np.zeros((n, n, n)))


def random_jet(n: int, rng: np.random.Generator) -> PointJet:
    """Jet with entries uniform on [-1, 1], symmetrized.

    The diagonal entries ``grad_ric[l, l, l]`` are then shifted so that the
    contracted Bianchi identity holds; each shift only touches its own
    component of the constraint.
    """
    ric = rng.uniform(-1.0, 1.0, (n, n))
    ric = 0.5 * (ric + ric.T)
    grad = rng.uniform(-1.0, 1.0, (n, n, n))
    grad = 0.5 * (grad + grad.transpose(0, 2, 1))
    resid = np.einsum("kik->i", grad) - 0.5 * np.einsum("kii->k", grad)
    idx = np.arange(n)
    grad[idx, idx, idx] -= 2.0 * resid
    return PointJet(ric, grad)


def _check_rep(rep: CliffordRep, jet: PointJet):
    if rep.n != jet.n:
        raise ValueError(f"representation has dimension {rep.n}, jet has {jet.n}")


def _a_frame(gens: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """``A_{e_i}`` for every frame vector; ``grad`` may carry batch axes."""
    n, d = gens.shape[0], gens.shape[1]
    # c[..., k, i] = Clifford mult by (nabla_k Ric) e_i
    c = (np.swapaxes(grad, -1, -2) @ gens.reshape(n, d * d)).reshape(grad.shape[:-1] + (d, d))
    g = gens[:, None]
    return 0.25 * (c @ g - g @ c).sum(axis=-4)


def _e_t(gens: np.ndarray, ric: np.ndarray, grad: np.ndarray):
    a = _a_frame(gens, grad)
    n, d = gens.shape[0], gens.shape[1]
    e = -(a @ a).sum(axis=-3)
    r = (np.swapaxes(ric, -1, -2) @ gens.reshape(n, d * d)).reshape(ric.shape[:-1] + (d, d))  # Ric(e_i)
    t = (r @ a + a @ r).sum(axis=-3)
    return e, t


def build_a(rep: CliffordRep, jet: PointJet, x) -> np.ndarray:
    """Skew endomorphism ``A_X`` for a tangent vector ``x``."""
    _check_rep(rep, jet)
    x = np.asarray(x, dtype=float)
    if x.shape != (rep.n,):
        raise ValueError(f"direction must have length {rep.n}, got shape {x.shape}")
    g = rep.generators
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for k in range(rep.n):
        w = vector_mult(rep, jet.grad_ric[k] @ x)
        out += w @ g[k] - g[k] @ w
    return 0.25 * out


def trace_a(rep: CliffordRep, jet: PointJet) -> np.ndarray:
    """``sum_k G_k A_{e_k}``; should equal ``-vector_mult(dR) / 4``."""
    _check_rep(rep, jet)
    a = _a_frame(rep.generators, jet.grad_ric)
    return (rep.generators @ a).sum(axis=0)


def build_e(rep: CliffordRep, jet: PointJet) -> np.ndarray:
    """``E = -sum_k A_k A_k``, Hermitian and positive semidefinite."""
    _check_rep(rep, jet)
    a = _a_frame(rep.generators, jet.grad_ric)
    return -(a @ a).sum(axis=0)


def build_e_formula(rep: CliffordRep, jet: PointJet) -> np.ndarray:
    """``E`` via the commutator expansion.

    ``(|nabla Ric|^2/4 - |dR|^2/16) Id
    + 1/8 sum_{jkl} [nabla_j Ric, nabla_k Ric](e_l) . G_j G_k G_l``.
    Built without going through ``A_X`` so it can cross-check :func:`build_e`.
    """
    _check_rep(rep, jet)
    g = rep.generators
    grad = jet.grad_ric
    out = jet.e_scalar * rep.identity
    for j in range(rep.n):
        for k in range(rep.n):
            if j == k:
                continue
            comm = grad[j] @ grad[k] - grad[k] @ grad[j]
            if not comm.any():
                continue
            w = vector_mult(rep, comm.T)  # w[l] = [.,.] e_l
            out += 0.125 * ((w @ (g[j] @ g[k])) @ g).sum(axis=0)
    return out


def build_t(rep: CliffordRep, jet: PointJet) -> np.ndarray:
    """``T = sum_k Ric(e_k) A_k + A_k Ric(e_k)``."""
    _check_rep(rep, jet)
    return _e_t(rep.generators, jet.ric, jet.grad_ric)[1]


def build_t_commutator(rep: CliffordRep, jet: PointJet) -> np.ndarray:
    """``T`` as ``1/2 sum_{kl} [nabla_k Ric, Ric](e_l) . G_k G_l``."""
    _check_rep(rep, jet)
    g = rep.generators
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for k in range(rep.n):
        comm = jet.grad_ric[k] @ jet.ric - jet.ric @ jet.grad_ric[k]
        w = vector_mult(rep, comm.T)
        out += 0.5 * ((w @ g[k]) @ g).sum(axis=0)
    return out


def build_theta(jet: PointJet) -> np.ndarray:
    """Totally antisymmetric coefficients ``theta[j, k, l] = Theta(e_j, e_k, e_l)``."""
    c = jet.grad_ric @ jet.ric - jet.ric @ jet.grad_ric  # c[k] = [nabla_k Ric, Ric]
    # g(C_j e_k, e_l) = c[j, l, k]
    return (
        np.transpose(c, (0, 2, 1))
        + np.transpose(c, (2, 1, 0))
        + np.transpose(c, (1, 0, 2))
    )


def theta_action(rep: CliffordRep, jet: PointJet) -> np.ndarray:
    _check_rep(rep, jet)
    return form_mult3(rep, build_theta(jet))


def e_t_batch(rep: CliffordRep, ric: np.ndarray, grad: np.ndarray):
    """Batched ``(E, T)`` for stacked jets ``ric (m, n, n)``, ``grad (m, n, n, n)``.

    No validation is done here; callers pass arrays taken from valid jets.
    """
    m = ric.shape[0]
    per_jet = rep.n * rep.n * rep.dim * rep.dim * 16 * 3
    step = max(1, _BATCH_BYTES // per_jet)
    es, ts = [], []
    for lo in range(0, m, step):
        e, t = _e_t(rep.generators, ric[lo : lo + step], grad[lo : lo + step])
        es.append(e)
        ts.append(t)
    return np.concatenate(es), np.concatenate(ts)


def epsilon_tau(rep: CliffordRep, jets: Sequence[PointJet]) -> tuple[float, float]:
    """``(max eigenvalue of E, min eigenvalue of T)`` over all given jets.

    The extrema run over both the spinor fibre and the sample of points;
    ``epsilon`` is clipped at 0 to absorb eigensolver rounding of ``E >= 0``.
    """
    if not jets:
        raise ValueError("need at least one jet")
    for jet in jets:
        _check_rep(rep, jet)
    ric = np.stack([j.ric for j in jets])
    grad = np.stack([j.grad_ric for j in jets])
    return epsilon_tau_arrays(rep, ric, grad)


def epsilon_tau_arrays(rep: CliffordRep, ric: np.ndarray, grad: np.ndarray) -> tuple[float, float]:
    e, t = e_t_batch(rep, ric, grad)
    ev_e = np.linalg.eigvalsh(e)
    ev_t = np.linalg.eigvalsh(t)
    if ev_e.min() < -PSD_TOL * max(1.0, np.abs(ev_e).max()):
        raise np.linalg.LinAlgError(f"E has a negative eigenvalue {ev_e.min():.3e}")
    return max(float(ev_e.max()), 0.0), float(ev_t.min())


def is_divergence_free(jet: PointJet, atol: float = 1e-12) -> bool:
    """Whether ``(nabla_X Ric)(Y) = (nabla_Y Ric)(X)`` holds at this point."""
    g = jet.grad_ric
    # g[k, :, j] is (nabla_k Ric) e_j
    return bool(np.allclose(g, np.transpose(g, (2, 1, 0)), rtol=0, atol=atol))
