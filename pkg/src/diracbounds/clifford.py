"""Explicit complex Clifford-algebra representations acting on spinors.

Convention: ``X.Y + Y.X = -2 g(X, Y)``, so every generator squares to ``-1``
and is skew-Hermitian.  Generators are built from Pauli blocks, which keeps
every entry in ``{0, +-1, +-i}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

MIN_DIM = 2
MAX_DIM = 12

_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _kron_all(blocks):
    out = np.ones((1, 1), dtype=complex)
    for b in blocks:
        out = np.kron(out, b)
    return out


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Irreducible complex Clifford module in dimension ``n``.

    ``generators[k]`` is Clifford multiplication by the k-th orthonormal
    frame vector; shape ``(n, dim, dim)``.
    """

    n: int
    dim: int
    generators: np.ndarray

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)


@lru_cache(maxsize=None)
def _build(n: int) -> CliffordRep:
    m = n // 2
    gammas = []
    # Hermitian Jordan-Wigner gammas with {g_i, g_j} = 2 delta_ij
    for k in range(m):
        head = [_SZ] * k
        tail = [_I2] * (m - k - 1)
        gammas.append(_kron_all(head + [_SX] + tail))
        gammas.append(_kron_all(head + [_SY] + tail))
    if n % 2:
        gammas.append(_kron_all([_SZ] * m))
    gens = np.array([1j * g for g in gammas])
    gens.setflags(write=False)
    return CliffordRep(n=n, dim=2**m, generators=gens)


def build_rep(n: int) -> CliffordRep:
    """Return the fixed representation for dimension ``2 <= n <= 12``.

    Odd ``n`` reuses the ``n - 1`` construction and appends the (normalized)
    volume element of the even part.  The result is cached, so repeated
    calls share one read-only generator array.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"dimension must be an integer, got {n!r}")
    if not MIN_DIM <= n <= MAX_DIM:
        raise ValueError(f"dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {n}")
    return _build(int(n))


def vector_mult(rep: CliffordRep, v) -> np.ndarray:
    """Clifford multiplication by a real vector, ``sum_k v_k G_k``.

    Leading batch axes on ``v`` are allowed; the last axis must have length n.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (rep.n,):
        raise ValueError(f"expected vector(s) of length {rep.n}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    d = rep.dim
    return (v @ rep.generators.reshape(rep.n, d * d)).reshape(v.shape[:-1] + (d, d))


def check_antisymmetric3(theta, atol: float = 1e-12) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    n = theta.shape[0]
    if theta.shape != (n, n, n):
        raise ValueError(f"3-form coefficients must have shape (n, n, n), got {theta.shape}")
    scale = max(1.0, float(np.max(np.abs(theta), initial=0.0)))
    for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
        if not np.allclose(theta, -np.transpose(theta, perm), rtol=0, atol=atol * scale):
            raise ValueError("3-form coefficients are not totally antisymmetric")
    return theta


def form_mult3(rep: CliffordRep, theta) -> np.ndarray:
    """Clifford action of a 3-form: ``sum_{j<k<l} theta_jkl G_j G_k G_l``."""
    theta = check_antisymmetric3(theta)
    if theta.shape[0] != rep.n:
        raise ValueError(f"3-form has dimension {theta.shape[0]}, representation has {rep.n}")
    g = rep.generators
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for j, k, l in combinations(range(rep.n), 3):
        c = theta[j, k, l]
        if c != 0.0:
            out += c * (g[j] @ g[k] @ g[l])
    return out


def sym_trace_contract(rep: CliffordRep, s) -> np.ndarray:
    """Materialize ``sum_k G_k . (S e_k)``; equals ``-tr(S) Id`` for symmetric S."""
    s = np.asarray(s, dtype=float)
    if s.shape != (rep.n, rep.n):
        raise ValueError(f"expected a {rep.n}x{rep.n} matrix, got shape {s.shape}")
    if not np.allclose(s, s.T, rtol=0, atol=1e-12 * max(1.0, np.abs(s).max())):
        raise ValueError("matrix is not symmetric")
    images = vector_mult(rep, s.T)  # row k is S e_k
    return (rep.generators @ images).sum(axis=0)


def is_skew_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(m, -m.conj().swapaxes(-1, -2), rtol=0, atol=atol))


def is_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(m, m.conj().swapaxes(-1, -2), rtol=0, atol=atol))
