"""Riemannian products of Einstein factors and tori of revolution.

Each torus ``T^2(rho)`` is the surface ``(rho(2+cos u) cos v, rho(2+cos u) sin v,
rho sin u)``; its Gaussian curvature depends on ``u`` only, so a point of a
product is described by one angle per torus factor.  Curvature functionals
are scanned on a uniform grid in those angles and the best grid points are
polished with golden-section search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .clifford import MAX_DIM, build_rep
from .endomorphism import PointJet, epsilon_tau_arrays
from .golden import golden_lockstep

TWO_PI = 2.0 * math.pi
DEFAULT_RESOLUTION = 8192
MIN_RESOLUTION = 64
# Joint scans over several torus angles are capped at this many grid points.
MAX_JOINT_POINTS = 2**20
# Structural checks and spectral cross-checks use at most this many (strided) jets.
MAX_CHECK_SAMPLES = 512
MAX_SPECTRAL_SAMPLES = 2048
_CHUNK_FLOATS = 2**17
GOLDEN_TOL = 1e-12
# zoom scans before golden-section: each shrinks the bracket by _ZOOM_HALF
_ZOOM_STAGES = 4
_ZOOM_HALF = 32


@dataclass(frozen=True)
class Einstein:
    """Einstein factor of dimension ``dim`` and constant scalar curvature."""

    dim: int
    scalar: float

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"Einstein factor needs an integer dim >= 1, got {self.dim!r}")
        if not math.isfinite(self.scalar):
            raise ValueError("scalar curvature must be finite")
        if self.dim == 1 and self.scalar != 0.0:
            raise ValueError("a 1-dimensional factor is flat: scalar must be 0")


@dataclass(frozen=True)
class TorusRev:
    """Torus of revolution with tube radius ``rho`` and centre radius ``2 rho``."""

    rho: float
    dim: int = field(default=2, init=False)

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ValueError(f"torus rho must be positive and finite, got {self.rho!r}")

    def gauss(self, u):
        c = np.cos(u)
        return c / (self.rho**2 * (2.0 + c))

    def gauss_slope(self, u):
        """Derivative of the Gaussian curvature along the unit ``u``-direction."""
        return -2.0 * np.sin(u) / (self.rho**3 * (2.0 + np.cos(u)) ** 2)


Factor = Union[Einstein, TorusRev]


@dataclass(frozen=True)
class ProductSpec:
    name: str
    factors: tuple
    kahler: bool = False

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        for f in self.factors:
            if not isinstance(f, (Einstein, TorusRev)):
                raise TypeError(f"unsupported factor {f!r}")
        if not 2 <= self.n <= MAX_DIM:
            raise ValueError(f"total dimension must lie in [2, {MAX_DIM}], got {self.n}")

    @property
    def n(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def tori(self) -> list[TorusRev]:
        return [f for f in self.factors if isinstance(f, TorusRev)]

    @property
    def offsets(self) -> list[int]:
        out, pos = [], 0
        for f in self.factors:
            out.append(pos)
            pos += f.dim
        return out


@dataclass(frozen=True)
class GridConfig:
    resolution: int = DEFAULT_RESOLUTION
    refine: bool = True

    def __post_init__(self):
        if self.resolution < MIN_RESOLUTION:
            raise ValueError(f"grid resolution must be >= {MIN_RESOLUTION}, got {self.resolution}")


@dataclass(frozen=True)
class GeomInvariants:
    n: int
    r_min: float
    r_max: float
    kappa: float
    ric_sq_min: float
    traceless_sq_max: float
    epsilon: float
    tau: float
    theta_vanishes: bool
    commuting_derivs: bool
    divergence_free: bool
    resolution: int


def _torus_terms(f: TorusRev, u: np.ndarray):
    c = np.cos(u)
    d = 2.0 + c
    return c / (f.rho**2 * d), -2.0 * np.sin(u) / (f.rho**3 * d * d)


def jet_arrays(spec: ProductSpec, coords: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized jets: ``coords`` holds one array of angles per torus factor.

    Returns ``ric`` of shape ``(m, n, n)`` and ``grad`` of shape ``(m, n, n, n)``.
    """
    tori = spec.tori
    if len(coords) != len(tori):
        raise ValueError(f"{spec.name}: expected {len(tori)} torus angle(s), got {len(coords)}")
    us = [np.atleast_1d(np.asarray(u, dtype=float)).ravel() for u in coords]
    m = max([u.size for u in us], default=1)
    n = spec.n
    ric = np.zeros((m, n * n))
    grad = np.zeros((m, n * n * n))
    ti = 0
    for f, o in zip(spec.factors, spec.offsets):
        diag = (n + 1) * np.arange(o, o + f.dim)  # flat positions of (i, i)
        if isinstance(f, Einstein):
            ric[:, diag] = f.scalar / f.dim
        else:
            k, slope = _torus_terms(f, us[ti])
            ti += 1
            ric[:, diag] = k[:, None]
            # nabla Ric = dK (x) p_T, nonzero only along the unit u-direction e_o
            grad[:, o * n * n + diag] = slope[:, None]
    return ric.reshape(m, n, n), grad.reshape(m, n, n, n)


def jet_at(spec: ProductSpec, point: Sequence[float] = ()) -> PointJet:
    point = tuple(point)
    if len(point) != len(spec.tori):
        raise ValueError(f"{spec.name}: expected {len(spec.tori)} torus angle(s), got {len(point)}")
    ric, grad = jet_arrays(spec, [np.array([u]) for u in point])
    return PointJet(ric[0], grad[0])


# Pointwise curvature functionals on batched (ric, grad) arrays.

def _flat_sq(x, keep):
    """Sum of squares over all but the first ``keep`` axes."""
    f = np.ascontiguousarray(x).reshape(x.shape[:keep] + (-1,))
    return np.einsum("...i,...i->...", f, f)


def scalar_curvature(ric, grad):
    return np.trace(ric, axis1=-2, axis2=-1)


def ric_norm_sq(ric, grad):
    ric = np.asarray(ric)
    return _flat_sq(ric, ric.ndim - 2)


def _off_diagonal(ric):
    """View of the off-diagonal entries, shape ``(..., n - 1, n)``."""
    n = ric.shape[-1]
    flat = np.ascontiguousarray(ric).reshape(ric.shape[:-2] + (n * n,))
    return flat[..., 1:].reshape(ric.shape[:-2] + (n - 1, n + 1))[..., :-1]


def ric_min_eig(ric, grad):
    ric = np.asarray(ric)
    if not _off_diagonal(ric).any():
        return np.diagonal(ric, axis1=-2, axis2=-1).min(axis=-1)
    return np.linalg.eigvalsh(ric)[..., 0]


def traceless_norm_sq(ric, grad):
    """``|Ric - R/n|^2``, computed without cancelling ``|Ric|^2 - R^2/n``."""
    ric = np.asarray(ric)
    n = ric.shape[-1]
    diag = np.diagonal(ric, axis1=-2, axis2=-1)
    shifted = diag - diag.sum(axis=-1, keepdims=True) / n
    off = _off_diagonal(ric)
    return np.einsum("...i,...i->...", shifted, shifted) + np.einsum("...ij,...ij->...", off, off)


def e_function(ric, grad):
    """``|nabla Ric|^2 / 4 - |dR|^2 / 16``."""
    grad = np.asarray(grad)
    dr = np.einsum("...kii->...k", grad)
    return 0.25 * _flat_sq(grad, grad.ndim - 3) - np.einsum("...k,...k->...", dr, dr) / 16.0


@dataclass(frozen=True)
class Extremum:
    min: float
    max: float
    argmin: tuple
    argmax: tuple


def _grid_axis(spec: ProductSpec, grid: GridConfig) -> np.ndarray:
    m = len(spec.tori)
    per_axis = grid.resolution
    if m and per_axis**m > MAX_JOINT_POINTS:
        per_axis = max(MIN_RESOLUTION, int(MAX_JOINT_POINTS ** (1.0 / m)))
    return np.arange(per_axis) * (TWO_PI / per_axis)


def _grid_coords(spec: ProductSpec, grid: GridConfig):
    m = len(spec.tori)
    if m == 0:
        return []
    axis = _grid_axis(spec, grid)
    return [u.ravel() for u in np.meshgrid(*([axis] * m), indexing="ij")]


def _scan(f, spec: ProductSpec, grid: GridConfig):
    """Evaluate ``f`` (a function of the angle arrays) on the grid, in chunks.

    Returns the grid axis and the values shaped ``(per_axis,) * m``.
    """
    axis = _grid_axis(spec, grid)
    coords = _grid_coords(spec, grid)
    step = max(1, _CHUNK_FLOATS // spec.n**3)
    parts = [
        np.asarray(f([c[i : i + step] for c in coords]), dtype=float).ravel()
        for i in range(0, coords[0].size, step)
    ]
    return axis, np.concatenate(parts).reshape((axis.size,) * len(spec.tori))


def _polish(point_values, axis, grids, minimize, refine: bool):
    """Refine several grid extrema at once.

    ``grids[i]`` holds the scanned values of search ``i``.  ``point_values(coords)``
    takes one angle array of shape ``(k, p)`` per torus factor and returns the
    ``(k, p)`` values, row ``i`` belonging to search ``i``.  Angles are refined
    one axis at a time: a few vectorized zoom scans narrow each bracket, then
    golden-section search finishes it.
    """
    m = grids[0].ndim
    h = axis[1] - axis[0]
    sign = np.where(minimize, 1.0, -1.0)[:, None]
    starts = [
        np.unravel_index(int(np.argmin(sg * g)), g.shape) for sg, g in zip(sign[:, 0], grids)
    ]
    best = np.array([g[idx] for g, idx in zip(grids, starts)], dtype=float) * sign[:, 0]
    # shift by 2 pi so the relative golden-section tolerance stays meaningful near u = 0
    pts = np.array([[TWO_PI + axis[i] for i in idx] for idx in starts])
    rows = np.arange(len(grids))
    offsets = np.linspace(-1.0, 1.0, 2 * _ZOOM_HALF + 1)
    if refine:
        for _ in range(3 if m > 1 else 1):
            moved = False
            for k in range(m):
                def evaluate(xs, k=k):
                    xs = np.asarray(xs, dtype=float).reshape(len(rows), -1)
                    coords = [np.broadcast_to(pts[:, j, None], xs.shape) for j in range(m)]
                    coords[k] = xs
                    return sign * point_values(coords)

                center, half = pts[:, k].copy(), h
                for _ in range(_ZOOM_STAGES):
                    xs = center[:, None] + half * offsets
                    j = np.argmin(evaluate(xs), axis=1)
                    center = xs[rows, j]
                    half = half / _ZOOM_HALF
                xs, vals = golden_lockstep(
                    lambda x: evaluate(x)[:, 0], center - half, center + half, GOLDEN_TOL
                )
                better = vals < best
                if better.any():
                    moved = True
                    best = np.where(better, vals, best)
                    pts[:, k] = np.where(better, xs, pts[:, k])
            if not moved:
                break
    return best * sign[:, 0], [tuple(float(u) for u in np.mod(p, TWO_PI)) for p in pts]


def extremize(f: Callable, spec: ProductSpec, grid: GridConfig = GridConfig()) -> Extremum:
    """Minimum and maximum of ``f`` over the angle torus of ``spec``.

    ``f`` receives a list with one angle array per torus factor and must be
    vectorized over it.  With no torus factor the product is homogeneous and
    ``f`` is evaluated once.
    """
    if not spec.tori:
        v = float(np.asarray(f([])).ravel()[0])
        return Extremum(v, v, (), ())
    axis, values = _scan(f, spec, grid)

    def point_values(coords):
        shape = coords[0].shape
        return np.asarray(f([c.ravel() for c in coords]), dtype=float).reshape(shape)

    (lo, hi), (argmin, argmax) = _polish(point_values, axis, [values, values], [True, False], grid.refine)
    return Extremum(float(lo), float(hi), argmin, argmax)


def sampled_jets(spec: ProductSpec, grid: GridConfig, limit: int | None = None):
    """Stacked ``(ric, grad)`` over the scan grid, optionally strided to ``limit`` jets."""
    coords = _grid_coords(spec, grid)
    if coords and limit is not None and coords[0].size > limit:
        stride = -(-coords[0].size // limit)
        coords = [c[::stride] for c in coords]
    return jet_arrays(spec, coords)


# (functional, which extreme is needed)
_INVARIANT_FUNCTIONALS = {
    "r_min": (scalar_curvature, True),
    "r_max": (scalar_curvature, False),
    "kappa": (ric_min_eig, True),
    "ric_sq_min": (ric_norm_sq, True),
    "traceless_sq_max": (traceless_norm_sq, False),
    "epsilon": (e_function, False),
}


def structure_flags(ric: np.ndarray, grad: np.ndarray) -> tuple[bool, bool, bool]:
    """``([nabla Ric, Ric] = 0, [nabla_X Ric, nabla_Y Ric] = 0, divergence free)`` on stacked jets."""
    n = ric.shape[-1]
    scale = max(1.0, float(np.abs(ric).max()), float(np.abs(grad).max()))
    comm_rr = grad @ ric[:, None] - ric[:, None] @ grad
    theta_vanishes = bool(np.abs(comm_rr).max(initial=0.0) <= 1e-12 * scale**2)
    commuting = True
    for j in range(n):
        gj = grad[:, j, None]
        if np.abs(gj @ grad - grad @ gj).max(initial=0.0) > 1e-12 * scale**2:
            commuting = False
            break
    div_free = bool(np.allclose(grad, np.transpose(grad, (0, 3, 2, 1)), rtol=0, atol=1e-12 * scale))
    return theta_vanishes, commuting, div_free


def block_values(spec: ProductSpec, coords: Sequence) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Block form of the jets: Ricci eigenvalue and ``u``-slope per factor.

    Returns ``lam`` and ``slope`` of shape ``(m, factors)`` plus the factor
    dimensions.  On every factor ``Ric`` is ``lam`` times the block identity,
    and ``nabla Ric`` is ``slope`` times it along that factor's ``e_u``.
    """
    tori = spec.tori
    if len(coords) != len(tori):
        raise ValueError(f"{spec.name}: expected {len(tori)} torus angle(s), got {len(coords)}")
    us = [np.atleast_1d(np.asarray(u, dtype=float)).ravel() for u in coords]
    m = max([u.size for u in us], default=1)
    lam = np.zeros((m, len(spec.factors)))
    slope = np.zeros_like(lam)
    ti = 0
    for b, f in enumerate(spec.factors):
        if isinstance(f, Einstein):
            lam[:, b] = f.scalar / f.dim
        else:
            lam[:, b], slope[:, b] = _torus_terms(f, us[ti])
            ti += 1
    return lam, slope, np.array([f.dim for f in spec.factors], dtype=float)


def block_functionals(lam, slope, dims) -> np.ndarray:
    """The six scanned functionals from block data, stacked in ``_INVARIANT_FUNCTIONALS`` order.

    Same quantities as the dense versions: ``|nabla Ric|^2 = 2 sum slope^2``
    and ``|dR|^2 = 4 sum slope^2`` over torus blocks, so ``E`` reduces to
    ``sum slope^2 / 4``.
    """
    r = lam @ dims
    shifted = lam - (r / dims.sum())[:, None]
    return np.stack([
        r,
        r,
        lam.min(axis=1),
        (lam * lam) @ dims,
        (shifted * shifted) @ dims,
        0.25 * np.einsum("ij,ij->i", slope, slope),
    ])


def _check_block_form(spec, grid, ric, grad, limit):
    coords = _grid_coords(spec, grid)
    if coords and coords[0].size > limit:
        stride = -(-coords[0].size // limit)
        coords = [c[::stride] for c in coords]
    fast = block_functionals(*block_values(spec, coords))
    dense = np.stack([fn(ric, grad) for fn, _ in _INVARIANT_FUNCTIONALS.values()])
    scale = max(1.0, float(np.abs(dense).max()))
    if np.abs(fast - dense).max() > 1e-12 * scale:
        raise ArithmeticError(f"{spec.name}: block functionals disagree with dense jets")


def invariants(spec: ProductSpec, grid: GridConfig = GridConfig(), crosscheck: bool = True) -> GeomInvariants:
    """Global curvature numbers entering the eigenvalue bounds.

    Extremes are searched on the block form of the jets (one eigenvalue and
    one slope per factor), which is exact for these products; the dense
    functionals are evaluated on sampled jets to confirm it.  ``epsilon``
    comes from ``|nabla Ric|^2/4 - |dR|^2/16``, valid because covariant
    derivatives of ``Ric`` commute here.  With ``crosscheck`` the spectra of
    ``E`` and ``T`` are also computed on sampled jets and compared.
    """
    keys = list(_INVARIANT_FUNCTIONALS)
    funcs = [_INVARIANT_FUNCTIONALS[k][0] for k in keys]
    minimize = [_INVARIANT_FUNCTIONALS[k][1] for k in keys]
    rows = np.arange(len(keys))
    if spec.tori:
        axis = _grid_axis(spec, grid)
        coords = _grid_coords(spec, grid)
        values = block_functionals(*block_values(spec, coords))
        shape = (axis.size,) * len(spec.tori)

        def point_values(c):
            out = block_functionals(*block_values(spec, [x.ravel() for x in c]))
            return out.reshape((len(keys),) + c[0].shape)[rows, rows]

        best, _ = _polish(point_values, axis, [v.reshape(shape) for v in values], minimize, grid.refine)
        ext = dict(zip(keys, (float(v) for v in best)))
    else:
        ext = dict(zip(keys, (float(v[0]) for v in block_functionals(*block_values(spec, [])))))

    ric, grad = sampled_jets(spec, grid, MAX_CHECK_SAMPLES if crosscheck else MIN_RESOLUTION)
    theta_vanishes, commuting, div_free = structure_flags(ric, grad)
    _check_block_form(spec, grid, ric, grad, MAX_CHECK_SAMPLES if crosscheck else MIN_RESOLUTION)
    scale = max(1.0, float(np.abs(ric).max()), float(np.abs(grad).max()))

    epsilon = max(ext["epsilon"], 0.0)
    tau = 0.0
    if crosscheck or not (theta_vanishes and commuting):
        rep = build_rep(spec.n)
        ric_s, grad_s = sampled_jets(spec, grid, MAX_SPECTRAL_SAMPLES)
        eps_spec, tau_spec = epsilon_tau_arrays(rep, ric_s, grad_s)
        if not (theta_vanishes and commuting):
            # outside the product model: fall back to sampled spectra
            epsilon = max(epsilon, eps_spec)
            tau = tau_spec
        else:
            eps_grid = max(float(e_function(ric_s, grad_s).max()), 0.0)
            if abs(eps_spec - eps_grid) > max(1e-8 * eps_grid, 1e-14):
                raise ArithmeticError(
                    f"{spec.name}: spectral epsilon {eps_spec!r} disagrees with {eps_grid!r}"
                )
            if abs(tau_spec) > 1e-10 * scale**2:
                raise ArithmeticError(f"{spec.name}: T should vanish, spectral tau = {tau_spec!r}")

    return GeomInvariants(
        n=spec.n,
        r_min=ext["r_min"],
        r_max=ext["r_max"],
        kappa=ext["kappa"],
        ric_sq_min=max(ext["ric_sq_min"], 0.0),
        traceless_sq_max=max(ext["traceless_sq_max"], 0.0),
        epsilon=epsilon,
        tau=tau,
        theta_vanishes=theta_vanishes,
        commuting_derivs=commuting,
        divergence_free=div_free,
        resolution=grid.resolution,
    )
