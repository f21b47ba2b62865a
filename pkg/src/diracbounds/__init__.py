"""Lower bounds for Dirac eigenvalues on Riemannian product spin manifolds.

Layers, bottom up: :mod:`clifford` (explicit spinor representations),
:mod:`endomorphism` (pointwise curvature endomorphisms), :mod:`curvature`
(product manifolds and their global invariants), :mod:`bounds` (the
eigenvalue estimates) and :mod:`cli`.
"""
from .bounds import (
    BoundInputs,
    BoundReport,
    BoundResult,
    alpha_beta_gamma,
    best_bound,
    bound41,
    bound42,
    bound43,
    friedrich,
    improvement_check,
    kaehler_bound,
    vanishing_check,
)
from .clifford import CliffordRep, build_rep, form_mult3, sym_trace_contract, vector_mult
from .curvature import Einstein, GeomInvariants, GridConfig, ProductSpec, TorusRev, extremize, invariants, jet_at
from .endomorphism import (
    PointJet,
    build_a,
    build_e,
    build_e_formula,
    build_t,
    build_theta,
    epsilon_tau,
    random_jet,
    trace_a,
)

__all__ = [
    "BoundInputs", "BoundReport", "BoundResult", "alpha_beta_gamma", "best_bound", "bound41",
    "bound42", "bound43", "friedrich", "improvement_check", "kaehler_bound", "vanishing_check",
    "CliffordRep", "build_rep", "form_mult3", "sym_trace_contract", "vector_mult",
    "Einstein", "GeomInvariants", "GridConfig", "ProductSpec", "TorusRev", "extremize",
    "invariants", "jet_at", "PointJet", "build_a", "build_e", "build_e_formula", "build_t",
    "build_theta", "epsilon_tau", "random_jet", "trace_a",
]
