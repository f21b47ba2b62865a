"""
Curvature endomorphisms at a point
==================================

A point jet stores the Ricci tensor and its covariant derivative.  From it we
build the spinor endomorphisms ``A_X``, ``E`` and ``T`` and compare each with
its closed form.
"""
import numpy as np

from diracbounds import build_e, build_e_formula, build_rep, build_t, random_jet, trace_a, vector_mult
from diracbounds.endomorphism import build_t_commutator, theta_action

rng = np.random.default_rng(42)
n = 6
rep = build_rep(n)
jet = random_jet(n, rng)

# %%
# Random jets are symmetrized and then corrected so that the contracted
# Bianchi identity ``div Ric = dR / 2`` holds; the identities need it.
print("div Ric - dR/2:", np.abs(np.einsum("kik->i", jet.grad_ric) - 0.5 * jet.dR).max())

# %%
# The frame trace of ``A`` is a Clifford multiple of ``dR``.
print("trace A residual:", np.abs(trace_a(rep, jet) + 0.25 * vector_mult(rep, jet.dR)).max())

# %%
# ``E`` from its definition and from the closed formula; it is nonnegative.
e = build_e(rep, jet)
print("E residual:", np.linalg.norm(e - build_e_formula(rep, jet), 2))
print("spectrum of E:", np.round(np.linalg.eigvalsh(e), 4))

# %%
# ``T`` three ways: definition, commutator sum, and the action of a 3-form
# built from ``[nabla Ric, Ric]``.
t = build_t(rep, jet)
print("T vs commutator:", np.linalg.norm(t - build_t_commutator(rep, jet), 2))
print("T vs 3-form:   ", np.linalg.norm(t - theta_action(rep, jet), 2))
print("tau = min eig T:", np.linalg.eigvalsh(t).min())
